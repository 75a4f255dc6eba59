//! The induced substitution on ordered letter pairs and its decomposition
//! into ergodic classes and a transient part.

use std::collections::BTreeSet;

use crate::matrix::RatMat;
use crate::substitution::Substitution;

/// Row-major pair index: first letter major.
pub fn pair_index(alpha: usize, gamma: usize, a: usize) -> usize {
    alpha * a + gamma
}

pub fn pair_of_index(idx: usize, a: usize) -> (usize, usize) {
    (idx / a, idx % a)
}

pub fn pair_label(idx: usize, letters: &[String]) -> String {
    let (al, ga) = pair_of_index(idx, letters.len());
    format!("{}{}", letters[al], letters[ga])
}

#[derive(Debug, thiserror::Error)]
pub enum DecompositionError {
    #[error("no exponent h ≤ {0} keeps every ergodic class irreducible")]
    ExponentBoundExceeded(u64),
}

/// The bi-substitution: q instruction maps on the pair alphabet, the j-th
/// sending αγ to R_j(α)R_j(γ).
#[derive(Debug, Clone)]
pub struct BiSubstitution {
    alphabet_size: usize,
    q: usize,
    /// maps[j][pair] = image pair under the j-th instruction.
    maps: Vec<Vec<usize>>,
}

impl BiSubstitution {
    pub fn build(s: &Substitution) -> Self {
        let a = s.alphabet_size();
        let images = s.instruction_images();
        let maps = images
            .iter()
            .map(|img| {
                (0..a * a)
                    .map(|p| {
                        let (al, ga) = pair_of_index(p, a);
                        pair_index(img[al], img[ga], a)
                    })
                    .collect()
            })
            .collect();
        BiSubstitution {
            alphabet_size: a,
            q: s.length(),
            maps,
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn pair_count(&self) -> usize {
        self.alphabet_size * self.alphabet_size
    }

    pub fn length(&self) -> usize {
        self.q
    }

    pub fn map(&self, j: usize) -> &[usize] {
        &self.maps[j]
    }

    /// Matrix of the j-th instruction map; equals R_j ⊗ R_j under the
    /// project Kronecker convention (verified in tests).
    pub fn instruction_matrix(&self, j: usize) -> RatMat {
        let n = self.pair_count();
        let mut m = RatMat::zeros(n, n);
        for (src, &dst) in self.maps[j].iter().enumerate() {
            m[(dst, src)] = &m[(dst, src)] + &crate::rational::rat(1);
        }
        m
    }

    /// Substitution matrix of the bi-substitution: counts of pair α at
    /// position-wise images of pair γ. Equals C_S = Σ_j R_j ⊗ R_j.
    pub fn count_matrix(&self) -> Vec<Vec<u64>> {
        let n = self.pair_count();
        let mut m = vec![vec![0u64; n]; n];
        for map in &self.maps {
            for (src, &dst) in map.iter().enumerate() {
                m[dst][src] += 1;
            }
        }
        m
    }

    /// Partition of the pair alphabet into ergodic classes (exit-free
    /// strongly connected components of the instruction graph) and the
    /// transient remainder, together with the least exponent h for which
    /// every class stays irreducible (strongly connected) under S^h.
    /// Note a class may be periodic — the RSL mixed class is bipartite —
    /// so irreducibility, not primitivity, is the invariant that survives
    /// taking powers.
    pub fn ergodic_decomposition(&self) -> Result<ErgodicDecomposition, DecompositionError> {
        let n = self.pair_count();
        let adj: Vec<BTreeSet<usize>> = (0..n)
            .map(|p| self.maps.iter().map(|m| m[p]).collect())
            .collect();
        let sccs = tarjan_scc(&adj);
        let mut comp_of = vec![0usize; n];
        for (ci, comp) in sccs.iter().enumerate() {
            for &v in comp {
                comp_of[v] = ci;
            }
        }
        let mut classes = Vec::new();
        let mut transient = Vec::new();
        for (ci, comp) in sccs.iter().enumerate() {
            let recurrent = comp
                .iter()
                .all(|&v| adj[v].iter().all(|&w| comp_of[w] == ci));
            if recurrent {
                let mut c = comp.clone();
                c.sort_unstable();
                classes.push(c);
            } else {
                transient.extend(comp.iter().copied());
            }
        }
        // Smaller classes first, ties by smallest pair index. The diagonal
        // class leads and the large mixed class trails, matching the
        // conventional E_1, E_2, ... numbering for the worked examples.
        classes.sort_by_key(|c| (c.len(), c[0]));
        transient.sort_unstable();

        // Least h with every restricted class matrix irreducible under S^h.
        let counts = self.count_matrix();
        let periods: Vec<u64> = classes.iter().map(|c| class_period(c, &adj)).collect();
        let bound = periods
            .iter()
            .fold(1u64, |acc, &p| num_integer::lcm(acc, p))
            .min(1 << 16);
        let mut exponent = None;
        'outer: for h in 1..=bound.min(64) {
            for class in &classes {
                if !restricted_power_irreducible(class, &counts, h as usize) {
                    continue 'outer;
                }
            }
            exponent = Some(h);
            break;
        }
        let exponent = exponent.ok_or(DecompositionError::ExponentBoundExceeded(bound))?;
        Ok(ErgodicDecomposition {
            classes,
            transient,
            exponent,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErgodicDecomposition {
    /// Disjoint recurrent pair-sets, each sorted, ordered by smallest
    /// pair index.
    pub classes: Vec<Vec<usize>>,
    pub transient: Vec<usize>,
    pub exponent: u64,
}

impl ErgodicDecomposition {
    pub fn class_labels(&self, letters: &[String]) -> Vec<Vec<String>> {
        self.classes
            .iter()
            .map(|c| c.iter().map(|&p| pair_label(p, letters)).collect())
            .collect()
    }

    pub fn transient_labels(&self, letters: &[String]) -> Vec<String> {
        self.transient
            .iter()
            .map(|&p| pair_label(p, letters))
            .collect()
    }
}

/// Period of a strongly connected component: gcd over edges of
/// level[u] + 1 − level[v] for a BFS levelling.
fn class_period(class: &[usize], adj: &[BTreeSet<usize>]) -> u64 {
    let inside: BTreeSet<usize> = class.iter().copied().collect();
    let mut level = std::collections::HashMap::new();
    let root = class[0];
    level.insert(root, 0i64);
    let mut queue = std::collections::VecDeque::from([root]);
    let mut g: i64 = 0;
    while let Some(u) = queue.pop_front() {
        let lu = level[&u];
        for &v in &adj[u] {
            if !inside.contains(&v) {
                continue;
            }
            match level.get(&v) {
                None => {
                    level.insert(v, lu + 1);
                    queue.push_back(v);
                }
                Some(&lv) => {
                    g = num_integer::gcd(g, (lu + 1 - lv).abs());
                }
            }
        }
    }
    g.max(1) as u64
}

/// Is (M restricted to `class`)^h irreducible, i.e. is the class still a
/// single strongly connected component under h-step walks?
fn restricted_power_irreducible(class: &[usize], counts: &[Vec<u64>], h: usize) -> bool {
    let k = class.len();
    let base: Vec<Vec<bool>> = class
        .iter()
        .map(|&x| class.iter().map(|&y| counts[x][y] > 0).collect())
        .collect();
    let step = bool_pow(&base, h);
    // Transitive closure over positive multiples of h steps.
    let mut reach = step.clone();
    let mut pow = step.clone();
    for _ in 1..k {
        pow = bool_mul(&pow, &step);
        for i in 0..k {
            for j in 0..k {
                reach[i][j] |= pow[i][j];
            }
        }
    }
    reach.iter().all(|row| row.iter().all(|&x| x))
}

fn bool_mul(x: &[Vec<bool>], y: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).any(|k| x[i][k] && y[k][j]))
                .collect()
        })
        .collect()
}

fn bool_pow(x: &[Vec<bool>], h: usize) -> Vec<Vec<bool>> {
    let mut out = x.to_vec();
    for _ in 1..h {
        out = bool_mul(&out, x);
    }
    out
}

fn tarjan_scc(adj: &[BTreeSet<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        adj: &'a [BTreeSet<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        counter: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut State, v: usize) {
        s.index[v] = Some(s.counter);
        s.low[v] = s.counter;
        s.counter += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        let next: Vec<usize> = s.adj[v].iter().copied().collect();
        for w in next {
            if s.index[w].is_none() {
                visit(s, w);
                s.low[v] = s.low[v].min(s.low[w]);
            } else if s.on_stack[w] {
                s.low[v] = s.low[v].min(s.index[w].unwrap());
            }
        }
        if s.low[v] == s.index[v].unwrap() {
            let mut comp = Vec::new();
            loop {
                let w = s.stack.pop().unwrap();
                s.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            s.out.push(comp);
        }
    }
    let n = adj.len();
    let mut state = State {
        adj,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        counter: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if state.index[v].is_none() {
            visit(&mut state, v);
        }
    }
    state.out
}
