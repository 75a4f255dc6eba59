//! The spectral hull: q-eigenvectors of the transposed correlation
//! operator whose A×A reshape is positive semidefinite, and the extreme
//! rays of that cone.
//!
//! "v ≥ 0" is read as positive semidefiniteness of the reshape; the
//! published extreme rays have negative entries, so the entrywise reading
//! is untenable. Semi-positivity is reduced to linear inequalities by
//! simultaneously diagonalizing the (commuting, symmetric) reshaped basis
//! matrices over the rationals; inputs for which that fails are reported
//! as unsupported rather than approximated.

use num_traits::{Signed, Zero};

use crate::bisubstitution::{BiSubstitution, ErgodicDecomposition};
use crate::matrix::RatMat;
use crate::rational::{rat, Rat};
use crate::substitution::Substitution;

#[derive(Debug, thiserror::Error)]
pub enum HullError {
    #[error("transient solve is singular; hull candidates unavailable")]
    TransientSolveSingular,
    #[error("hull not polyhedral by this method; unsupported input: {0}")]
    NotPolyhedral(String),
    #[error("semi-positivity region is unbounded; constraints are missing")]
    Unbounded,
}

/// C_S = Σ_j R_j ⊗ R_j as an exact matrix. Column sums all equal q.
pub fn correlation_operator(s: &Substitution) -> RatMat {
    let n = s.alphabet_size().pow(2);
    let counts = BiSubstitution::build(s).count_matrix();
    let mut m = RatMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = rat(counts[i][j] as i64);
        }
    }
    m
}

/// The affine-in-w family of hull candidates: v(w) = Σ_j w_j · basis[j].
#[derive(Debug, Clone)]
pub struct HullFamily {
    /// One vector per ergodic class, length A².
    pub basis: Vec<Vec<Rat>>,
}

impl HullFamily {
    pub fn class_count(&self) -> usize {
        self.basis.len()
    }

    pub fn evaluate(&self, w: &[Rat]) -> Vec<Rat> {
        let n = self.basis[0].len();
        let mut v = vec![Rat::zero(); n];
        for (wj, bj) in w.iter().zip(self.basis.iter()) {
            for (x, y) in v.iter_mut().zip(bj.iter()) {
                *x = &*x + &(wj * y);
            }
        }
        v
    }
}

/// Candidates via the transient-correction formula
/// v = V + P_T (qI − P_T C_Sᵗ)⁻¹ P_T C_Sᵗ V with V = Σ_j w_j Ē_j.
/// With an empty transient part, v(w) = V exactly.
pub fn hull_candidates(
    s: &Substitution,
    d: &ErgodicDecomposition,
) -> Result<HullFamily, HullError> {
    let n = s.alphabet_size().pow(2);
    let q = rat(s.length() as i64);
    let cst = correlation_operator(s).transpose();
    let indicators: Vec<Vec<Rat>> = d
        .classes
        .iter()
        .map(|class| {
            let mut e = vec![Rat::zero(); n];
            for &p in class {
                e[p] = rat(1);
            }
            e
        })
        .collect();
    if d.transient.is_empty() {
        return Ok(HullFamily { basis: indicators });
    }
    // Assemble qI − P_T C_Sᵗ (P_T zeroes the non-transient rows).
    let transient: std::collections::BTreeSet<usize> = d.transient.iter().copied().collect();
    let mut lhs = RatMat::identity(n).scale(&q);
    for i in 0..n {
        if transient.contains(&i) {
            for j in 0..n {
                lhs[(i, j)] = &lhs[(i, j)] - &cst[(i, j)];
            }
        }
    }
    let basis = indicators
        .into_iter()
        .map(|e| {
            let mut b = cst.mul_vec(&e);
            for (i, x) in b.iter_mut().enumerate() {
                if !transient.contains(&i) {
                    *x = Rat::zero();
                }
            }
            let z = lhs.solve(&b).ok_or(HullError::TransientSolveSingular)?;
            let mut v = e;
            for &t in &transient {
                v[t] = &v[t] + &z[t];
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>, HullError>>()?;
    Ok(HullFamily { basis })
}

/// A linear form in the class weights w; nonnegativity of all forms is
/// equivalent to positive semidefiniteness of the reshaped v(w).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: Vec<Rat>,
}

impl LinearForm {
    pub fn eval(&self, w: &[Rat]) -> Rat {
        self.coeffs
            .iter()
            .zip(w.iter())
            .map(|(c, x)| c * x)
            .fold(Rat::zero(), |acc, t| acc + t)
    }

    /// Human-readable rendering, e.g. "w1 - w2 + 2 w3".
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if mag == rat(1) {
                out.push_str(&format!("w{}", i + 1));
            } else {
                out.push_str(&format!("{} w{}", crate::rational::rat_to_string(&mag), i + 1));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Linear forms whose joint nonnegativity characterizes semi-positivity,
/// obtained from a common rational eigenbasis of the reshaped basis
/// matrices.
pub fn semipositivity_constraints(
    s: &Substitution,
    family: &HullFamily,
) -> Result<Vec<LinearForm>, HullError> {
    let a = s.alphabet_size();
    let mats: Vec<RatMat> = family
        .basis
        .iter()
        .map(|v| reshape(v, a))
        .collect();
    for (j, m) in mats.iter().enumerate() {
        if !m.is_symmetric() {
            return Err(HullError::NotPolyhedral(format!(
                "reshaped basis matrix {} is not symmetric",
                j + 1
            )));
        }
    }
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            if mats[i].mul(&mats[j]) != mats[j].mul(&mats[i]) {
                return Err(HullError::NotPolyhedral(format!(
                    "reshaped basis matrices {} and {} do not commute",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    // Refine ℚ^A into common eigenspaces.
    let mut subspaces: Vec<Vec<Vec<Rat>>> = vec![(0..a)
        .map(|i| {
            let mut e = vec![Rat::zero(); a];
            e[i] = rat(1);
            e
        })
        .collect()];
    for b in &mats {
        let mut refined = Vec::new();
        for sub in &subspaces {
            if sub.len() == 1 {
                refined.push(sub.clone());
                continue;
            }
            let restricted = restrict(b, sub).ok_or_else(|| {
                HullError::NotPolyhedral("subspace not invariant under basis matrix".into())
            })?;
            let eigs = restricted.rational_eigenvalues();
            let mut covered = 0;
            let mut pieces = Vec::new();
            for lam in &eigs {
                let mut shifted = restricted.clone();
                for i in 0..shifted.rows {
                    shifted[(i, i)] = &shifted[(i, i)] - lam;
                }
                let ker = shifted.kernel();
                if ker.is_empty() {
                    continue;
                }
                covered += ker.len();
                pieces.push(
                    ker.iter()
                        .map(|coords| lift(sub, coords))
                        .collect::<Vec<_>>(),
                );
            }
            if covered != sub.len() {
                return Err(HullError::NotPolyhedral(
                    "basis matrices require an irrational eigenbasis".into(),
                ));
            }
            refined.extend(pieces);
        }
        subspaces = refined;
    }
    // One form per common eigenspace: the eigenvalue of v(w) as a linear
    // function of w.
    let mut forms: Vec<LinearForm> = Vec::new();
    for sub in &subspaces {
        let v = &sub[0];
        let pivot = v.iter().position(|x| !x.is_zero()).expect("zero basis vector");
        let coeffs: Vec<Rat> = mats
            .iter()
            .map(|b| {
                let bv = b.mul_vec(v);
                &bv[pivot] / &v[pivot]
            })
            .collect();
        let form = normalize_form(LinearForm { coeffs });
        // An identically zero eigenvalue functional constrains nothing.
        if form.coeffs.iter().any(|c| !c.is_zero()) && !forms.contains(&form) {
            forms.push(form);
        }
    }
    forms.sort_by(|x, y| y.coeffs.cmp(&x.coeffs));
    Ok(forms)
}

fn normalize_form(f: LinearForm) -> LinearForm {
    let Some(p) = f.coeffs.iter().find(|c| !c.is_zero()) else {
        return f;
    };
    let scale = p.abs();
    LinearForm {
        coeffs: f.coeffs.iter().map(|c| c / &scale).collect(),
    }
}

fn reshape(v: &[Rat], a: usize) -> RatMat {
    let mut m = RatMat::zeros(a, a);
    for i in 0..a {
        for j in 0..a {
            m[(i, j)] = v[i * a + j].clone();
        }
    }
    m
}

/// Matrix of `b` restricted to the span of `sub` (columns), or `None` if
/// the subspace is not invariant.
fn restrict(b: &RatMat, sub: &[Vec<Rat>]) -> Option<RatMat> {
    let a = sub[0].len();
    let dim = sub.len();
    let mut s = RatMat::zeros(a, dim);
    for (j, v) in sub.iter().enumerate() {
        for i in 0..a {
            s[(i, j)] = v[i].clone();
        }
    }
    let mut c = RatMat::zeros(dim, dim);
    for (j, v) in sub.iter().enumerate() {
        let bv = b.mul_vec(v);
        let col = s.solve(&bv)?;
        for i in 0..dim {
            c[(i, j)] = col[i].clone();
        }
    }
    Some(c)
}

fn lift(sub: &[Vec<Rat>], coords: &[Rat]) -> Vec<Rat> {
    let a = sub[0].len();
    let mut out = vec![Rat::zero(); a];
    for (c, v) in coords.iter().zip(sub.iter()) {
        for i in 0..a {
            out[i] = &out[i] + &(c * &v[i]);
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct ExtremeRays {
    /// Vertices of {w : forms ≥ 0, w₁ = 1}, sorted descending.
    pub vertices: Vec<Vec<Rat>>,
    /// v(w) at each vertex, normalized so the first nonzero coordinate
    /// is 1; same order as `vertices`.
    pub rays: Vec<Vec<Rat>>,
}

/// Exact vertex enumeration of {w : all forms ≥ 0, w₁ = 1} over
/// constraint subsets; each vertex is mapped through v(w).
pub fn extreme_rays(
    family: &HullFamily,
    forms: &[LinearForm],
) -> Result<ExtremeRays, HullError> {
    let k = family.class_count();
    // Lineality / recession-direction check: any nonzero d with d₁ = 0 and
    // all forms ≥ 0 on d makes the polytope unbounded.
    if k >= 2 && has_recession_direction(forms, k) {
        return Err(HullError::Unbounded);
    }
    let mut vertices: Vec<Vec<Rat>> = Vec::new();
    if k == 1 {
        let w = vec![rat(1)];
        if forms.iter().all(|f| !f.eval(&w).is_negative()) {
            vertices.push(w);
        }
    } else {
        for subset in subsets(forms.len(), k - 1) {
            let mut sys = RatMat::zeros(k, k);
            let mut rhs = vec![Rat::zero(); k];
            sys[(0, 0)] = rat(1);
            rhs[0] = rat(1);
            for (r, &fi) in subset.iter().enumerate() {
                for c in 0..k {
                    sys[(r + 1, c)] = forms[fi].coeffs[c].clone();
                }
            }
            let Some(w) = sys.solve(&rhs) else { continue };
            if forms.iter().all(|f| !f.eval(&w).is_negative()) && !vertices.contains(&w) {
                vertices.push(w);
            }
        }
    }
    vertices.sort_by(|x, y| y.cmp(x));
    let rays = vertices
        .iter()
        .map(|w| normalize_ray(family.evaluate(w)))
        .collect();
    Ok(ExtremeRays { vertices, rays })
}

fn normalize_ray(mut v: Vec<Rat>) -> Vec<Rat> {
    if let Some(p) = v.iter().position(|x| !x.is_zero()) {
        let scale = v[p].clone();
        for x in v.iter_mut() {
            *x = &*x / &scale;
        }
    }
    v
}

fn has_recession_direction(forms: &[LinearForm], k: usize) -> bool {
    // A full line inside the feasible set: kernel of all forms plus d₁ = 0.
    let mut rows: Vec<Vec<Rat>> = forms.iter().map(|f| f.coeffs.clone()).collect();
    let mut e1 = vec![Rat::zero(); k];
    e1[0] = rat(1);
    rows.push(e1);
    let m = RatMat::from_rows(rows);
    if !m.kernel().is_empty() {
        return true;
    }
    // Extreme directions: K−2 active forms plus d₁ = 0 give a candidate
    // line; feasibility of either orientation means unboundedness.
    if k < 2 {
        return false;
    }
    for subset in subsets(forms.len(), k - 2) {
        let mut rows: Vec<Vec<Rat>> = subset
            .iter()
            .map(|&fi| forms[fi].coeffs.clone())
            .collect();
        let mut e1 = vec![Rat::zero(); k];
        e1[0] = rat(1);
        rows.push(e1);
        let m = RatMat::from_rows(rows);
        for d in m.kernel() {
            if d.iter().all(|x| x.is_zero()) {
                continue;
            }
            let feasible = |dir: &[Rat]| forms.iter().all(|f| !f.eval(dir).is_negative());
            let neg: Vec<Rat> = d.iter().map(|x| -x.clone()).collect();
            if feasible(&d) || feasible(&neg) {
                return true;
            }
        }
    }
    false
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Full hull computation: candidates, constraints, and extreme rays.
pub struct Hull {
    pub family: HullFamily,
    pub forms: Vec<LinearForm>,
    pub extreme: ExtremeRays,
}

pub fn compute_hull(s: &Substitution, d: &ErgodicDecomposition) -> Result<Hull, HullError> {
    let family = hull_candidates(s, d)?;
    let forms = semipositivity_constraints(s, &family)?;
    let extreme = extreme_rays(&family, &forms)?;
    Ok(Hull {
        family,
        forms,
        extreme,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisubstitution::BiSubstitution;
    use crate::fixtures::{rs_substitution, rsl_substitution};

    fn rsl_hull() -> (Substitution, Hull) {
        let s = rsl_substitution();
        let d = BiSubstitution::build(&s).ergodic_decomposition().unwrap();
        let h = compute_hull(&s, &d).unwrap();
        (s, h)
    }

    #[test]
    fn correlation_operator_column_sums_equal_q() {
        for s in [rsl_substitution(), rs_substitution()] {
            let c = correlation_operator(&s);
            let q = rat(s.length() as i64);
            for j in 0..c.cols {
                let sum = (0..c.rows).fold(Rat::zero(), |acc, i| acc + c[(i, j)].clone());
                assert_eq!(sum, q);
            }
        }
        // And C_S equals R₀⊗R₀ + R₁⊗R₁ assembled by hand for RSL.
        let s = rsl_substitution();
        let r0 = s.instruction_matrix(0);
        let r1 = s.instruction_matrix(1);
        assert_eq!(correlation_operator(&s), r0.kron(&r0).add(&r1.kron(&r1)));
    }

    #[test]
    fn rsl_candidates_have_published_shape() {
        let (s, h) = rsl_hull();
        // v(w) reshaped is: diagonal w₁, anti-diagonal w₂, w₃ elsewhere.
        let w = vec![rat(5), rat(7), rat(11)];
        let v = h.family.evaluate(&w);
        let a = s.alphabet_size();
        for i in 0..a {
            for j in 0..a {
                let expected = if i == j {
                    rat(5)
                } else if i + j == a - 1 {
                    rat(7)
                } else {
                    rat(11)
                };
                assert_eq!(v[i * a + j], expected);
            }
        }
    }

    #[test]
    fn single_indicator_weight_recovers_class_indicator() {
        let (_, h) = rsl_hull();
        let v = h.family.evaluate(&[rat(1), rat(0), rat(0)]);
        assert_eq!(v, h.family.basis[0]);
    }

    #[test]
    fn rsl_constraint_forms_match_published_inequalities() {
        let (_, h) = rsl_hull();
        // {w₁ − w₂, w₁ + w₂ + 2w₃, w₁ + w₂ − 2w₃} up to ordering.
        let rendered: Vec<String> = h.forms.iter().map(|f| f.render()).collect();
        let expected = [
            "w1 + w2 + 2 w3",
            "w1 + w2 - 2 w3",
            "w1 - w2",
        ];
        assert_eq!(rendered.len(), 3);
        for e in expected {
            assert!(rendered.iter().any(|r| r == e), "missing {e}: {rendered:?}");
        }
    }

    #[test]
    fn all_ones_weights_give_psd_rank_one_matrix() {
        let (_, h) = rsl_hull();
        let w = vec![rat(1), rat(1), rat(1)];
        // v is the all-ones matrix; eigenvalue forms evaluate to {4, 0, 0, 0}.
        let mut vals: Vec<Rat> = h.forms.iter().map(|f| f.eval(&w)).collect();
        vals.sort();
        // Three distinct forms (the double eigenvalue is deduplicated).
        assert_eq!(vals, vec![rat(0), rat(0), rat(4)]);
    }

    #[test]
    fn rsl_vertices_and_rays_match_published_values() {
        let (_, h) = rsl_hull();
        assert_eq!(
            h.extreme.vertices,
            vec![
                vec![rat(1), rat(1), rat(1)],
                vec![rat(1), rat(1), rat(-1)],
                vec![rat(1), rat(-1), rat(0)],
            ]
        );
        let v1: Vec<Rat> = vec![1i64; 16].into_iter().map(rat).collect();
        let v2: Vec<Rat> = [1, -1, -1, 1, -1, 1, 1, -1, -1, 1, 1, -1, 1, -1, -1, 1]
            .iter()
            .map(|&x| rat(x))
            .collect();
        let v3: Vec<Rat> = [1, 0, 0, -1, 0, 1, -1, 0, 0, -1, 1, 0, -1, 0, 0, 1]
            .iter()
            .map(|&x| rat(x))
            .collect();
        assert_eq!(h.extreme.rays, vec![v1, v2, v3]);
    }

    #[test]
    fn rays_are_exact_q_eigenvectors() {
        for s in [rsl_substitution(), rs_substitution()] {
            let d = BiSubstitution::build(&s).ergodic_decomposition().unwrap();
            let h = compute_hull(&s, &d).unwrap();
            let cst = correlation_operator(&s).transpose();
            let q = rat(s.length() as i64);
            assert!(!h.extreme.rays.is_empty());
            for ray in &h.extreme.rays {
                let lhs = cst.mul_vec(ray);
                let rhs: Vec<Rat> = ray.iter().map(|x| x * &q).collect();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn all_ones_ray_is_always_present() {
        for s in [rsl_substitution(), rs_substitution()] {
            let d = BiSubstitution::build(&s).ergodic_decomposition().unwrap();
            let h = compute_hull(&s, &d).unwrap();
            let n = s.alphabet_size().pow(2);
            let ones: Vec<Rat> = vec![rat(1); n];
            assert!(h.extreme.rays.contains(&ones));
        }
    }

    #[test]
    fn rs_hull_has_nontrivial_transient_components() {
        let s = rs_substitution();
        let d = BiSubstitution::build(&s).ergodic_decomposition().unwrap();
        let h = compute_hull(&s, &d).unwrap();
        assert!(!d.transient.is_empty());
        // The candidate family must pick up nonzero transient entries.
        let some_transient_nonzero = h
            .family
            .basis
            .iter()
            .any(|b| d.transient.iter().any(|&t| !b[t].is_zero()));
        assert!(some_transient_nonzero);
        // Vertex count at least the class count.
        assert!(h.extreme.vertices.len() >= d.classes.len());
    }
}
