//! Constant-length substitutions: parsing, instruction matrices,
//! primitivity, aperiodicity, letter frequencies, height, fixed points.

use std::collections::{BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use serde::Deserialize;

use crate::matrix::RatMat;
use crate::rational::{rat, rat_to_f64, CRat, Rat};

#[derive(Debug, thiserror::Error)]
pub enum SubstitutionError {
    #[error("malformed substitution document: {0}")]
    Malformed(String),
    #[error("alphabet must have at least 2 distinct letters")]
    AlphabetTooSmall,
    #[error("duplicate letter {0:?} in alphabet")]
    DuplicateLetter(String),
    #[error("substitution length must be at least 2 (got {0})")]
    DegenerateLength(usize),
    #[error("missing rule for letter {0:?}")]
    MissingRule(String),
    #[error("rule for {letter:?} has length {got}, expected {expected}")]
    RuleLength {
        letter: String,
        got: usize,
        expected: usize,
    },
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
    #[error("substitution is not primitive (no positive power up to the Wielandt bound {0})")]
    NotPrimitive(usize),
    #[error("substitution is not one-to-one on letters; Pansiot's criterion is inapplicable")]
    NotInjective,
    #[error("no self-starting seed letter (no letter whose rule begins with itself)")]
    NoFixedPointSeed,
    #[error("letter {0:?} is not self-starting")]
    SeedNotSelfStarting(String),
    #[error("height horizon exceeded without stabilizing")]
    HeightHorizonExceeded,
    #[error("index budget exceeded: q^p = {0}^{1} too large")]
    IndexBudget(usize, usize),
}

/// A substitution of constant length `q` on an ordered alphabet.
/// Alphabet order fixes all matrix and vector indexing project-wide.
#[derive(Debug, Clone, PartialEq)]
pub struct Substitution {
    letters: Vec<String>,
    lookup: HashMap<String, usize>,
    q: usize,
    /// rules[letter][position] = image letter, by index.
    rules: Vec<Vec<usize>>,
    weights: Option<Vec<CRat>>,
}

#[derive(Deserialize)]
struct RawSpec {
    alphabet: Vec<String>,
    length: usize,
    rules: HashMap<String, Vec<String>>,
    #[serde(default)]
    weights: Option<HashMap<String, toml::Value>>,
}

impl Substitution {
    pub fn new(
        alphabet: Vec<String>,
        q: usize,
        rule_words: Vec<Vec<String>>,
        weights: Option<Vec<CRat>>,
    ) -> Result<Self, SubstitutionError> {
        if alphabet.len() < 2 {
            return Err(SubstitutionError::AlphabetTooSmall);
        }
        if q < 2 {
            return Err(SubstitutionError::DegenerateLength(q));
        }
        let mut lookup = HashMap::new();
        for (i, l) in alphabet.iter().enumerate() {
            if lookup.insert(l.clone(), i).is_some() {
                return Err(SubstitutionError::DuplicateLetter(l.clone()));
            }
        }
        if rule_words.len() != alphabet.len() {
            return Err(SubstitutionError::Malformed(
                "rules must cover exactly the alphabet".into(),
            ));
        }
        let mut rules = Vec::with_capacity(alphabet.len());
        for (i, word) in rule_words.iter().enumerate() {
            if word.len() != q {
                return Err(SubstitutionError::RuleLength {
                    letter: alphabet[i].clone(),
                    got: word.len(),
                    expected: q,
                });
            }
            let mut image = Vec::with_capacity(q);
            for l in word {
                let idx = *lookup
                    .get(l)
                    .ok_or_else(|| SubstitutionError::UnknownLetter(l.clone()))?;
                image.push(idx);
            }
            rules.push(image);
        }
        if let Some(w) = &weights {
            if w.len() != alphabet.len() {
                return Err(SubstitutionError::Malformed(
                    "weights must cover exactly the alphabet".into(),
                ));
            }
        }
        Ok(Substitution {
            letters: alphabet,
            lookup,
            q,
            rules,
            weights,
        })
    }

    /// Parse the TOML substitution document described in the README.
    pub fn parse(text: &str) -> Result<Self, SubstitutionError> {
        let raw: RawSpec = toml::from_str(text)
            .map_err(|e| SubstitutionError::Malformed(e.to_string()))?;
        let mut rule_words = Vec::with_capacity(raw.alphabet.len());
        for letter in &raw.alphabet {
            let word = raw
                .rules
                .get(letter)
                .ok_or_else(|| SubstitutionError::MissingRule(letter.clone()))?;
            rule_words.push(word.clone());
        }
        for key in raw.rules.keys() {
            if !raw.alphabet.contains(key) {
                return Err(SubstitutionError::UnknownLetter(key.clone()));
            }
        }
        let weights = match &raw.weights {
            None => None,
            Some(map) => {
                for key in map.keys() {
                    if !raw.alphabet.contains(key) {
                        return Err(SubstitutionError::UnknownLetter(key.clone()));
                    }
                }
                let mut w = Vec::with_capacity(raw.alphabet.len());
                for letter in &raw.alphabet {
                    let value = map.get(letter).ok_or_else(|| {
                        SubstitutionError::Malformed(format!(
                            "weights present but missing letter {letter:?}"
                        ))
                    })?;
                    w.push(parse_weight(value)?);
                }
                Some(w)
            }
        };
        Substitution::new(raw.alphabet, raw.length, rule_words, weights)
    }

    /// Serialize back to the document format. `parse(serialize(s)) == s`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let quoted: Vec<String> = self.letters.iter().map(|l| format!("{l:?}")).collect();
        out.push_str(&format!("alphabet = [{}]\n", quoted.join(", ")));
        out.push_str(&format!("length = {}\n\n[rules]\n", self.q));
        for (i, image) in self.rules.iter().enumerate() {
            let word: Vec<String> = image
                .iter()
                .map(|&j| format!("{:?}", self.letters[j]))
                .collect();
            out.push_str(&format!("{:?} = [{}]\n", self.letters[i], word.join(", ")));
        }
        if let Some(w) = &self.weights {
            out.push_str("\n[weights]\n");
            for (i, c) in w.iter().enumerate() {
                if c.im.is_zero() {
                    out.push_str(&format!(
                        "{:?} = {}\n",
                        self.letters[i],
                        format_weight_scalar(&c.re)
                    ));
                } else {
                    out.push_str(&format!(
                        "{:?} = [{}, {}]\n",
                        self.letters[i],
                        format_weight_scalar(&c.re),
                        format_weight_scalar(&c.im)
                    ));
                }
            }
        }
        out
    }

    pub fn alphabet_size(&self) -> usize {
        self.letters.len()
    }

    pub fn length(&self) -> usize {
        self.q
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn letter_index(&self, label: &str) -> Option<usize> {
        self.lookup.get(label).copied()
    }

    pub fn rule(&self, letter: usize) -> &[usize] {
        &self.rules[letter]
    }

    pub fn weights(&self) -> Option<&[CRat]> {
        self.weights.as_deref()
    }

    /// The j-th instruction map as a function on letter indices:
    /// `image[γ] = rules[γ][j]`.
    pub fn instruction_image(&self, j: usize) -> Vec<usize> {
        (0..self.letters.len()).map(|g| self.rules[g][j]).collect()
    }

    pub fn instruction_images(&self) -> Vec<Vec<usize>> {
        (0..self.q).map(|j| self.instruction_image(j)).collect()
    }

    /// Matrix form of the j-th instruction: `R_j[α][γ] = [rules[γ][j] = α]`.
    pub fn instruction_matrix(&self, j: usize) -> RatMat {
        let a = self.letters.len();
        let mut m = RatMat::zeros(a, a);
        for g in 0..a {
            m[(self.rules[g][j], g)] = rat(1);
        }
        m
    }

    pub fn instruction_matrices(&self) -> Vec<RatMat> {
        (0..self.q).map(|j| self.instruction_matrix(j)).collect()
    }

    /// Substitution matrix `M[α][γ]` = occurrences of α in rules[γ];
    /// equals the sum of the instruction matrices.
    pub fn substitution_matrix(&self) -> Vec<Vec<u64>> {
        let a = self.letters.len();
        let mut m = vec![vec![0u64; a]; a];
        for g in 0..a {
            for &al in &self.rules[g] {
                m[al][g] += 1;
            }
        }
        m
    }

    /// Instruction maps of the p-fold iterate S^p, indexed by position
    /// j ∈ [0, q^p). Digit order: the most significant base-q digit of j
    /// selects the instruction applied first (outermost block), validated
    /// against S²(0) and S³(0) in tests.
    pub fn power_instruction_images(
        &self,
        p: usize,
    ) -> Result<Vec<Vec<usize>>, SubstitutionError> {
        assert!(p >= 1);
        let qp = self
            .q
            .checked_pow(p as u32)
            .filter(|&n| n <= 1 << 24)
            .ok_or(SubstitutionError::IndexBudget(self.q, p))?;
        let images = self.instruction_images();
        let a = self.letters.len();
        let mut out = Vec::with_capacity(qp);
        for j in 0..qp {
            // digits of j, most significant first
            let mut digits = Vec::with_capacity(p);
            let mut rem = j;
            for _ in 0..p {
                digits.push(rem % self.q);
                rem /= self.q;
            }
            digits.reverse();
            let map: Vec<usize> = (0..a)
                .map(|g| digits.iter().fold(g, |l, &d| images[d][l]))
                .collect();
            out.push(map);
        }
        Ok(out)
    }

    /// The p-fold iterate S^p as a substitution of length q^p.
    pub fn iterated(&self, p: usize) -> Result<Substitution, SubstitutionError> {
        assert!(p >= 1);
        let maps = self.power_instruction_images(p)?;
        let rule_words: Vec<Vec<String>> = (0..self.letters.len())
            .map(|g| maps.iter().map(|m| self.letters[m[g]].clone()).collect())
            .collect();
        Substitution::new(
            self.letters.clone(),
            maps.len(),
            rule_words,
            self.weights.clone(),
        )
    }

    /// Apply the substitution to a word.
    pub fn apply(&self, word: &[usize]) -> Vec<usize> {
        let mut out = Vec::with_capacity(word.len() * self.q);
        for &l in word {
            out.extend_from_slice(&self.rules[l]);
        }
        out
    }

    /// Least n with M^n entrywise positive, searched up to the Wielandt
    /// bound A² − 2A + 2; `None` means not primitive.
    pub fn primitivity_witness(&self) -> Option<usize> {
        let a = self.letters.len();
        let bound = a * a - 2 * a + 2;
        let m = self.substitution_matrix();
        let base: Vec<Vec<bool>> = m
            .iter()
            .map(|row| row.iter().map(|&x| x > 0).collect())
            .collect();
        let mut pow = base.clone();
        for n in 1..=bound {
            if pow.iter().all(|row| row.iter().all(|&x| x)) {
                return Some(n);
            }
            pow = bool_mat_mul(&pow, &base);
        }
        None
    }

    pub fn is_primitive(&self) -> bool {
        self.primitivity_witness().is_some()
    }

    /// Exact letter-frequency vector: the probability eigenvector of M at
    /// the Perron eigenvalue q.
    pub fn letter_frequencies(&self) -> Result<Vec<Rat>, SubstitutionError> {
        let a = self.letters.len();
        let bound = a * a - 2 * a + 2;
        if !self.is_primitive() {
            return Err(SubstitutionError::NotPrimitive(bound));
        }
        let m = self.substitution_matrix();
        let mut sys = RatMat::zeros(a, a);
        for i in 0..a {
            for j in 0..a {
                sys[(i, j)] = rat(m[i][j] as i64);
            }
            sys[(i, i)] = &sys[(i, i)] - &rat(self.q as i64);
        }
        let kernel = sys.kernel();
        // Primitivity makes the q-eigenspace one-dimensional.
        assert_eq!(kernel.len(), 1, "Perron eigenspace not one-dimensional");
        let v = &kernel[0];
        let total = v.iter().fold(Rat::zero(), |acc, x| acc + x.clone());
        assert!(!total.is_zero());
        let u: Vec<Rat> = v.iter().map(|x| x / &total).collect();
        assert!(u.iter().all(|x| x.is_positive()));
        Ok(u)
    }

    /// The exact set of length-n factors of the substitution language,
    /// computed by closing under the substitution.
    pub fn legal_words(&self, n: usize) -> BTreeSet<Vec<usize>> {
        assert!(n >= 1);
        let a = self.letters.len();
        let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
        // Seed: factors of S^K(γ) with q^K ≥ n.
        for g in 0..a {
            let mut w = vec![g];
            while w.len() < n {
                w = self.apply(&w);
            }
            insert_factors(&mut set, &w, n);
        }
        loop {
            let mut next = set.clone();
            for w in &set {
                insert_factors(&mut next, &self.apply(w), n);
            }
            if next.len() == set.len() {
                return set;
            }
            set = next;
        }
    }

    /// Pansiot's aperiodicity criterion: a primitive substitution that is
    /// one-to-one on letters is aperiodic iff some letter has at least two
    /// distinct (predecessor, successor) neighbourhoods among legal
    /// 3-letter words.
    pub fn aperiodicity_witness(&self) -> Result<AperiodicityWitness, SubstitutionError> {
        let distinct: BTreeSet<&Vec<usize>> = self.rules.iter().collect();
        if distinct.len() != self.rules.len() {
            return Err(SubstitutionError::NotInjective);
        }
        let words = self.legal_words(3);
        let a = self.letters.len();
        let mut hoods: Vec<BTreeSet<(usize, usize)>> = vec![BTreeSet::new(); a];
        for w in &words {
            hoods[w[1]].insert((w[0], w[2]));
        }
        for (letter, set) in hoods.iter().enumerate() {
            if set.len() >= 2 {
                return Ok(AperiodicityWitness {
                    aperiodic: true,
                    letter: Some(letter),
                    neighbourhoods: set.iter().cloned().collect(),
                });
            }
        }
        Ok(AperiodicityWitness {
            aperiodic: false,
            letter: None,
            neighbourhoods: Vec::new(),
        })
    }

    /// First self-starting seed letter (rule image begins with the letter
    /// itself), if any.
    pub fn seed_letter(&self) -> Option<usize> {
        (0..self.rules.len()).find(|&g| self.rules[g][0] == g)
    }

    /// First n letters of the one-sided fixed point starting at `seed`.
    pub fn fixed_point_prefix(
        &self,
        seed: usize,
        n: usize,
    ) -> Result<Vec<usize>, SubstitutionError> {
        if self.rules[seed][0] != seed {
            return Err(SubstitutionError::SeedNotSelfStarting(
                self.letters[seed].clone(),
            ));
        }
        let mut w = vec![seed];
        while w.len() < n {
            w = self.apply(&w);
        }
        w.truncate(n);
        Ok(w)
    }

    /// Height of the substitution: the largest integer coprime to q
    /// dividing g = gcd{n ≥ 1 : fixed-point letter at n equals the seed}.
    /// g is computed over growing prefixes until stable across two
    /// consecutive doublings; the horizon used is reported.
    pub fn height(&self) -> Result<HeightResult, SubstitutionError> {
        let seed = self.seed_letter().ok_or(SubstitutionError::NoFixedPointSeed)?;
        let mut horizon = self.q.pow(6).max(64);
        let cap = 1usize << 24;
        let mut last_g: Option<u64> = None;
        let mut stable = 0;
        loop {
            let prefix = self.fixed_point_prefix(seed, horizon)?;
            let mut g: u64 = 0;
            for (n, &l) in prefix.iter().enumerate().skip(1) {
                if l == prefix[0] {
                    g = num_integer::gcd(g, n as u64);
                    if g == 1 {
                        break;
                    }
                }
            }
            if g != 0 {
                if last_g == Some(g) {
                    stable += 1;
                    if stable >= 2 {
                        let mut h = g;
                        loop {
                            let d = num_integer::gcd(h, self.q as u64);
                            if d == 1 {
                                break;
                            }
                            h /= d;
                        }
                        return Ok(HeightResult {
                            height: h,
                            return_gcd: g,
                            horizon,
                        });
                    }
                } else {
                    stable = 0;
                    last_g = Some(g);
                }
            }
            horizon *= 2;
            if horizon > cap {
                return Err(SubstitutionError::HeightHorizonExceeded);
            }
        }
    }

    /// Empirical letter frequency in a prefix of length n, as floats.
    pub fn empirical_frequencies(&self, seed: usize, n: usize) -> Result<Vec<f64>, SubstitutionError> {
        let prefix = self.fixed_point_prefix(seed, n)?;
        let mut counts = vec![0usize; self.letters.len()];
        for &l in &prefix {
            counts[l] += 1;
        }
        Ok(counts.iter().map(|&c| c as f64 / n as f64).collect())
    }
}

#[derive(Debug, Clone)]
pub struct AperiodicityWitness {
    pub aperiodic: bool,
    pub letter: Option<usize>,
    pub neighbourhoods: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy)]
pub struct HeightResult {
    pub height: u64,
    pub return_gcd: u64,
    pub horizon: usize,
}

fn insert_factors(set: &mut BTreeSet<Vec<usize>>, word: &[usize], n: usize) {
    if word.len() < n {
        return;
    }
    for i in 0..=word.len() - n {
        set.insert(word[i..i + n].to_vec());
    }
}

fn bool_mat_mul(x: &[Vec<bool>], y: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).any(|k| x[i][k] && y[k][j]))
                .collect()
        })
        .collect()
}

fn parse_weight(value: &toml::Value) -> Result<CRat, SubstitutionError> {
    let scalar = |v: &toml::Value| -> Result<Rat, SubstitutionError> {
        match v {
            toml::Value::Integer(i) => Ok(rat(*i)),
            toml::Value::Float(f) => Rat::from_float(*f)
                .ok_or_else(|| SubstitutionError::Malformed("non-finite weight".into())),
            _ => Err(SubstitutionError::Malformed(
                "weight must be a number or a pair of numbers".into(),
            )),
        }
    };
    match value {
        toml::Value::Array(parts) if parts.len() == 2 => Ok(CRat::new(
            scalar(&parts[0])?,
            scalar(&parts[1])?,
        )),
        toml::Value::Array(_) => Err(SubstitutionError::Malformed(
            "complex weight must be a pair [re, im]".into(),
        )),
        other => Ok(CRat::real(scalar(other)?)),
    }
}

fn format_weight_scalar(r: &Rat) -> String {
    use num_traits::One;
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        // Weights with non-unit denominators entered the system as floats;
        // f64 display round-trips exactly.
        format!("{}", rat_to_f64(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{rs_substitution, rsl_substitution};
    use crate::rational::frac;

    #[test]
    fn parse_rsl_document() {
        let s = rsl_substitution();
        assert_eq!(s.alphabet_size(), 4);
        assert_eq!(s.length(), 2);
        assert_eq!(s.rule(0), &[0, 1]);
        assert_eq!(s.rule(1), &[2, 0]);
        assert_eq!(s.rule(2), &[1, 3]);
        assert_eq!(s.rule(3), &[3, 2]);
    }

    #[test]
    fn parse_rejects_degenerate_length() {
        let doc = "alphabet = [\"a\", \"b\"]\nlength = 1\n[rules]\n\"a\" = [\"a\"]\n\"b\" = [\"b\"]\n";
        assert!(matches!(
            Substitution::parse(doc),
            Err(SubstitutionError::DegenerateLength(1))
        ));
    }

    #[test]
    fn parse_rejects_wrong_rule_length() {
        let doc =
            "alphabet = [\"a\", \"b\"]\nlength = 2\n[rules]\n\"a\" = [\"a\", \"b\", \"a\"]\n\"b\" = [\"b\", \"a\"]\n";
        assert!(matches!(
            Substitution::parse(doc),
            Err(SubstitutionError::RuleLength { .. })
        ));
    }

    #[test]
    fn parse_rejects_unknown_letter() {
        let doc = "alphabet = [\"a\", \"b\"]\nlength = 2\n[rules]\n\"a\" = [\"a\", \"c\"]\n\"b\" = [\"b\", \"a\"]\n";
        assert!(matches!(
            Substitution::parse(doc),
            Err(SubstitutionError::UnknownLetter(_))
        ));
    }

    #[test]
    fn parse_rejects_duplicate_letter() {
        let doc = "alphabet = [\"a\", \"a\"]\nlength = 2\n[rules]\n\"a\" = [\"a\", \"a\"]\n";
        assert!(matches!(
            Substitution::parse(doc),
            Err(SubstitutionError::DuplicateLetter(_))
        ));
    }

    #[test]
    fn round_trip_is_identity() {
        for s in [rsl_substitution(), rs_substitution()] {
            let again = Substitution::parse(&s.serialize()).unwrap();
            assert_eq!(s, again);
        }
    }

    #[test]
    fn rsl_instruction_matrices_match_published_form() {
        let s = rsl_substitution();
        let r0 = s.instruction_matrix(0);
        let r1 = s.instruction_matrix(1);
        let want_r0 = RatMat::from_int_rows(&[
            vec![1, 0, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 0, 1],
        ]);
        let want_r1 = RatMat::from_int_rows(&[
            vec![0, 1, 0, 0],
            vec![1, 0, 0, 0],
            vec![0, 0, 0, 1],
            vec![0, 0, 1, 0],
        ]);
        assert_eq!(r0, want_r0);
        assert_eq!(r1, want_r1);
        // M = R0 + R1, columns sum to q.
        let m = s.substitution_matrix();
        let want_m = [[1, 1, 0, 0], [1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 1]];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m[i][j], want_m[i][j]);
            }
        }
    }

    #[test]
    fn instruction_columns_hit_rule_letters() {
        // column γ of R_j has its 1 in row rules[γ][j]
        for s in [rsl_substitution(), rs_substitution()] {
            for j in 0..s.length() {
                let r = s.instruction_matrix(j);
                for g in 0..s.alphabet_size() {
                    for al in 0..s.alphabet_size() {
                        let expected = if s.rule(g)[j] == al { rat(1) } else { rat(0) };
                        assert_eq!(r[(al, g)], expected);
                    }
                }
            }
        }
    }

    #[test]
    fn power_instructions_spell_iterated_images() {
        let s = rsl_substitution();
        // p=1 is the base case.
        assert_eq!(s.power_instruction_images(1).unwrap(), s.instruction_images());
        // p=2 applied to 0 spells S²(0) = 0120.
        let p2 = s.power_instruction_images(2).unwrap();
        let spelled: Vec<usize> = p2.iter().map(|m| m[0]).collect();
        assert_eq!(spelled, vec![0, 1, 2, 0]);
        // p=3 applied to 0 spells 01201301.
        let p3 = s.power_instruction_images(3).unwrap();
        let spelled: Vec<usize> = p3.iter().map(|m| m[0]).collect();
        assert_eq!(spelled, vec![0, 1, 2, 0, 1, 3, 0, 1]);
    }

    #[test]
    fn rsl_primitive_with_witness_three() {
        assert_eq!(rsl_substitution().primitivity_witness(), Some(3));
    }

    #[test]
    fn block_diagonal_not_primitive() {
        let doc = "alphabet = [\"0\", \"1\"]\nlength = 2\n[rules]\n\"0\" = [\"0\", \"0\"]\n\"1\" = [\"1\", \"1\"]\n";
        let s = Substitution::parse(doc).unwrap();
        assert!(!s.is_primitive());
        assert!(matches!(
            s.letter_frequencies(),
            Err(SubstitutionError::NotPrimitive(_))
        ));
    }

    #[test]
    fn rs_primitive() {
        let w = rs_substitution().primitivity_witness().unwrap();
        assert!(w <= 10);
    }

    #[test]
    fn frequencies_uniform_for_rsl_and_rs() {
        for s in [rsl_substitution(), rs_substitution()] {
            let u = s.letter_frequencies().unwrap();
            assert_eq!(u, vec![frac(1, 4); 4]);
        }
    }

    #[test]
    fn legal_words_rsl() {
        let s = rsl_substitution();
        let w1 = s.legal_words(1);
        assert_eq!(w1.len(), 4);
        let w2 = s.legal_words(2);
        for pair in [[0, 1], [1, 2], [2, 0], [1, 3], [3, 0]] {
            assert!(w2.contains(&pair.to_vec()), "missing {pair:?}");
        }
        assert!(!w2.contains(&vec![1, 0]));
        let w3 = s.legal_words(3);
        assert!(w3.contains(&vec![2, 0, 1]));
        assert!(w3.contains(&vec![3, 0, 1]));
    }

    #[test]
    fn aperiodicity_rsl_witness_letter_zero() {
        let s = rsl_substitution();
        let w = s.aperiodicity_witness().unwrap();
        assert!(w.aperiodic);
        let letter = w.letter.unwrap();
        // 0 and 1 both qualify; the scan finds 0 first. Predecessors of 0
        // are 2 and 3.
        assert_eq!(letter, 0);
        let preds: BTreeSet<usize> = w.neighbourhoods.iter().map(|&(p, _)| p).collect();
        assert_eq!(preds, BTreeSet::from([2, 3]));
    }

    #[test]
    fn aperiodicity_requires_injectivity() {
        let doc = "alphabet = [\"0\", \"1\"]\nlength = 2\n[rules]\n\"0\" = [\"0\", \"1\"]\n\"1\" = [\"0\", \"1\"]\n";
        let s = Substitution::parse(doc).unwrap();
        assert!(matches!(
            s.aperiodicity_witness(),
            Err(SubstitutionError::NotInjective)
        ));
    }

    #[test]
    fn aperiodicity_rs() {
        let s = rs_substitution();
        let w = s.aperiodicity_witness().unwrap();
        assert!(w.aperiodic);
    }

    #[test]
    fn height_trivial_for_rsl_and_rs() {
        for s in [rsl_substitution(), rs_substitution()] {
            let h = s.height().unwrap();
            assert_eq!(h.height, 1);
        }
    }

    #[test]
    fn fixed_point_prefixes() {
        let s = rsl_substitution();
        assert_eq!(s.fixed_point_prefix(0, 1).unwrap(), vec![0]);
        assert_eq!(
            s.fixed_point_prefix(0, 8).unwrap(),
            vec![0, 1, 2, 0, 1, 3, 0, 1]
        );
        assert_eq!(
            s.fixed_point_prefix(0, 16).unwrap(),
            // S(01201301) = 01 20 13 01 20 32 01 20
            vec![0, 1, 2, 0, 1, 3, 0, 1, 2, 0, 3, 2, 0, 1, 2, 0]
        );
        // Letter 1 is not self-starting (1 → 20).
        assert!(s.fixed_point_prefix(1, 4).is_err());
    }

    #[test]
    fn prefix_agrees_with_power_instructions() {
        let s = rsl_substitution();
        for p in 1..=6 {
            let maps = s.power_instruction_images(p).unwrap();
            let spelled: Vec<usize> = maps.iter().map(|m| m[0]).collect();
            assert_eq!(spelled, s.fixed_point_prefix(0, maps.len()).unwrap());
        }
    }

    #[test]
    fn empirical_frequencies_close_to_exact() {
        let s = rsl_substitution();
        let u = s.letter_frequencies().unwrap();
        let emp = s.empirical_frequencies(0, 1 << 20).unwrap();
        for (e, x) in emp.iter().zip(u.iter()) {
            assert!((e - rat_to_f64(x)).abs() < 1e-3);
        }
    }
}
