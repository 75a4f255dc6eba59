//! Exact Fourier coefficients Σ̂(k) of the correlation measures.
//!
//! Orientation: entry `pair(α, β)` of Σ̂(k) is the asymptotic density of
//! positions n in the fixed point with u_n = α and u_{n+k} = β (confirmed
//! against empirical pair counting in the test suite). Entries are
//! nonnegative rationals summing to 1.

use std::collections::HashMap;

use num_traits::Zero;

use crate::bisubstitution::pair_index;
use crate::matrix::RatMat;
use crate::rational::{rat, Rat};
use crate::substitution::{Substitution, SubstitutionError};

#[derive(Debug, thiserror::Error)]
pub enum CorrelationError {
    #[error("carry-set shift {k} out of range for q^p = {qp}")]
    ShiftOutOfRange { k: u64, qp: u64 },
    #[error("correlation system is singular; the invertibility hypothesis fails")]
    SingularSystem,
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
}

/// The p-th carry set Δ_p(k): positions j ∈ [0, q^p) where j + k
/// overflows the block, i.e. j + k ∉ [0, q^p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarrySet {
    pub p: u32,
    pub k: u64,
    pub members: Vec<u64>,
}

pub fn carry_set(q: u64, p: u32, k: u64) -> Result<CarrySet, CorrelationError> {
    assert!(p >= 1);
    let qp = q.pow(p);
    if k > qp {
        return Err(CorrelationError::ShiftOutOfRange { k, qp });
    }
    Ok(CarrySet {
        p,
        k,
        members: (qp - k..qp).collect(),
    })
}

/// Memoizing computer for Σ̂(k). All arithmetic is exact.
pub struct SigmaComputer<'a> {
    sub: &'a Substitution,
    images: Vec<Vec<usize>>,
    memo: HashMap<u64, Vec<Rat>>,
}

impl<'a> SigmaComputer<'a> {
    pub fn new(sub: &'a Substitution) -> Result<Self, CorrelationError> {
        let mut c = SigmaComputer {
            sub,
            images: sub.instruction_images(),
            memo: HashMap::new(),
        };
        let s0 = c.compute_sigma0()?;
        let s1 = c.compute_sigma1(&s0)?;
        c.memo.insert(0, s0);
        c.memo.insert(1, s1);
        Ok(c)
    }

    pub fn substitution(&self) -> &Substitution {
        self.sub
    }

    /// Σ̂(0): the letter frequencies placed on the diagonal pairs.
    fn compute_sigma0(&self) -> Result<Vec<Rat>, CorrelationError> {
        let a = self.sub.alphabet_size();
        let u = self.sub.letter_frequencies()?;
        let mut v = vec![Rat::zero(); a * a];
        for (g, ug) in u.into_iter().enumerate() {
            v[pair_index(g, g, a)] = ug;
        }
        Ok(v)
    }

    /// Σ̂(1) by the exact linear solve
    /// (qI − Σ_{j∈Δ₁(1)} R_j ⊗ R_{j+1−q}) Σ̂(1) = Σ_{j∉Δ₁(1)} R_j ⊗ R_{j+1} Σ̂(0).
    fn compute_sigma1(&self, sigma0: &[Rat]) -> Result<Vec<Rat>, CorrelationError> {
        let q = self.sub.length();
        let n = self.sub.alphabet_size().pow(2);
        // Δ₁(1) = {q − 1}; the wrapped second factor is R_0.
        let carry = self
            .sub
            .instruction_matrix(q - 1)
            .kron(&self.sub.instruction_matrix(0));
        let mut lhs = RatMat::identity(n).scale(&rat(q as i64));
        lhs = lhs.sub(&carry);
        let mut rhs = vec![Rat::zero(); n];
        for j in 0..q - 1 {
            apply_pair_map(
                &self.images[j],
                &self.images[j + 1],
                sigma0,
                &mut rhs,
                self.sub.alphabet_size(),
            );
        }
        lhs.solve(&rhs).ok_or(CorrelationError::SingularSystem)
    }

    /// Σ̂(k) by the base-q digit recursion with memoization: writing
    /// k = q·m + r,
    /// Σ̂(k) = (1/q)[ Σ_{j<q−r} (R_j ⊗ R_{j+r}) Σ̂(m)
    ///              + Σ_{j≥q−r} (R_j ⊗ R_{j+r−q}) Σ̂(m+1) ].
    pub fn sigma(&mut self, k: u64) -> Result<Vec<Rat>, CorrelationError> {
        if let Some(v) = self.memo.get(&k) {
            return Ok(v.clone());
        }
        let q = self.sub.length() as u64;
        let a = self.sub.alphabet_size();
        let m = k / q;
        let r = (k % q) as usize;
        let s_m = self.sigma(m)?;
        let mut acc = vec![Rat::zero(); a * a];
        for j in 0..(q as usize - r) {
            apply_pair_map(&self.images[j], &self.images[j + r], &s_m, &mut acc, a);
        }
        if r > 0 {
            let s_m1 = self.sigma(m + 1)?;
            for j in (q as usize - r)..q as usize {
                apply_pair_map(
                    &self.images[j],
                    &self.images[j + r - q as usize],
                    &s_m1,
                    &mut acc,
                    a,
                );
            }
        }
        let inv_q = rat(1) / rat(q as i64);
        let out: Vec<Rat> = acc.into_iter().map(|x| x * &inv_q).collect();
        self.memo.insert(k, out.clone());
        Ok(out)
    }

    /// Evaluate the level-p expression
    /// Σ̂(k) = (1/q^p) Σ_{j∈[0,q^p)} R_j^p ⊗ R_{j+k}^p Σ̂(⌊j+k⌋_p)
    /// directly and check exact equality with the recursion.
    pub fn verify_theorem_consistency(
        &mut self,
        k: u64,
        p: usize,
    ) -> Result<bool, CorrelationError> {
        let q = self.sub.length() as u64;
        let qp = q.pow(p as u32);
        let a = self.sub.alphabet_size();
        let maps = self.sub.power_instruction_images(p)?;
        // ⌊(j + k)/q^p⌋ takes only the two values ⌊k/q^p⌋ and ⌊k/q^p⌋ + 1.
        let base = k / qp;
        let s_lo = self.sigma(base)?;
        let s_hi = self.sigma(base + 1)?;
        let mut acc = vec![Rat::zero(); a * a];
        for j in 0..qp {
            let quotient = (j + k) / qp;
            let wrapped = ((j + k) % qp) as usize;
            let src = if quotient == base { &s_lo } else { &s_hi };
            apply_pair_map(&maps[j as usize], &maps[wrapped], src, &mut acc, a);
        }
        let inv = rat(1) / rat(qp as i64);
        let direct: Vec<Rat> = acc.into_iter().map(|x| x * &inv).collect();
        Ok(direct == self.sigma(k)?)
    }
}

/// Accumulate (R ⊗ R') v into `out`:
/// out[pair(R(α), R'(β))] += v[pair(α, β)].
fn apply_pair_map(
    img_left: &[usize],
    img_right: &[usize],
    v: &[Rat],
    out: &mut [Rat],
    a: usize,
) {
    for al in 0..a {
        for be in 0..a {
            let src = pair_index(al, be, a);
            if v[src].is_zero() {
                continue;
            }
            let dst = pair_index(img_left[al], img_right[be], a);
            out[dst] = &out[dst] + &v[src];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{rs_substitution, rsl_substitution};
    use crate::rational::frac;
    use num_traits::{One, Signed};

    /// The known Σ̂(1) vector for RSL from the literature.
    pub fn rsl_sigma1_published() -> Vec<Rat> {
        [
            (0, 1),
            (1, 6),
            (0, 1),
            (1, 12),
            (0, 1),
            (0, 1),
            (1, 12),
            (1, 6),
            (1, 6),
            (1, 12),
            (0, 1),
            (0, 1),
            (1, 12),
            (0, 1),
            (1, 6),
            (0, 1),
        ]
        .iter()
        .map(|&(n, d)| frac(n, d))
        .collect()
    }

    #[test]
    fn carry_sets() {
        assert_eq!(carry_set(2, 1, 1).unwrap().members, vec![1]);
        assert_eq!(carry_set(2, 1, 0).unwrap().members, Vec::<u64>::new());
        assert_eq!(carry_set(3, 2, 0).unwrap().members, Vec::<u64>::new());
        assert_eq!(carry_set(2, 2, 3).unwrap().members, vec![1, 2, 3]);
        assert!(carry_set(2, 1, 3).is_err());
    }

    #[test]
    fn sigma0_is_diagonal_frequencies() {
        let s = rsl_substitution();
        let mut c = SigmaComputer::new(&s).unwrap();
        let s0 = c.sigma(0).unwrap();
        for (i, x) in s0.iter().enumerate() {
            let expected = if i % 5 == 0 { frac(1, 4) } else { Rat::zero() };
            assert_eq!(*x, expected, "entry {i}");
        }
    }

    #[test]
    fn rsl_sigma1_matches_published_vector() {
        let s = rsl_substitution();
        let mut c = SigmaComputer::new(&s).unwrap();
        assert_eq!(c.sigma(1).unwrap(), rsl_sigma1_published());
    }

    #[test]
    fn sigma_entries_nonnegative_and_sum_to_one() {
        for s in [rsl_substitution(), rs_substitution()] {
            let mut c = SigmaComputer::new(&s).unwrap();
            for k in 0..=64u64 {
                let v = c.sigma(k).unwrap();
                assert!(v.iter().all(|x| !x.is_negative()), "k={k}");
                let total = v.iter().fold(Rat::zero(), |acc, x| acc + x.clone());
                assert!(total.is_one(), "k={k}: sum {total}");
            }
        }
    }

    #[test]
    fn sigma2_equals_one_unrolled_step() {
        // RSL, k=2: Σ̂(2) = ½ (R₀⊗R₀ + R₁⊗R₁) Σ̂(1), by hand.
        let s = rsl_substitution();
        let mut c = SigmaComputer::new(&s).unwrap();
        let s1 = c.sigma(1).unwrap();
        let r0 = s.instruction_matrix(0);
        let r1 = s.instruction_matrix(1);
        let op = r0.kron(&r0).add(&r1.kron(&r1));
        let expected: Vec<Rat> = op
            .mul_vec(&s1)
            .into_iter()
            .map(|x| x / rat(2))
            .collect();
        assert_eq!(c.sigma(2).unwrap(), expected);
    }

    #[test]
    fn theorem_consistency_small_k() {
        for s in [rsl_substitution(), rs_substitution()] {
            let mut c = SigmaComputer::new(&s).unwrap();
            for p in [2usize, 3] {
                for k in 0..8u64 {
                    assert!(
                        c.verify_theorem_consistency(k, p).unwrap(),
                        "k={k} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn rs_sigma1_zeros_match_legal_pairs() {
        let s = rs_substitution();
        let mut c = SigmaComputer::new(&s).unwrap();
        let v = c.sigma(1).unwrap();
        let legal = s.legal_words(2);
        let a = s.alphabet_size();
        for al in 0..a {
            for be in 0..a {
                let zero = v[pair_index(al, be, a)].is_zero();
                let present = legal.contains(&vec![al, be]);
                assert_eq!(!zero, present, "pair {al}{be}");
            }
        }
    }

    #[test]
    fn diagonal_sum_matches_same_letter_density() {
        // Σ_γ Σ̂(k)[γγ] vs the empirical density of u_n = u_{n+k}.
        let s = rsl_substitution();
        let mut c = SigmaComputer::new(&s).unwrap();
        let n = 1usize << 20;
        let prefix = s.fixed_point_prefix(0, n + 8).unwrap();
        let a = s.alphabet_size();
        for k in [1usize, 2, 5, 8] {
            let v = c.sigma(k as u64).unwrap();
            let diag_sum: Rat = (0..a)
                .map(|g| v[pair_index(g, g, a)].clone())
                .fold(Rat::zero(), |acc, x| acc + x);
            let count = (0..n).filter(|&i| prefix[i] == prefix[i + k]).count();
            let emp = count as f64 / n as f64;
            assert!(
                (emp - crate::rational::rat_to_f64(&diag_sum)).abs() < 1e-3,
                "k={k}"
            );
        }
    }
}
