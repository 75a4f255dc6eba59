//! Direct ±1 generators for the Rudin–Shapiro-like and Rudin–Shapiro
//! sequences, the four-letter recoding, definition-equivalence checks,
//! and partial-sum renormalization.
//!
//! The RS digit definition (count of adjacent 11 blocks in binary) is the
//! standard one from the literature; it is not restated in the source the
//! RSL definition comes from.

use crate::fixtures::{rs_substitution, rsl_substitution};

/// Number of occurrences of the scattered subsequence 10 in the binary
/// representation of n: one scan, accumulating ones-seen at each zero bit.
pub fn inv2(n: u64) -> u32 {
    let mut ones = 0u32;
    let mut count = 0u32;
    for i in (0..64 - n.leading_zeros()).rev() {
        if (n >> i) & 1 == 1 {
            ones += 1;
        } else {
            count += ones;
        }
    }
    count
}

/// RSL(n) = (−1)^{inv2(n)}.
pub fn rsl_direct(n: u64) -> i8 {
    if inv2(n) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of (possibly overlapping) adjacent 11 occurrences in binary n.
pub fn adjacent_ones(n: u64) -> u32 {
    (n & (n >> 1)).count_ones()
}

/// The balanced Rudin–Shapiro sequence: (−1)^{adjacent 11 count}.
pub fn rs_direct(n: u64) -> i8 {
    if adjacent_ones(n) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Letterwise recoding of a four-letter word: letters 0, 1 → +1 and
/// letters 2, 3 → −1 (by alphabet index).
pub fn recode(word: &[usize]) -> Vec<i8> {
    word.iter()
        .map(|&l| match l {
            0 | 1 => 1,
            2 | 3 => -1,
            other => panic!("recode: letter index {other} out of range"),
        })
        .collect()
}

/// Sequence generators exposed to the CLI and the numerics layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    RslDirect,
    RsDirect,
    /// Recoded fixed point of the bundled RSL substitution.
    RslRecoded,
    /// Recoded fixed point of the bundled RS substitution.
    RsRecoded,
}

impl Generator {
    pub fn parse(name: &str) -> Option<Generator> {
        match name {
            "rsl" | "rsl-direct" => Some(Generator::RslDirect),
            "rs" | "rs-direct" => Some(Generator::RsDirect),
            "rsl-recoded" => Some(Generator::RslRecoded),
            "rs-recoded" => Some(Generator::RsRecoded),
            _ => None,
        }
    }

    /// Materialize the first n values.
    pub fn values(&self, n: usize) -> Vec<i8> {
        match self {
            Generator::RslDirect => (0..n as u64).map(rsl_direct).collect(),
            Generator::RsDirect => (0..n as u64).map(rs_direct).collect(),
            Generator::RslRecoded => {
                let s = rsl_substitution();
                recode(&s.fixed_point_prefix(0, n).expect("RSL seed 0 self-starts"))
            }
            Generator::RsRecoded => {
                let s = rs_substitution();
                recode(&s.fixed_point_prefix(0, n).expect("RS seed a self-starts"))
            }
        }
    }
}

/// First index where the direct RSL definition and the recoded fixed
/// point disagree below n_max, or `None` if they agree throughout.
pub fn first_rsl_mismatch(n_max: usize) -> Option<usize> {
    let direct = Generator::RslDirect.values(n_max);
    let recoded = Generator::RslRecoded.values(n_max);
    (0..n_max).find(|&i| direct[i] != recoded[i])
}

/// Same check for RS against the standard RS substitution.
pub fn first_rs_mismatch(n_max: usize) -> Option<usize> {
    let direct = Generator::RsDirect.values(n_max);
    let recoded = Generator::RsRecoded.values(n_max);
    (0..n_max).find(|&i| direct[i] != recoded[i])
}

#[derive(Debug, Clone)]
pub struct PartialSumPoint {
    pub n: u64,
    /// Σ(N) = Σ_{0 ≤ n ≤ N} a_n, exact.
    pub sum: i64,
    pub ratio: f64,
    pub log4_n: f64,
}

/// Exact inclusive partial sums Σ(N) at the requested N values
/// (ascending), with the √N-renormalized ratio.
pub fn partial_sums(generator: Generator, n_list: &[u64]) -> Vec<PartialSumPoint> {
    assert!(n_list.windows(2).all(|w| w[0] < w[1]));
    let max_n = *n_list.last().expect("n_list nonempty") as usize;
    let values = generator.values(max_n + 1);
    let mut out = Vec::with_capacity(n_list.len());
    let mut sum = 0i64;
    let mut next = 0usize;
    for (i, &v) in values.iter().enumerate() {
        sum += v as i64;
        while next < n_list.len() && n_list[next] as usize == i {
            out.push(PartialSumPoint {
                n: i as u64,
                sum,
                ratio: sum as f64 / (i.max(1) as f64).sqrt(),
                log4_n: (i.max(1) as f64).ln() / 4f64.ln(),
            });
            next += 1;
        }
    }
    out
}

/// Min and max of Σ(N)/√N over all N in [lo, hi] (inclusive), scanning
/// every integer N.
pub fn partial_sum_envelope(generator: Generator, lo: u64, hi: u64) -> (f64, f64) {
    let values = generator.values(hi as usize + 1);
    let mut sum = 0i64;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate() {
        sum += v as i64;
        let n = i as u64;
        if n >= lo {
            let ratio = sum as f64 / (n as f64).sqrt();
            min = min.min(ratio);
            max = max.max(ratio);
        }
    }
    (min, max)
}
