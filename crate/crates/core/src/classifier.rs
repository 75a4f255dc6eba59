//! Classification of each extreme ray's measure and assembly of the
//! maximal spectral type and the weighted diffraction verdict.

use num_traits::Zero;

use crate::bisubstitution::pair_index;
use crate::correlation::{CorrelationError, SigmaComputer};
use crate::rational::{rat_to_f64, CRat, Rat};
use crate::substitution::{Substitution, SubstitutionError};

pub const DEFAULT_KMAX: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    PurePoint,
    Lebesgue,
    SingularContinuous,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::PurePoint => "pure point",
            Verdict::Lebesgue => "Lebesgue",
            Verdict::SingularContinuous => "singular continuous",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// An exact witness backs the verdict (a nonvanishing coefficient).
    ExactWitness,
    /// Checked on [0, k_max] only; the printed rule admits no finite
    /// certificate for these verdicts.
    HorizonChecked,
}

impl Certificate {
    pub fn label(&self) -> &'static str {
        match self {
            Certificate::ExactWitness => "exact-witness",
            Certificate::HorizonChecked => "horizon-checked",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RayMeasureProfile {
    pub ray: Vec<Rat>,
    /// λ̂_w(k) = w · Σ̂(k) for k in [0, k_max], exact.
    pub coefficients: Vec<Rat>,
    pub verdict: Verdict,
    pub certificate: Certificate,
    /// Detected period for pure point verdicts.
    pub period: Option<u64>,
    /// Smallest k ≥ 1 with λ̂(k) ≠ 0, when one exists.
    pub nonvanishing_witness: Option<u64>,
    pub horizon: u64,
}

/// λ̂_w(k) = w · Σ̂(k) for k = 0..=k_max.
pub fn ray_coefficients(
    sigma: &mut SigmaComputer,
    ray: &[Rat],
    k_max: u64,
) -> Result<Vec<Rat>, CorrelationError> {
    (0..=k_max)
        .map(|k| {
            let v = sigma.sigma(k)?;
            Ok(ray
                .iter()
                .zip(v.iter())
                .map(|(a, b)| a * b)
                .fold(Rat::zero(), |acc, x| acc + x))
        })
        .collect()
}

/// Classification rule, applied in order:
/// Lebesgue if λ̂(k) = 0 for all 1 ≤ k ≤ k_max; pure point if λ̂ is exactly
/// periodic with some period P ≤ k_max/4 verified on [0, k_max]; otherwise
/// singular continuous.
pub fn classify_ray(ray: &[Rat], coefficients: Vec<Rat>, k_max: u64) -> RayMeasureProfile {
    assert!(coefficients.len() as u64 == k_max + 1 && k_max >= 64);
    let witness = (1..=k_max).find(|&k| !coefficients[k as usize].is_zero());
    if witness.is_none() {
        return RayMeasureProfile {
            ray: ray.to_vec(),
            coefficients,
            verdict: Verdict::Lebesgue,
            certificate: Certificate::HorizonChecked,
            period: None,
            nonvanishing_witness: None,
            horizon: k_max,
        };
    }
    let period = (1..=k_max / 4).find(|&p| {
        (0..=k_max - p).all(|k| coefficients[k as usize] == coefficients[(k + p) as usize])
    });
    if let Some(p) = period {
        return RayMeasureProfile {
            ray: ray.to_vec(),
            coefficients,
            verdict: Verdict::PurePoint,
            certificate: Certificate::HorizonChecked,
            period: Some(p),
            nonvanishing_witness: witness,
            horizon: k_max,
        };
    }
    RayMeasureProfile {
        ray: ray.to_vec(),
        coefficients,
        verdict: Verdict::SingularContinuous,
        certificate: Certificate::ExactWitness,
        period: None,
        nonvanishing_witness: witness,
        horizon: k_max,
    }
}

/// The maximal spectral type: a q-adic point factor convolved with the
/// classified ray measures.
#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub q: usize,
    pub height: u64,
    pub profiles: Vec<RayMeasureProfile>,
    /// With trivial height the pure point part reduces to the δ₀-type
    /// component.
    pub pure_point_is_delta_zero: bool,
    pub weighted: Option<WeightedVerdict>,
}

pub fn assemble_maximal_type(
    s: &Substitution,
    profiles: Vec<RayMeasureProfile>,
    height: u64,
    weighted: Option<WeightedVerdict>,
) -> SpectralReport {
    SpectralReport {
        q: s.length(),
        height,
        profiles,
        pure_point_is_delta_zero: height == 1,
        weighted,
    }
}

#[derive(Debug, Clone)]
pub struct WeightedVerdict {
    /// Frequency-weighted mean m = Σ_α weights(α) u_α.
    pub mean: CRat,
    /// Bragg intensity at 0, |m|², exact.
    pub bragg_at_zero: Rat,
    pub bragg_extinguished: bool,
    /// Weighted autocorrelation ĉ(k) for k ≤ k_max, exact.
    pub autocorrelation: Vec<CRat>,
    /// Distinct verdicts of the non-pure-point rays.
    pub continuous_part: Vec<Verdict>,
    /// (K, (1/K) Σ_{k<K} |ĉ(k) − |m|²|²): trends to the pure-point mass
    /// minus the Bragg term; nonzero limit signals singular continuous
    /// content beyond the extinguished peak is absent only when zero.
    pub wiener: Vec<(u64, f64)>,
    pub label: String,
}

#[derive(Debug, thiserror::Error)]
pub enum ClassifierError {
    #[error("substitution carries no letter weights")]
    MissingWeights,
    #[error(transparent)]
    Correlation(#[from] CorrelationError),
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
}

/// Weighted (e.g. balanced ±1) diffraction verdict from the classified
/// rays and the exact weighted autocorrelation.
pub fn weighted_diffraction_verdict(
    sigma: &mut SigmaComputer,
    profiles: &[RayMeasureProfile],
    k_max: u64,
) -> Result<WeightedVerdict, ClassifierError> {
    let s = sigma.substitution();
    let weights = s.weights().ok_or(ClassifierError::MissingWeights)?.to_vec();
    let u = s.letter_frequencies()?;
    let a = s.alphabet_size();
    let mean = weights
        .iter()
        .zip(u.iter())
        .fold(CRat::zero(), |acc, (w, ug)| acc.add(&w.scale(ug)));
    let bragg = mean.norm_sq();
    let extinguished = bragg.is_zero();

    let mut autocorrelation = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        let v = sigma.sigma(k)?;
        let mut c = CRat::zero();
        for al in 0..a {
            for be in 0..a {
                let entry = &v[pair_index(al, be, a)];
                if entry.is_zero() {
                    continue;
                }
                c = c.add(&weights[al].mul(&weights[be].conj()).scale(entry));
            }
        }
        autocorrelation.push(c);
    }

    let mut continuous = Vec::new();
    for p in profiles {
        if p.verdict != Verdict::PurePoint && !continuous.contains(&p.verdict) {
            continuous.push(p.verdict);
        }
    }

    let wiener: Vec<(u64, f64)> = (6..=12)
        .map(|e| 1u64 << e)
        .filter(|&big_k| big_k <= autocorrelation.len() as u64)
        .map(|big_k| {
            let avg = (0..big_k)
                .map(|k| {
                    let diff = autocorrelation[k as usize]
                        .add(&CRat::real(-bragg.clone()).conj());
                    rat_to_f64(&diff.norm_sq())
                })
                .sum::<f64>()
                / big_k as f64;
            (big_k, avg)
        })
        .collect();

    let label = if !extinguished {
        format!(
            "pure point at zero (Bragg intensity {}) plus {}",
            crate::rational::rat_to_string(&bragg),
            render_set(&continuous)
        )
    } else {
        match continuous.as_slice() {
            [Verdict::SingularContinuous] => "purely singular continuous".to_string(),
            [Verdict::Lebesgue] => "purely absolutely continuous".to_string(),
            [] => "pure point (degenerate: no continuous component)".to_string(),
            _ => format!("continuous: {}", render_set(&continuous)),
        }
    };

    Ok(WeightedVerdict {
        mean,
        bragg_at_zero: bragg,
        bragg_extinguished: extinguished,
        autocorrelation,
        continuous_part: continuous,
        wiener,
        label,
    })
}

fn render_set(vs: &[Verdict]) -> String {
    if vs.is_empty() {
        return "none".to_string();
    }
    vs.iter()
        .map(|v| v.label())
        .collect::<Vec<_>>()
        .join(" + ")
}
