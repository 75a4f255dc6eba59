//! Floating-point cross-validation layer: exponential sums, grid
//! periodograms, sup-norm growth traces, empirical autocorrelations and
//! Wiener averages.
//!
//! Grid suprema are lower bounds on the true supremum; the growth test
//! reads a monotone trend, not an exact bound.

use num_complex::Complex64;
use rustfft::FftPlanner;

pub const DEFAULT_GRID_FACTOR: usize = 8;
pub const DEFAULT_GRID_CAP: usize = 1 << 26;

#[derive(Debug, thiserror::Error)]
pub enum NumericsError {
    #[error("grid size {m} exceeds the memory cap {cap}")]
    MemoryBudget { m: usize, cap: usize },
}

/// Σ_{n<N} a_n e^{2πinθ} with compensated (Kahan) summation.
pub fn exponential_sum(values: &[i8], theta: f64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for (n, &a) in values.iter().enumerate() {
        let phase = 2.0 * std::f64::consts::PI * n as f64 * theta;
        let term = Complex64::new(phase.cos(), phase.sin()) * a as f64;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

#[derive(Debug, Clone)]
pub struct Periodogram {
    pub n: usize,
    pub grid: usize,
    /// R_N(θ_j) = |Σ_{n<N} a_n e^{2πin j/M}|² / N at θ_j = j/M.
    pub values: Vec<f64>,
}

impl Periodogram {
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Grid periodogram via a zero-padded FFT; magnitudes agree with direct
/// summation (the FFT conjugates the phase, which |·|² erases).
pub fn periodogram(values: &[i8], grid: usize, cap: usize) -> Result<Periodogram, NumericsError> {
    assert!(grid >= 1);
    if grid > cap {
        return Err(NumericsError::MemoryBudget { m: grid, cap });
    }
    let spectrum = grid_spectrum(values, grid);
    let n = values.len();
    Ok(Periodogram {
        n,
        grid,
        values: spectrum.iter().map(|x| x.norm_sqr() / n as f64).collect(),
    })
}

fn grid_spectrum(values: &[i8], grid: usize) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values
        .iter()
        .map(|&a| Complex64::new(a as f64, 0.0))
        .collect();
    buf.resize(grid, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(grid).process(&mut buf);
    buf
}

#[derive(Debug, Clone)]
pub struct GrowthPoint {
    pub n: u64,
    /// max over the grid of |S_N(θ)|; a lower bound on the true sup.
    pub sup: f64,
    pub ratio: f64,
}

/// Grid-sup growth trace of |Σ_{n<N} a_n e^{2πinθ}| / √N across the
/// given N values, with grid M = grid_factor · N.
pub fn growth_test(values: &[i8], n_list: &[u64], grid_factor: usize) -> Vec<GrowthPoint> {
    n_list
        .iter()
        .map(|&n| {
            let m = n as usize * grid_factor;
            let spectrum = grid_spectrum(&values[..n as usize], m);
            let sup = spectrum
                .iter()
                .map(|x| x.norm())
                .fold(f64::NEG_INFINITY, f64::max);
            GrowthPoint {
                n,
                sup,
                ratio: sup / (n as f64).sqrt(),
            }
        })
        .collect()
}

/// c_N(k) = (1/N) Σ_{n<N} a_n a_{n+k}; `values` must hold N + k_max terms.
pub fn empirical_autocorrelation(values: &[i8], n: usize, k_max: usize) -> Vec<f64> {
    assert!(values.len() >= n + k_max);
    (0..=k_max)
        .map(|k| {
            let mut acc: i64 = 0;
            for i in 0..n {
                acc += (values[i] * values[i + k]) as i64;
            }
            acc as f64 / n as f64
        })
        .collect()
}

/// W(K) = (1/K) Σ_{k<K} |c(k)|² for each requested K.
pub fn wiener_average(coefficients: &[f64], k_list: &[usize]) -> Vec<f64> {
    k_list
        .iter()
        .map(|&big_k| {
            assert!(big_k >= 1 && big_k <= coefficients.len());
            coefficients[..big_k].iter().map(|c| c * c).sum::<f64>() / big_k as f64
        })
        .collect()
}
