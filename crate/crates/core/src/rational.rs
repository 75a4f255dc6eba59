//! Exact rational scalars used throughout the analysis.
//!
//! All spectral quantities (frequencies, correlation coefficients, hull
//! rays) are computed over `BigRational`; floats appear only in the
//! numerics layer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Render as "p/q" (or "p" when the denominator is 1), the form used in
/// reports and CSV exports.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    // Good enough for display/cross-checks; exact values never round-trip
    // through this.
    let num = r.numer();
    let den = r.denom();
    let scale = |x: &BigInt| -> f64 {
        let (sign, digits) = x.to_u64_digits();
        let mut v = 0.0f64;
        for d in digits.iter().rev() {
            v = v * 1.8446744073709552e19 + *d as f64;
        }
        match sign {
            num_bigint::Sign::Minus => -v,
            _ => v,
        }
    };
    scale(num) / scale(den)
}

/// Gaussian rational: complex number with exact rational parts.
/// Used for letter weights and weighted autocorrelations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CRat {
    pub re: Rat,
    pub im: Rat,
}

impl CRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        CRat { re, im }
    }

    pub fn real(re: Rat) -> Self {
        CRat {
            re,
            im: Rat::zero(),
        }
    }

    pub fn zero() -> Self {
        CRat {
            re: Rat::zero(),
            im: Rat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        CRat {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        CRat {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn scale(&self, s: &Rat) -> Self {
        CRat {
            re: &self.re * s,
            im: &self.im * s,
        }
    }

    /// Squared modulus, exact.
    pub fn norm_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

/// Absolute value helper for rationals.
pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_form() {
        assert_eq!(rat_to_string(&frac(1, 6)), "1/6");
        assert_eq!(rat_to_string(&rat(-3)), "-3");
        assert_eq!(rat_to_string(&frac(-1, 12)), "-1/12");
    }

    #[test]
    fn f64_conversion() {
        assert!((rat_to_f64(&frac(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
        assert!((rat_to_f64(&rat(-7)) + 7.0).abs() < 1e-15);
    }

    #[test]
    fn complex_arithmetic() {
        let i = CRat::new(rat(0), rat(1));
        let m = i.mul(&i);
        assert_eq!(m, CRat::real(rat(-1)));
        assert_eq!(i.mul(&i.conj()), CRat::real(rat(1)));
        assert_eq!(i.norm_sq(), rat(1));
    }
}
