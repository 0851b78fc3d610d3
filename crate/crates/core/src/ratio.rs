//! Exact and floating ratio reports.
//!
//! Inequality ratios with large exponents (up to 55) overflow every fixed
//! width, so they are kept as exact big rationals and summarised by their
//! base-2 logarithm.

use alloc::string::String;
use core::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact nonnegative rational.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactRatio(BigRational);

impl ExactRatio {
    /// `num / den`; `den` must be nonzero.
    pub fn new(num: BigUint, den: BigUint) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        ExactRatio(BigRational::new(num.into(), den.into()))
    }

    pub fn from_u64(num: u64, den: u64) -> Self {
        Self::new(BigUint::from(num), BigUint::from(den))
    }

    pub fn one() -> Self {
        ExactRatio(BigRational::one())
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> BigUint {
        self.0.numer().magnitude().clone()
    }

    pub fn denom(&self) -> BigUint {
        self.0.denom().magnitude().clone()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// `log2` of the ratio, finite for every positive value.
    pub fn log2(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        log2_big(&self.numer()) - log2_big(&self.denom())
    }

    /// Floating approximation; may underflow to 0 or overflow to infinity
    /// for extreme values, in which case [`ExactRatio::log2`] is the usable
    /// summary.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| libm::exp2(self.log2()))
    }

    /// `num/den` in lowest terms.
    pub fn to_fraction_string(&self) -> String {
        alloc::format!("{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

/// `base^exp` as a big integer.
pub fn big_pow(base: u64, exp: u32) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

/// Base-2 logarithm of a positive big integer.
pub fn log2_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return libm::log2(n.to_u64().expect("fits") as f64);
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().expect("fits");
    libm::log2(top as f64) + shift as f64
}

/// `x^n` for small nonnegative integer `n`.
pub fn powi(x: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, _| acc * x)
}
