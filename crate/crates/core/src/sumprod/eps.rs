use core::fmt;
use core::str::FromStr;

use alloc::string::ToString;

use crate::error::{Error, Result};

/// A small positive rational parameter `eps = num / den` with `0 < eps < 1`.
///
/// Kept exact so the `(1 - eps)` density tests and the `(1 - sqrt(eps))`
/// size floors are decided in integer arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Eps {
    num: u64,
    den: u64,
}

impl Default for Eps {
    fn default() -> Self {
        Eps { num: 1, den: 100 }
    }
}

impl Eps {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 || num >= den || den > u32::MAX as u64 {
            return Err(Error::EpsOutOfRange(alloc::format!("{num}/{den}")));
        }
        let g = gcd(num, den);
        Ok(Eps { num: num / g, den: den / g })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `eps < n / d`.
    pub fn less_than(&self, n: u64, d: u64) -> bool {
        (self.num as u128) * (d as u128) < (n as u128) * (self.den as u128)
    }

    /// `count >= (1 - eps) * total`.
    pub fn at_least_one_minus(&self, count: u64, total: u64) -> bool {
        count as u128 * self.den as u128 >= (self.den - self.num) as u128 * total as u128
    }

    /// Smallest integer `m` with `m >= (1 - eps) * total`.
    pub fn ceil_one_minus(&self, total: u64) -> u64 {
        let need = (self.den - self.num) as u128 * total as u128;
        need.div_ceil(self.den as u128) as u64
    }

    /// `deficit <= c * sqrt(eps) * total`, i.e. `deficit^2 <= c^2 eps total^2`.
    pub fn within_sqrt(&self, deficit: u64, c: u64, total: u64) -> bool {
        let lhs = deficit as u128 * deficit as u128 * self.den as u128;
        let rhs = (c * c) as u128 * self.num as u128 * total as u128 * total as u128;
        lhs <= rhs
    }

    /// `count >= (1 - c * sqrt(eps)) * total` for `count <= total`.
    pub fn above_sqrt_floor(&self, count: u64, c: u64, total: u64) -> bool {
        count >= total || self.within_sqrt(total - count, c, total)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Eps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Eps {
    type Err = Error;

    /// Accepts `num/den` or a plain decimal such as `0.01`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::EpsOutOfRange(s.to_string());
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = n.trim().parse().map_err(|_| bad())?;
            let d = d.trim().parse().map_err(|_| bad())?;
            return Eps::new(n, d);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 9 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10u64.pow(frac.len() as u32);
        let frac_v: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        Eps::new(int * den + frac_v, den).map_err(|_| bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!("0.01".parse::<Eps>().unwrap(), Eps::new(1, 100).unwrap());
        assert_eq!("1/16".parse::<Eps>().unwrap(), Eps::new(1, 16).unwrap());
        assert_eq!(".25".parse::<Eps>().unwrap(), Eps::new(1, 4).unwrap());
        for bad in ["0", "1", "1.5", "abc", "-0.1", "0/3"] {
            assert!(bad.parse::<Eps>().is_err(), "{bad}");
        }
    }

    #[test]
    fn exact_comparisons() {
        let e = Eps::new(1, 4).unwrap();
        // (1 - 1/4) * 8 = 6
        assert!(e.at_least_one_minus(6, 8));
        assert!(!e.at_least_one_minus(5, 8));
        assert_eq!(e.ceil_one_minus(8), 6);
        assert_eq!(e.ceil_one_minus(7), 6);
        // sqrt(1/4) = 1/2: floor (1 - 1/2) * 10 = 5
        assert!(e.above_sqrt_floor(5, 1, 10));
        assert!(!e.above_sqrt_floor(4, 1, 10));
        assert!(e.less_than(1, 2) && !e.less_than(1, 4));
    }
}
