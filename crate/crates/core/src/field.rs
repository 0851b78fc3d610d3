//! Arithmetic in the prime field `F_p`.

use core::fmt;

use crate::error::{Error, Result};

/// Largest modulus accepted by [`PlaneContext::new`].
pub const MAX_MODULUS: u64 = 1 << 61;

/// An element of `F_p`, always reduced into `[0, p)`.
///
/// The modulus is not carried by the element; every operation goes through a
/// [`PlaneContext`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The prime modulus shared by every point, line and set in one computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PlaneContext {
    p: u64,
}

impl PlaneContext {
    /// Builds a context for `F_p`. `p` must be an odd prime below
    /// [`MAX_MODULUS`].
    pub fn new(p: u64) -> Result<Self> {
        if p <= 2 || p > MAX_MODULUS || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PlaneContext { p })
    }

    /// Like [`PlaneContext::new`] but also accepts `p = 2`.
    ///
    /// The characteristic-2 plane is only used for the small closed-form
    /// identities (`F_2^2` has 4 points and 6 lines).
    pub fn new_allow_two(p: u64) -> Result<Self> {
        if p == 2 {
            return Ok(PlaneContext { p });
        }
        Self::new(p)
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary unsigned integer.
    #[inline]
    pub fn elem(&self, v: u64) -> Fe {
        Fe(v % self.p)
    }

    /// Reduces a signed integer into `[0, p)`.
    #[inline]
    pub fn elem_signed(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.p as i64) as u64)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let s = a.0 + b.0;
        Fe(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        Fe(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if a.0 == 0 {
            a
        } else {
            Fe(self.p - a.0)
        }
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(((a.0 as u128 * b.0 as u128) % self.p as u128) as u64)
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, x: Fe) -> Result<Fe> {
        if x.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.p as i128, x.0 as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(Fe(t0.rem_euclid(self.p as i128) as u64))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Iterates over every element `0, 1, ..., p - 1`.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.p).map(Fe)
    }

    /// Smallest generator of the multiplicative group `F_p^*`.
    pub fn primitive_root(&self) -> Fe {
        if self.p == 2 {
            return Fe::ONE;
        }
        let order = self.p - 1;
        let mut factors = [0u64; 64];
        let mut nf = 0;
        let mut m = order;
        let mut d = 2;
        while d * d <= m {
            if m.is_multiple_of(d) {
                factors[nf] = d;
                nf += 1;
                while m.is_multiple_of(d) {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors[nf] = m;
            nf += 1;
        }
        (2..self.p)
            .map(Fe)
            .find(|&g| factors[..nf].iter().all(|&q| self.pow(g, order / q) != Fe::ONE))
            .expect("F_p^* is cyclic")
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        let ctx = PlaneContext::new(5).unwrap();
        assert_eq!(ctx.inv(ctx.elem(1)).unwrap(), ctx.elem(1));
        assert_eq!(ctx.inv(ctx.elem(2)).unwrap(), ctx.elem(3));
        assert_eq!(ctx.inv(Fe::ZERO), Err(Error::ZeroInverse));
    }

    #[test]
    fn inverse_is_involution() {
        for p in [3u64, 5, 7, 101, 1009] {
            let ctx = PlaneContext::new(p).unwrap();
            for x in ctx.elements().skip(1) {
                let y = ctx.inv(x).unwrap();
                assert_eq!(ctx.mul(x, y), Fe::ONE);
                assert_eq!(ctx.inv(y).unwrap(), x);
            }
        }
    }

    #[test]
    fn rejects_composites_and_small_moduli() {
        for n in [0u64, 1, 2, 4, 9, 561, 1_000_000, 3_215_031_751] {
            assert!(PlaneContext::new(n).is_err(), "{n}");
        }
        assert!(PlaneContext::new_allow_two(2).is_ok());
        assert!(PlaneContext::new((1 << 61) - 1).is_ok());
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0u64..5000 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "{n}");
        }
    }

    #[test]
    fn large_modulus_products_do_not_overflow() {
        let p = (1u64 << 61) - 1;
        let ctx = PlaneContext::new(p).unwrap();
        let a = ctx.elem(p - 1);
        assert_eq!(ctx.mul(a, a), Fe::ONE);
        assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), Fe::ONE);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(PlaneContext::new(1009).unwrap().primitive_root().value(), 11);
        assert_eq!(PlaneContext::new(7).unwrap().primitive_root().value(), 3);
        assert_eq!(PlaneContext::new(101).unwrap().primitive_root().value(), 2);
    }
}
