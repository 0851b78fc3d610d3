use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{Fe, PlaneContext};
use crate::ratio::{big_pow, ExactRatio};

use super::energy::mult_energy;
use super::grid::{difference_set, fe_set, partial_defined, GridInstance, Op};

/// Exponents of `|G|^55 / (|A|^36 |B|^37 |A -_G B|^28 |A /_G B|^8)`.
pub const PARTIAL_SUMPROD_EXPONENTS: [u32; 5] = [55, 36, 37, 28, 8];

/// `E_x(A)^4 / (|A - A|^7 |A|^4)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RudnevReport {
    pub energy: u128,
    pub diff_size: usize,
    pub size: usize,
    pub ratio: ExactRatio,
    /// Set when `|A|^2 >= p`, outside the range the estimate speaks about.
    pub large_set_warning: bool,
}

pub fn check_rudnev(ctx: &PlaneContext, a: &[Fe]) -> Result<RudnevReport> {
    let a = fe_set(a.iter().copied());
    let energy = mult_energy(ctx, &a)?.energy;
    let diff_size = difference_set(ctx, &a).len();
    let num = num_traits::pow(BigUint::from(energy), 4);
    let den = big_pow(diff_size as u64, 7) * big_pow(a.len() as u64, 4);
    let n = a.len() as u128;
    Ok(RudnevReport {
        energy,
        diff_size,
        size: a.len(),
        ratio: ExactRatio::new(num, den),
        large_set_warning: n * n >= ctx.modulus() as u128,
    })
}

/// `|G|^55 / (|A|^36 |B|^37 |A -_G B|^28 |A /_G B|^8)` with its constituents.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialSumProdReport {
    pub g_size: usize,
    pub a_size: usize,
    pub b_size: usize,
    pub diff_size: usize,
    pub ratio_size: usize,
    /// Edges `(a, 0)` left out of the ratio set.
    pub zero_denominator_edges: usize,
    pub ratio: ExactRatio,
    /// Set when `|G| > p |B|`.
    pub large_graph_warning: bool,
}

pub fn check_partial_sumprod(g: &GridInstance) -> Result<PartialSumProdReport> {
    let ctx = g.ctx();
    if g.edges().is_empty() {
        return Err(Error::EmptySet);
    }
    let (diff, _) = partial_defined(ctx, g.edges(), Op::Sub);
    let (ratio_set, zero_den) = partial_defined(ctx, g.edges(), Op::Div);
    if ratio_set.is_empty() {
        return Err(Error::EmptyRatioSet);
    }
    let [eg, ea, eb, ed, er] = PARTIAL_SUMPROD_EXPONENTS;
    let num = big_pow(g.edges().len() as u64, eg);
    let den = big_pow(g.a().len() as u64, ea)
        * big_pow(g.b().len() as u64, eb)
        * big_pow(diff.len() as u64, ed)
        * big_pow(ratio_set.len() as u64, er);
    Ok(PartialSumProdReport {
        g_size: g.edges().len(),
        a_size: g.a().len(),
        b_size: g.b().len(),
        diff_size: diff.len(),
        ratio_size: ratio_set.len(),
        zero_denominator_edges: zero_den,
        ratio: ExactRatio::new(num, den),
        large_graph_warning: g.edges().len() as u128 > ctx.modulus() as u128 * g.b().len() as u128,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn rudnev_examples() {
        let ctx = PlaneContext::new(101).unwrap();
        let r = check_rudnev(&ctx, &[ctx.elem(1), ctx.elem(2)]).unwrap();
        assert_eq!((r.energy, r.diff_size, r.size), (6, 3, 2));
        assert_eq!(r.ratio, ExactRatio::from_u64(1296, 34992));
        assert!(!r.large_set_warning);
        let one = check_rudnev(&ctx, &[ctx.elem(9)]).unwrap();
        assert_eq!(one.ratio, ExactRatio::one());
        assert_eq!(check_rudnev(&ctx, &[]), Err(Error::EmptySet));
    }

    #[test]
    fn partial_sumprod_examples() {
        let ctx = PlaneContext::new(5).unwrap();
        let g = GridInstance::from_u64(ctx, &[1, 2], &[1, 3], &[(1, 1), (2, 3)]).unwrap();
        let r = check_partial_sumprod(&g).unwrap();
        assert_eq!((r.g_size, r.diff_size, r.ratio_size), (2, 2, 2));
        assert_eq!(r.ratio, ExactRatio::new(BigUint::one(), big_pow(2, 54)));
        let single = GridInstance::from_u64(ctx, &[1], &[1], &[(1, 1)]).unwrap();
        assert_eq!(check_partial_sumprod(&single).unwrap().ratio, ExactRatio::one());
    }

    #[test]
    fn all_zero_denominators_is_an_error() {
        let ctx = PlaneContext::new(5).unwrap();
        let g = GridInstance::from_u64(ctx, &[1, 2], &[0], &[(1, 0), (2, 0)]).unwrap();
        assert_eq!(check_partial_sumprod(&g), Err(Error::EmptyRatioSet));
    }
}
