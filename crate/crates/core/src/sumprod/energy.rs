use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Fe, PlaneContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnergyMethod {
    Brute,
    Bucketed,
}

/// Multiplicative energy: ordered quadruples `(a, b, c, d)` in `A^4` with
/// `ab = cd`. Zero products count like any other product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnergyReport {
    pub energy: u128,
    pub method: EnergyMethod,
    /// `r(x) = #{(a, b) in A^2 : ab = x}` for every attained product.
    pub histogram: Vec<(Fe, u64)>,
}

fn product_histogram(ctx: &PlaneContext, a: &[Fe]) -> Vec<(Fe, u64)> {
    let mut r: BTreeMap<Fe, u64> = BTreeMap::new();
    for &x in a {
        for &y in a {
            *r.entry(ctx.mul(x, y)).or_default() += 1;
        }
    }
    r.into_iter().collect()
}

/// `E_x(A) = sum_x r(x)^2`. `a` must be a set (no repeats).
pub fn mult_energy(ctx: &PlaneContext, a: &[Fe]) -> Result<EnergyReport> {
    mult_energy_with(ctx, a, EnergyMethod::Bucketed)
}

pub fn mult_energy_with(ctx: &PlaneContext, a: &[Fe], method: EnergyMethod) -> Result<EnergyReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let histogram = product_histogram(ctx, a);
    let energy = match method {
        EnergyMethod::Bucketed => histogram.iter().map(|&(_, r)| r as u128 * r as u128).sum(),
        EnergyMethod::Brute => brute_energy(ctx, a),
    };
    Ok(EnergyReport { energy, method, histogram })
}

fn brute_energy(ctx: &PlaneContext, a: &[Fe]) -> u128 {
    let mut n = 0u128;
    for &w in a {
        for &x in a {
            let lhs = ctx.mul(w, x);
            for &y in a {
                for &z in a {
                    n += (lhs == ctx.mul(y, z)) as u128;
                }
            }
        }
    }
    n
}
