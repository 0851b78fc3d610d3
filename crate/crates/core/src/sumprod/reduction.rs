//! Projective reduction of a configuration `(p1, p2, p3, p4, R)` to a
//! partial grid.
//!
//! `tau` sends `p4` to `[1:0:0]`, `p3` to `[0:1:0]` and `p1` to the origin.
//! Lines through `p3` then become vertical, so the x-coordinates of the
//! image number `K3`; lines through `p4` become horizontal and the
//! y-coordinates number `K4`. Lines through `p1` become lines through the
//! origin, read off by the ratio `x / y`, and lines through `p2` become a
//! parallel pencil `x + lambda y = const`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Fe, PlaneContext};
use crate::plane::{build_tau, AffinePoint, ProjLine, ProjMap, ProjPoint};
use crate::refine::RConfig;

use super::grid::{partial_defined, GridInstance, Op};

/// Number of distinct lines joining `apex` to the points of `set` (the
/// apex itself excluded).
pub fn projective_goodness(ctx: &PlaneContext, apex: ProjPoint, set: &[ProjPoint]) -> usize {
    let [x1, y1, z1] = apex.coords();
    let lines: BTreeSet<[Fe; 3]> = set
        .iter()
        .filter(|&&q| q != apex)
        .map(|q| {
            let [x2, y2, z2] = q.coords();
            let u = ctx.sub(ctx.mul(y1, z2), ctx.mul(z1, y2));
            let v = ctx.sub(ctx.mul(z1, x2), ctx.mul(x1, z2));
            let w = ctx.sub(ctx.mul(x1, y2), ctx.mul(y1, x2));
            ProjLine::new(ctx, u, v, w).expect("distinct points span a line").coeffs()
        })
        .collect();
    lines.len()
}

/// Cardinality checks of a reduction. Each bound is in fact an equality,
/// since `tau` is a bijection on lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionBounds {
    pub size_preserved: bool,
    pub a_within_k3: bool,
    pub b_within_k4: bool,
    /// `|A -_G B'| <= K2`: the pencil through `p2`.
    pub diff_within_k2: bool,
    /// `|A /_G B'| + [some b = 0] <= K1`: lines through `p1`.
    pub ratio_within_k1: bool,
    /// The opposite labeling, `|A -_G B'| <= K1` and `|A /_G B'| <= K2`.
    pub swapped_labeling: bool,
    pub all_equalities: bool,
}

impl ReductionBounds {
    /// Every bound under the geometric binding.
    pub fn all_hold(&self) -> bool {
        self.size_preserved && self.a_within_k3 && self.b_within_k4 && self.diff_within_k2 && self.ratio_within_k1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionOutput {
    /// `(A, B', G')` with `B' = -lambda B`, so that `A -_{G'} B'` is the
    /// set of pencil values `a + lambda b`.
    pub grid: GridInstance,
    /// `(A, B, G)`: the image of `R` before rescaling.
    pub image: GridInstance,
    pub tau: ProjMap,
    /// Pencil slope: lines through `tau(p2)` are `x + lambda y = const`.
    pub lambda: Fe,
    pub apexes: [ProjPoint; 4],
    /// `K1..K4`: goodness of the source set with respect to `p1..p4`.
    pub goodness: [usize; 4],
    pub source_size: usize,
    pub diff_size: usize,
    pub ratio_size: usize,
    pub zero_denominator_edges: usize,
    pub bounds: ReductionBounds,
    pub source: Option<RConfig>,
}

/// Reduces `R` (which must avoid the line through `p3, p4`) with apexes
/// given projectively.
pub fn reduce_points(
    ctx: &PlaneContext,
    apexes: [ProjPoint; 4],
    r: &[AffinePoint],
) -> Result<ReductionOutput> {
    let [p1, p2, p3, p4] = apexes;
    let tau = build_tau(ctx, p1, p4, p3)?;
    let mut image = Vec::with_capacity(r.len());
    for &x in r {
        let y = tau.apply(ctx, x.lift()).to_affine().ok_or(Error::NonAffineImage)?;
        image.push((y.x, y.y));
    }
    let [d1, d2, d3] = tau.apply(ctx, p2).coords();
    if !d3.is_zero() || d1.is_zero() || d2.is_zero() {
        return Err(Error::LambdaDegenerate);
    }
    let mu = ctx.div(d1, d2)?;
    let lambda = ctx.neg(mu);

    let unscaled = GridInstance::new(
        *ctx,
        image.iter().map(|e| e.0),
        image.iter().map(|e| e.1),
        image.iter().copied(),
    )?;
    let scaled: Vec<(Fe, Fe)> = image.iter().map(|&(a, b)| (a, ctx.mul(mu, b))).collect();
    let grid = GridInstance::new(
        *ctx,
        scaled.iter().map(|e| e.0),
        scaled.iter().map(|e| e.1),
        scaled.iter().copied(),
    )?
    .with_lambda(lambda);

    let lifted: Vec<ProjPoint> = r.iter().map(|x| x.lift()).collect();
    let goodness = apexes.map(|apex| projective_goodness(ctx, apex, &lifted));
    let (diff, _) = partial_defined(ctx, grid.edges(), Op::Sub);
    let (ratio, zero_den) = partial_defined(ctx, grid.edges(), Op::Div);
    let ratio_lines = ratio.len() + (zero_den > 0) as usize;
    let [k1, k2, k3, k4] = goodness;
    let (na, nb) = (grid.a().len(), grid.b().len());
    let bounds = ReductionBounds {
        size_preserved: grid.edges().len() == r.len(),
        a_within_k3: na <= k3,
        b_within_k4: nb <= k4,
        diff_within_k2: diff.len() <= k2,
        ratio_within_k1: ratio_lines <= k1,
        swapped_labeling: diff.len() <= k1 && ratio.len() <= k2,
        all_equalities: na == k3 && nb == k4 && diff.len() == k2 && ratio_lines == k1,
    };
    Ok(ReductionOutput {
        grid,
        image: unscaled,
        tau,
        lambda,
        apexes,
        goodness,
        source_size: r.len(),
        diff_size: diff.len(),
        ratio_size: ratio.len(),
        zero_denominator_edges: zero_den,
        bounds,
        source: None,
    })
}

/// Reduces the configuration's `R`, which must already be stripped of its
/// points on `l*`.
pub fn reduce_to_grid(ctx: &PlaneContext, r: &RConfig) -> Result<ReductionOutput> {
    let apexes = [r.q.p1, r.q.p2, r.p3, r.p4].map(AffinePoint::lift);
    let mut out = reduce_points(ctx, apexes, r.r.as_slice())?;
    out.source = Some(r.clone());
    Ok(out)
}
