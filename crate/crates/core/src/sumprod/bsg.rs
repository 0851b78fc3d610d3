//! Constructive graph refinements turning a dense partial difference set
//! into a large subset with small full difference set and large
//! multiplicative energy.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::ratio::{big_pow, powi, ExactRatio};

use super::energy::{mult_energy, EnergyReport};
use super::eps::Eps;
use super::grid::{fe_set, full_set, partial_defined, sorted_intersection_len, GridInstance, Op};

/// A subset `A'` most of whose ordered pairs share at least `threshold`
/// neighbours.
#[derive(Clone, Debug, PartialEq)]
pub struct PopularSubset {
    pub a_prime: Vec<Fe>,
    pub threshold: u64,
    /// Ordered pairs of `A'` with codegree at least `threshold`.
    pub popular_pairs: u64,
    /// `|A'| |B| / |G|`.
    pub size_ratio: f64,
    /// `t |A|^2 |B| / |G|^2`.
    pub threshold_ratio: f64,
    pub candidates: usize,
}

fn pair_codegrees(g: &GridInstance, s: &[Fe]) -> Vec<u64> {
    let mut out = Vec::with_capacity(s.len() * s.len());
    for &x in s {
        for &y in s {
            out.push(g.codegree(x, y) as u64);
        }
    }
    out
}

/// Picks `A'` among the neighbourhood candidates `{a : b ∈ N(a)}` and the
/// high-degree candidate `{a : 2|A| |N(a)| >= |G|}`.
///
/// For each candidate the threshold `t` is the largest value such that at
/// least `(1 - eps)|A'|^2` ordered pairs have codegree `>= t`; candidates
/// with `t = 0` or fewer than two members (one if only one vertex has an
/// edge) are infeasible. The winner maximises `|A'|`, then `t`, then is the
/// lexicographically smallest.
pub fn select_popular_subset(g: &GridInstance, eps: Eps) -> Result<PopularSubset> {
    let n_edges = g.edges().len();
    if n_edges == 0 {
        return Err(Error::EmptySet);
    }
    let a_len = g.a().len();
    let mut candidates: BTreeSet<Vec<Fe>> = BTreeSet::new();
    let mut by_b: BTreeMap<Fe, Vec<Fe>> = BTreeMap::new();
    for &(x, y) in g.edges() {
        by_b.entry(y).or_default().push(x);
    }
    candidates.extend(by_b.into_values());
    candidates.insert(
        g.a().iter().copied().filter(|&x| 2 * a_len * g.degree(x) >= n_edges).collect(),
    );
    let active = g.a().iter().filter(|&&x| g.degree(x) > 0).count();
    let min_size = active.min(2);

    let mut best: Option<(Vec<Fe>, u64, u64)> = None;
    let mut best_fraction = 0.0f64;
    for s in &candidates {
        if s.len() < min_size {
            continue;
        }
        let mut codeg = pair_codegrees(g, s);
        let total = codeg.len() as u64;
        let nonzero = codeg.iter().filter(|&&c| c > 0).count();
        best_fraction = best_fraction.max(nonzero as f64 / total as f64);
        codeg.sort_unstable_by(|x, y| y.cmp(x));
        let need = eps.ceil_one_minus(total).max(1);
        let t = codeg[need as usize - 1];
        if t == 0 {
            continue;
        }
        let popular = codeg.iter().filter(|&&c| c >= t).count() as u64;
        let better = match &best {
            None => true,
            Some((b, bt, _)) => (s.len(), t) > (b.len(), *bt),
        };
        if better {
            best = Some((s.clone(), t, popular));
        }
    }
    let (a_prime, threshold, popular_pairs) = best.ok_or(Error::NoSelection {
        best_fraction,
        required: 1.0 - eps.as_f64(),
    })?;
    let (a, b, e) = (a_len as f64, g.b().len() as f64, n_edges as f64);
    Ok(PopularSubset {
        size_ratio: a_prime.len() as f64 * b / e,
        threshold_ratio: threshold as f64 * a * a * b / (e * e),
        a_prime,
        threshold,
        popular_pairs,
        candidates: candidates.len(),
    })
}

/// `A'` with the graph `H` of its popular pairs and both partial sets over
/// `H`.
#[derive(Clone, Debug, PartialEq)]
pub struct RefinedGraph {
    pub selection: PopularSubset,
    /// `H ⊆ A' × A'` as a grid on `(A', A')`.
    pub h: GridInstance,
    pub diff_set: Vec<Fe>,
    /// `A' /_H A'` over pairs with nonzero denominator.
    pub ratio_set: Vec<Fe>,
    pub ratio_skipped: usize,
    /// `|A' -_H A'| |G|^2 / (|A -_G B|^2 |A|^2 |B|)`.
    pub diff_ratio: f64,
    /// The same with `/` in place of `-`; `None` when `A /_G B` is empty.
    pub ratio_ratio: Option<f64>,
}

pub fn build_refined_graph(g: &GridInstance, eps: Eps) -> Result<RefinedGraph> {
    let ctx = *g.ctx();
    let selection = select_popular_subset(g, eps)?;
    let s = &selection.a_prime;
    let t = selection.threshold as usize;
    let pairs: Vec<(Fe, Fe)> = s
        .iter()
        .flat_map(|&x| s.iter().map(move |&y| (x, y)))
        .filter(|&(x, y)| g.codegree(x, y) >= t)
        .collect();
    let total = (s.len() * s.len()) as u64;
    if !eps.at_least_one_minus(pairs.len() as u64, total) {
        return Err(Error::Invariant(alloc::format!(
            "popular pairs {} below (1 - {eps}) * {total}",
            pairs.len()
        )));
    }
    let h = GridInstance::new(ctx, s.iter().copied(), s.iter().copied(), pairs)?;
    let (diff_set, _) = partial_defined(&ctx, h.edges(), Op::Sub);
    let (ratio_set, ratio_skipped) = partial_defined(&ctx, h.edges(), Op::Div);
    let (g_diff, _) = partial_defined(&ctx, g.edges(), Op::Sub);
    let (g_ratio, _) = partial_defined(&ctx, g.edges(), Op::Div);
    let (a, b, e) = (g.a().len() as f64, g.b().len() as f64, g.edges().len() as f64);
    let scale = e * e / (a * a * b);
    let diff_ratio = diff_set.len() as f64 * scale / powi(g_diff.len() as f64, 2);
    let ratio_ratio = (!g_ratio.is_empty())
        .then(|| ratio_set.len() as f64 * scale / powi(g_ratio.len() as f64, 2));
    Ok(RefinedGraph { selection, h, diff_set, ratio_set, ratio_skipped, diff_ratio, ratio_ratio })
}

/// High-degree rows of `G` and columns of `H` with their full difference set.
#[derive(Clone, Debug, PartialEq)]
pub struct Regularized {
    pub a_prime: Vec<Fe>,
    pub c_prime: Vec<Fe>,
    /// `A' - C'`.
    pub diff: Vec<Fe>,
    /// Smallest number of middle vertices `b` joining a pair in `A' × C'`.
    pub min_common: usize,
    /// `|A' - C'| |B| / (|A -_G B| |B -_H C|)`.
    pub ratio: f64,
}

fn check_density(g: &GridInstance, eps: Eps) -> Result<()> {
    let possible = (g.a().len() * g.b().len()) as u64;
    let edges = g.edges().len() as u64;
    if g.a().is_empty() || g.b().is_empty() {
        return Err(Error::EmptySet);
    }
    if !eps.at_least_one_minus(edges, possible) {
        return Err(Error::DensityPrecondition { edges, possible });
    }
    Ok(())
}

/// Keeps rows `a` with `G`-degree at least `(1 - sqrt(eps))|B|` and columns
/// `c` with `H`-degree at least `(1 - sqrt(eps))|B|`. `G` runs `A → B` and
/// `H` runs `B → C`.
pub fn regularize_diff(g: &GridInstance, h: &GridInstance, eps: Eps) -> Result<Regularized> {
    if g.b() != h.a() {
        return Err(Error::InvalidSpec("middle vertex sets differ".into()));
    }
    if !eps.less_than(1, 4) {
        return Err(Error::EpsOutOfRange(alloc::format!("{eps} (need < 1/4)")));
    }
    check_density(g, eps)?;
    check_density(h, eps)?;
    let ctx = *g.ctx();
    let nb = g.b().len() as u64;
    let dense = |deg: usize| eps.within_sqrt(nb - deg as u64, 1, nb);

    let a_prime: Vec<Fe> = g.a().iter().copied().filter(|&x| dense(g.degree(x))).collect();
    let mut into_c: BTreeMap<Fe, Vec<Fe>> = BTreeMap::new();
    for &(y, z) in h.edges() {
        into_c.entry(z).or_default().push(y);
    }
    let c_prime: Vec<Fe> = h
        .b()
        .iter()
        .copied()
        .filter(|z| dense(into_c.get(z).map_or(0, Vec::len)))
        .collect();

    let floors_hold = eps.above_sqrt_floor(a_prime.len() as u64, 1, g.a().len() as u64)
        && eps.above_sqrt_floor(c_prime.len() as u64, 1, h.b().len() as u64);
    if !floors_hold {
        return Err(Error::Invariant(alloc::format!(
            "size floor: |A'| = {} of {}, |C'| = {} of {}",
            a_prime.len(),
            g.a().len(),
            c_prime.len(),
            h.b().len()
        )));
    }
    let mut min_common = usize::MAX;
    for &x in &a_prime {
        for z in &c_prime {
            let into: &[Fe] = into_c.get(z).map_or(&[], |v| v.as_slice());
            min_common = min_common.min(sorted_intersection_len(g.neighbors(x), into));
        }
    }
    if min_common == 0 {
        return Err(Error::Invariant("a pair of A' x C' has no common middle vertex".into()));
    }
    let diff = full_set(&ctx, &a_prime, &c_prime, Op::Sub);
    let (gd, _) = partial_defined(&ctx, g.edges(), Op::Sub);
    let (hd, _) = partial_defined(&ctx, h.edges(), Op::Sub);
    let ratio = diff.len() as f64 * nb as f64 / (gd.len() as f64 * hd.len() as f64);
    Ok(Regularized { a_prime, c_prime, diff, min_common, ratio })
}

/// `A'` with `|A' - A'|` controlled by a dense partial difference set.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseRefined {
    pub a_prime: Vec<Fe>,
    pub diff: Vec<Fe>,
    /// `|A' - A'| |A| / |A -_G A|^2`.
    pub ratio: f64,
    pub regularized: Regularized,
}

/// Regularises `(A, A, A)` with `G = H` and intersects the row and column
/// survivors.
pub fn dense_diff_refine(g: &GridInstance, eps: Eps) -> Result<DenseRefined> {
    if g.a() != g.b() {
        return Err(Error::InvalidSpec("graph must live on A x A".into()));
    }
    let ctx = *g.ctx();
    let regularized = regularize_diff(g, g, eps)?;
    let keep: BTreeSet<Fe> = regularized.c_prime.iter().copied().collect();
    let a_prime: Vec<Fe> =
        regularized.a_prime.iter().copied().filter(|x| keep.contains(x)).collect();
    let n = g.a().len() as u64;
    if !eps.above_sqrt_floor(a_prime.len() as u64, 2, n) {
        return Err(Error::Invariant(alloc::format!(
            "size floor: |A'| = {} of {n}",
            a_prime.len()
        )));
    }
    let diff = full_set(&ctx, &a_prime, &a_prime, Op::Sub);
    let (gd, _) = partial_defined(&ctx, g.edges(), Op::Sub);
    let ratio = diff.len() as f64 * n as f64 / powi(gd.len() as f64, 2);
    Ok(DenseRefined { a_prime, diff, ratio, regularized })
}

/// The full chain from a partial grid to `A''` with small difference set and
/// large multiplicative energy.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfBsg {
    pub refined: RefinedGraph,
    pub dense: DenseRefined,
    /// `A''`.
    pub a2: Vec<Fe>,
    /// `|H'|` for `H' = H ∩ (A'' × A'')`.
    pub h_prime_size: usize,
    /// Pairs of `H'` with nonzero second coordinate.
    pub h_prime_defined: usize,
    /// `|A'' /_{H'} A''|`.
    pub h_prime_ratio_size: usize,
    pub diff_size: usize,
    pub energy: EnergyReport,
    pub g_diff_size: usize,
    pub g_ratio_size: usize,
    /// `|A'' - A''|` over `|A -_G B|^4 |A|^4 |B|^3 / |G|^5`.
    pub ceiling_ratio: ExactRatio,
    /// `E_x(A'')` over `|G|^6 / (|B|^5 |A|^2 |A /_G B|^2)`.
    pub floor_ratio: ExactRatio,
}

impl HalfBsg {
    /// `E_x(A'') |A'' /_{H'} A''| >= |H'_defined|^2`.
    pub fn cauchy_schwarz_holds(&self) -> bool {
        let d = self.h_prime_defined as u128;
        self.energy.energy * self.h_prime_ratio_size as u128 >= d * d
    }
}

pub fn half_bsg(g: &GridInstance, eps: Eps) -> Result<HalfBsg> {
    if !eps.less_than(1, 16) {
        return Err(Error::EpsOutOfRange(alloc::format!("{eps} (need < 1/16)")));
    }
    let ctx = *g.ctx();
    let refined = build_refined_graph(g, eps)?;
    let (g_diff, _) = partial_defined(&ctx, g.edges(), Op::Sub);
    let (g_ratio, _) = partial_defined(&ctx, g.edges(), Op::Div);
    if g_ratio.is_empty() {
        return Err(Error::EmptyRatioSet);
    }
    let dense = dense_diff_refine(&refined.h, eps)?;
    let a2 = dense.a_prime.clone();
    let keep: BTreeSet<Fe> = a2.iter().copied().collect();
    let h_prime: Vec<(Fe, Fe)> = refined
        .h
        .edges()
        .iter()
        .copied()
        .filter(|(x, y)| keep.contains(x) && keep.contains(y))
        .collect();
    let (h_ratio, skipped) = partial_defined(&ctx, &h_prime, Op::Div);
    if h_ratio.is_empty() {
        return Err(Error::EmptyRatioSet);
    }
    let energy = mult_energy(&ctx, &a2)?;
    let diff_size = fe_set(dense.diff.iter().copied()).len();

    let (na, nb, ng) = (g.a().len() as u64, g.b().len() as u64, g.edges().len() as u64);
    let ceiling_ratio = ExactRatio::new(
        BigUint::from(diff_size) * big_pow(ng, 5),
        big_pow(g_diff.len() as u64, 4) * big_pow(na, 4) * big_pow(nb, 3),
    );
    let floor_ratio = ExactRatio::new(
        BigUint::from(energy.energy) * big_pow(nb, 5) * big_pow(na, 2) * big_pow(g_ratio.len() as u64, 2),
        big_pow(ng, 6),
    );
    let out = HalfBsg {
        refined,
        dense,
        a2,
        h_prime_size: h_prime.len(),
        h_prime_defined: h_prime.len() - skipped,
        h_prime_ratio_size: h_ratio.len(),
        diff_size,
        energy,
        g_diff_size: g_diff.len(),
        g_ratio_size: g_ratio.len(),
        ceiling_ratio,
        floor_ratio,
    };
    if !out.cauchy_schwarz_holds() {
        return Err(Error::Invariant("energy below |H'|^2 / |A'' / A''|".into()));
    }
    Ok(out)
}
