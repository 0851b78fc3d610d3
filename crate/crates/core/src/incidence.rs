//! Point and line sets, incidence counting, determined lines, and dyadic
//! pigeonholing of degree classes.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::PlaneContext;
use crate::plane::{line_through, AffLine, AffinePoint};

/// Sorted, deduplicated points. The position of a point in the slice is its
/// membership index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    ctx: PlaneContext,
    points: Vec<AffinePoint>,
}

impl PointSet {
    pub fn new(ctx: PlaneContext, points: impl IntoIterator<Item = AffinePoint>) -> Self {
        let mut points: Vec<_> = points.into_iter().collect();
        points.sort_unstable();
        points.dedup();
        PointSet { ctx, points }
    }

    pub fn empty(ctx: PlaneContext) -> Self {
        PointSet { ctx, points: Vec::new() }
    }

    /// Every point of `F_p^2`.
    pub fn full_plane(ctx: PlaneContext) -> Self {
        let points = ctx
            .elements()
            .flat_map(|x| ctx.elements().map(move |y| AffinePoint::new(x, y)))
            .collect();
        PointSet { ctx, points }
    }

    pub fn ctx(&self) -> &PlaneContext {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn as_slice(&self) -> &[AffinePoint] {
        &self.points
    }

    pub fn iter(&self) -> core::slice::Iter<'_, AffinePoint> {
        self.points.iter()
    }

    pub fn index_of(&self, p: &AffinePoint) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    pub fn contains(&self, p: &AffinePoint) -> bool {
        self.index_of(p).is_some()
    }

    pub fn filter(&self, mut keep: impl FnMut(&AffinePoint) -> bool) -> Self {
        PointSet { ctx: self.ctx, points: self.points.iter().copied().filter(|p| keep(p)).collect() }
    }

    pub fn intersection(&self, other: &PointSet) -> Self {
        self.filter(|p| other.contains(p))
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.points.iter().all(|p| other.contains(p))
    }

    /// Points of the set lying on `line`.
    pub fn on_line(&self, line: &AffLine) -> Self {
        let ctx = self.ctx;
        self.filter(|p| line.contains(&ctx, *p))
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a AffinePoint;
    type IntoIter = core::slice::Iter<'a, AffinePoint>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Sorted, deduplicated canonical lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSet {
    ctx: PlaneContext,
    lines: Vec<AffLine>,
}

impl LineSet {
    pub fn new(ctx: PlaneContext, lines: impl IntoIterator<Item = AffLine>) -> Self {
        let mut lines: Vec<_> = lines.into_iter().collect();
        lines.sort_unstable();
        lines.dedup();
        LineSet { ctx, lines }
    }

    pub fn empty(ctx: PlaneContext) -> Self {
        LineSet { ctx, lines: Vec::new() }
    }

    /// All `p^2 + p` lines.
    pub fn full_plane(ctx: PlaneContext) -> Self {
        LineSet { ctx, lines: AffLine::all(&ctx).collect() }
    }

    pub fn ctx(&self) -> &PlaneContext {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn as_slice(&self) -> &[AffLine] {
        &self.lines
    }

    pub fn iter(&self) -> core::slice::Iter<'_, AffLine> {
        self.lines.iter()
    }

    pub fn index_of(&self, l: &AffLine) -> Option<usize> {
        self.lines.binary_search(l).ok()
    }

    pub fn contains(&self, l: &AffLine) -> bool {
        self.index_of(l).is_some()
    }

    pub fn filter(&self, mut keep: impl FnMut(&AffLine) -> bool) -> Self {
        LineSet { ctx: self.ctx, lines: self.lines.iter().copied().filter(|l| keep(l)).collect() }
    }

    pub fn is_subset(&self, other: &LineSet) -> bool {
        self.lines.iter().all(|l| other.contains(l))
    }
}

impl<'a> IntoIterator for &'a LineSet {
    type Item = &'a AffLine;
    type IntoIter = core::slice::Iter<'a, AffLine>;

    fn into_iter(self) -> Self::IntoIter {
        self.lines.iter()
    }
}

/// Exact incidence count with per-point degrees and per-line richness,
/// indexed like the input sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceProfile {
    pub incidences: u64,
    pub point_degrees: Vec<u64>,
    pub line_richness: Vec<u64>,
}

impl IncidenceProfile {
    /// `sum_l mu(l)^2`.
    pub fn richness_square_sum(&self) -> u128 {
        self.line_richness.iter().map(|&m| m as u128 * m as u128).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IncidenceAlgorithm {
    /// Test every (point, line) pair.
    Naive,
    /// Group lines by normal direction; evaluate each point once per
    /// direction and look the value up among that direction's offsets.
    Bucketed,
}

pub fn count_incidences(points: &PointSet, lines: &LineSet) -> IncidenceProfile {
    count_incidences_with(points, lines, IncidenceAlgorithm::Bucketed)
}

pub fn count_incidences_with(
    points: &PointSet,
    lines: &LineSet,
    algorithm: IncidenceAlgorithm,
) -> IncidenceProfile {
    debug_assert_eq!(points.ctx(), lines.ctx());
    match algorithm {
        IncidenceAlgorithm::Naive => count_naive(points, lines),
        IncidenceAlgorithm::Bucketed => count_bucketed(points, lines),
    }
}

fn count_naive(points: &PointSet, lines: &LineSet) -> IncidenceProfile {
    let ctx = points.ctx();
    let mut point_degrees = alloc::vec![0u64; points.len()];
    let mut line_richness = alloc::vec![0u64; lines.len()];
    let mut incidences = 0;
    for (i, p) in points.iter().enumerate() {
        for (j, l) in lines.iter().enumerate() {
            if l.contains(ctx, *p) {
                point_degrees[i] += 1;
                line_richness[j] += 1;
                incidences += 1;
            }
        }
    }
    IncidenceProfile { incidences, point_degrees, line_richness }
}

fn count_bucketed(points: &PointSet, lines: &LineSet) -> IncidenceProfile {
    let ctx = points.ctx();
    let mut point_degrees = alloc::vec![0u64; points.len()];
    let mut line_richness = alloc::vec![0u64; lines.len()];
    let mut incidences = 0;
    let ls = lines.as_slice();
    // Canonical order sorts by (a, b, c), so each direction is a contiguous
    // run sorted by offset.
    let mut start = 0;
    while start < ls.len() {
        let (a, b) = (ls[start].a(), ls[start].b());
        let mut end = start + 1;
        while end < ls.len() && ls[end].a() == a && ls[end].b() == b {
            end += 1;
        }
        let run = &ls[start..end];
        for (i, p) in points.iter().enumerate() {
            let c = ctx.add(ctx.mul(a, p.x), ctx.mul(b, p.y));
            if let Ok(k) = run.binary_search_by(|l| l.c().cmp(&c)) {
                point_degrees[i] += 1;
                line_richness[start + k] += 1;
                incidences += 1;
            }
        }
        start = end;
    }
    IncidenceProfile { incidences, point_degrees, line_richness }
}

/// Every line through at least two points, with its richness, in canonical
/// line order.
pub fn determined_lines_with_richness(points: &PointSet) -> Vec<(AffLine, u64)> {
    let ctx = points.ctx();
    let pts = points.as_slice();
    let mut rich: BTreeMap<AffLine, u64> = BTreeMap::new();
    let mut local: Vec<AffLine> = Vec::with_capacity(pts.len());
    for (i, &p) in pts.iter().enumerate() {
        local.clear();
        local.extend(pts[i + 1..].iter().map(|&q| line_through(ctx, p, q).expect("distinct")));
        local.sort_unstable();
        // A line is first met from its smallest point, where the run length
        // plus the anchor is its full richness.
        for run in local.chunk_by(|x, y| x == y) {
            rich.entry(run[0]).or_insert(run.len() as u64 + 1);
        }
    }
    rich.into_iter().collect()
}

/// `L(P)`: the lines determined by pairs of distinct points.
pub fn lines_determined(points: &PointSet) -> Result<LineSet> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let lines = determined_lines_with_richness(points).into_iter().map(|(l, _)| l).collect();
    Ok(LineSet { ctx: *points.ctx(), lines })
}

/// The richest line of `L(P)` and its point count; ties go to the smallest
/// canonical line.
pub fn max_collinear(points: &PointSet) -> Result<(AffLine, u64)> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let mut best: Option<(AffLine, u64)> = None;
    for (l, m) in determined_lines_with_richness(points) {
        if best.is_none_or(|(_, bm)| m > bm) {
            best = Some((l, m));
        }
    }
    Ok(best.expect("two distinct points determine a line"))
}

/// `ceil(log2(n))` for `n >= 1`.
pub fn ceil_log2(n: u64) -> u32 {
    debug_assert!(n >= 1);
    64 - (n - 1).leading_zeros()
}

/// One dyadic degree class `[base, 2*base)` selected by pigeonholing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicClass<S> {
    pub members: S,
    /// Exponent `j` with `base = 2^j`.
    pub level: u32,
    /// Lower end of the class; every member's degree lies in `[base, 2*base)`.
    pub base: u64,
    /// The pigeonholed quantity: `|members| * base` for points,
    /// `|members| * base^2` for lines.
    pub mass: u128,
    /// The total being pigeonholed: `I(P, L)` for points, `sum mu^2` for lines.
    pub total: u128,
    /// `ceil(log2(2 n))` with `n = |L|` (points) or `|P|` (lines).
    pub log_bound: u32,
    /// Bound on member weight over class weight: 2 for degrees, 4 for
    /// squared richness.
    slack: u32,
}

impl<S> DyadicClass<S> {
    /// The proven pigeonhole guarantee `slack * mass * log_bound >= total`.
    pub fn guarantee_holds(&self) -> bool {
        self.slack as u128 * self.mass * self.log_bound as u128 >= self.total
    }

    /// The polylog factor actually lost: `total / mass`.
    pub fn achieved_log_factor(&self) -> f64 {
        self.total as f64 / self.mass as f64
    }
}

fn dyadic_level(d: u64) -> u32 {
    63 - d.leading_zeros()
}

/// Picks the level maximising `count * weight(level)`, ties to the lower level.
fn best_level(degrees: &[u64], weight: impl Fn(u64) -> u128) -> Option<u32> {
    let mut counts: BTreeMap<u32, u128> = BTreeMap::new();
    for &d in degrees.iter().filter(|&&d| d > 0) {
        *counts.entry(dyadic_level(d)).or_default() += 1;
    }
    let mut best: Option<(u32, u128)> = None;
    for (&j, &c) in &counts {
        let m = c * weight(1u64 << j);
        if best.is_none_or(|(_, bm)| m > bm) {
            best = Some((j, m));
        }
    }
    best.map(|(j, _)| j)
}

/// Dyadic pigeonholing of point degrees: the class maximising `|P_1| * K`.
pub fn dyadic_select_points(points: &PointSet, lines: &LineSet) -> Result<DyadicClass<PointSet>> {
    let prof = count_incidences(points, lines);
    if prof.incidences == 0 {
        return Err(Error::EmptyIncidence);
    }
    let level = best_level(&prof.point_degrees, |k| k as u128).expect("positive incidences");
    let members: Vec<_> = points
        .iter()
        .zip(&prof.point_degrees)
        .filter(|(_, &d)| d > 0 && dyadic_level(d) == level)
        .map(|(p, _)| *p)
        .collect();
    let base = 1u64 << level;
    Ok(DyadicClass {
        mass: members.len() as u128 * base as u128,
        members: PointSet { ctx: *points.ctx(), points: members },
        level,
        base,
        total: prof.incidences as u128,
        log_bound: ceil_log2(2 * lines.len() as u64),
        slack: 2,
    })
}

/// Dyadic pigeonholing of line richness: the class maximising `|L_1| * k^2`.
/// Richness is measured against `points`; `lines` may be `L(P)`.
pub fn dyadic_select_lines(points: &PointSet, lines: &LineSet) -> Result<DyadicClass<LineSet>> {
    let prof = count_incidences(points, lines);
    if prof.incidences == 0 {
        return Err(Error::EmptyIncidence);
    }
    let level =
        best_level(&prof.line_richness, |k| k as u128 * k as u128).expect("positive incidences");
    let members: Vec<_> = lines
        .iter()
        .zip(&prof.line_richness)
        .filter(|(_, &m)| m > 0 && dyadic_level(m) == level)
        .map(|(l, _)| *l)
        .collect();
    let base = 1u64 << level;
    Ok(DyadicClass {
        mass: members.len() as u128 * base as u128 * base as u128,
        members: LineSet { ctx: *lines.ctx(), lines: members },
        level,
        base,
        total: prof.richness_square_sum(),
        log_bound: ceil_log2(2 * points.len() as u64),
        slack: 4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> PlaneContext {
        PlaneContext::new_allow_two(p).unwrap()
    }

    fn pts(c: PlaneContext, v: &[(u64, u64)]) -> PointSet {
        PointSet::new(c, v.iter().map(|&(x, y)| AffinePoint::from_u64(&c, x, y)))
    }

    #[test]
    fn full_plane_counts() {
        for (p, expect) in [(2u64, 12u64), (5, 150)] {
            let c = ctx(p);
            let prof = count_incidences(&PointSet::full_plane(c), &LineSet::full_plane(c));
            assert_eq!(prof.incidences, expect);
        }
    }

    #[test]
    fn axes_through_origin() {
        let c = ctx(5);
        let p = pts(c, &[(0, 0)]);
        let l = LineSet::new(
            c,
            [AffLine::from_i64(&c, 1, 0, 0).unwrap(), AffLine::from_i64(&c, 0, 1, 0).unwrap()],
        );
        for alg in [IncidenceAlgorithm::Naive, IncidenceAlgorithm::Bucketed] {
            assert_eq!(count_incidences_with(&p, &l, alg).incidences, 2);
        }
    }

    #[test]
    fn determined_line_examples() {
        let c = ctx(7);
        assert_eq!(lines_determined(&pts(c, &[(0, 0), (1, 0), (0, 1)])).unwrap().len(), 3);
        assert_eq!(lines_determined(&pts(c, &[(0, 0), (1, 1), (2, 2), (5, 5)])).unwrap().len(), 1);
        assert_eq!(lines_determined(&pts(c, &[(0, 0), (1, 0), (0, 1), (1, 1)])).unwrap().len(), 6);
        assert_eq!(lines_determined(&pts(c, &[(3, 3)])), Err(Error::TooFewPoints(1)));
    }

    #[test]
    fn max_collinear_examples() {
        let c = ctx(7);
        let line = pts(c, &[(0, 1), (1, 3), (2, 5), (3, 0), (4, 2)]);
        assert_eq!(max_collinear(&line).unwrap().1, 5);
        let grid = PointSet::new(
            c,
            (0..3).flat_map(|x| (0..3).map(move |y| AffinePoint::from_u64(&c, x, y))),
        );
        assert_eq!(max_collinear(&grid).unwrap().1, 3);
        assert_eq!(max_collinear(&pts(c, &[(0, 0), (1, 1)])).unwrap().1, 2);
    }

    #[test]
    fn dyadic_points_regular_planes() {
        let c = ctx(3);
        let d = dyadic_select_points(&PointSet::full_plane(c), &LineSet::full_plane(c)).unwrap();
        assert_eq!((d.members.len(), d.base), (9, 4));
        let c = ctx(2);
        let d = dyadic_select_points(&PointSet::full_plane(c), &LineSet::full_plane(c)).unwrap();
        assert_eq!((d.members.len(), d.base), (4, 2));
        assert!(d.guarantee_holds());
    }

    #[test]
    fn dyadic_lines_examples() {
        let c = ctx(7);
        let line = pts(c, &[(0, 1), (1, 3), (2, 5), (3, 0), (4, 2)]);
        let lp = lines_determined(&line).unwrap();
        let d = dyadic_select_lines(&line, &lp).unwrap();
        assert_eq!(d.members.len(), 1);
        assert_eq!(d.base, 4);

        let c = ctx(3);
        let d = dyadic_select_lines(&PointSet::full_plane(c), &LineSet::full_plane(c)).unwrap();
        assert_eq!(d.members.len(), 12);
        assert!(d.base <= 3 && 3 < 2 * d.base);
    }

    #[test]
    fn dyadic_empty_incidence() {
        let c = ctx(5);
        let p = pts(c, &[(1, 1)]);
        let l = LineSet::new(c, [AffLine::from_i64(&c, 1, 0, 0).unwrap()]);
        assert_eq!(dyadic_select_points(&p, &l), Err(Error::EmptyIncidence));
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
    }
}
