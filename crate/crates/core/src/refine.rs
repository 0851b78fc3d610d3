//! Constructive refinement of point-line configurations.
//!
//! The popularity and boundedness refinements each keep at least half of
//! the incidences, exactly. The configuration searches are deterministic
//! greedy: every choice maximises a cardinality and breaks ties by the
//! canonical order of points and lines. Asymptotic sizes are surfaced as
//! ratios, never as pass/fail thresholds.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::incidence::{count_incidences, LineSet, PointSet};
use crate::plane::{line_through, AffLine, AffinePoint};
use crate::ratio::powi;

/// Witness that `covered` is supported on exactly `k` lines through `apex`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodnessCertificate {
    pub apex: AffinePoint,
    pub k: usize,
    pub lines: LineSet,
    /// Number of covered points on each supporting line, parallel to `lines`.
    pub line_loads: Vec<u64>,
    pub covered: PointSet,
}

impl GoodnessCertificate {
    /// Re-derives the certificate from scratch and checks every field.
    pub fn validate(&self) -> bool {
        let ctx = self.covered.ctx();
        let through_apex = self.lines.iter().all(|l| l.contains(ctx, self.apex));
        let covered = self.covered.iter().all(|q| self.lines.iter().any(|l| l.contains(ctx, *q)));
        let rederived = is_k_good(&self.covered, self.apex).ok();
        through_apex
            && covered
            && self.lines.len() == self.k
            && rederived.as_ref() == Some(self)
    }

    /// True when every supporting line belongs to `lines`.
    pub fn lines_within(&self, lines: &LineSet) -> bool {
        self.lines.is_subset(lines)
    }
}

/// The minimal `K` for which `(set, apex)` is `K`-good, with its witness.
pub fn is_k_good(set: &PointSet, apex: AffinePoint) -> Result<GoodnessCertificate> {
    if set.contains(&apex) {
        return Err(Error::ApexInSet);
    }
    let ctx = set.ctx();
    let mut through: Vec<AffLine> =
        set.iter().map(|&q| line_through(ctx, apex, q).expect("apex not in set")).collect();
    through.sort_unstable();
    let mut lines = Vec::new();
    let mut line_loads = Vec::new();
    for run in through.chunk_by(|a, b| a == b) {
        lines.push(run[0]);
        line_loads.push(run.len() as u64);
    }
    Ok(GoodnessCertificate {
        apex,
        k: lines.len(),
        lines: LineSet::new(*ctx, lines),
        line_loads,
        covered: set.clone(),
    })
}

/// Points incident to at least `I(P, L) / (2|P|)` lines.
pub fn refine_popular_points(points: &PointSet, lines: &LineSet) -> Result<PointSet> {
    let prof = count_incidences(points, lines);
    if prof.incidences == 0 {
        return Err(Error::EmptyIncidence);
    }
    let n = points.len() as u128;
    let total = prof.incidences as u128;
    let mut degrees = prof.point_degrees.iter();
    Ok(points.filter(|_| 2 * n * *degrees.next().unwrap() as u128 >= total))
}

/// Lines incident to at least `I(P, L) / (2|L|)` points.
pub fn refine_popular_lines(points: &PointSet, lines: &LineSet) -> Result<LineSet> {
    let prof = count_incidences(points, lines);
    if prof.incidences == 0 {
        return Err(Error::EmptyIncidence);
    }
    let n = lines.len() as u128;
    let total = prof.incidences as u128;
    let mut rich = prof.line_richness.iter();
    Ok(lines.filter(|_| 2 * n * *rich.next().unwrap() as u128 >= total))
}

/// Points incident to at most `max{4, 4|L|^2 / I(P, L)}` lines.
pub fn refine_bounded_points(points: &PointSet, lines: &LineSet) -> Result<PointSet> {
    let prof = count_incidences(points, lines);
    if prof.incidences == 0 {
        return Err(Error::EmptyIncidence);
    }
    let total = prof.incidences as u128;
    let n = lines.len() as u128;
    // deg <= max{4, 4n^2/I}  <=>  deg * I <= max{4I, 4n^2}
    let cap = (4 * total).max(4 * n * n);
    let mut degrees = prof.point_degrees.iter();
    Ok(points.filter(|_| *degrees.next().unwrap() as u128 * total <= cap))
}

/// Lines incident to at most `max{4, 4|P|^2 / I(P, L)}` points.
pub fn refine_bounded_lines(points: &PointSet, lines: &LineSet) -> Result<LineSet> {
    let prof = count_incidences(points, lines);
    if prof.incidences == 0 {
        return Err(Error::EmptyIncidence);
    }
    let total = prof.incidences as u128;
    let n = points.len() as u128;
    let cap = (4 * total).max(4 * n * n);
    let mut rich = prof.line_richness.iter();
    Ok(lines.filter(|_| *rich.next().unwrap() as u128 * total <= cap))
}

/// `P_p = { q in P, q != p : l_pq in L }`.
pub fn cover_set(points: &PointSet, lines: &LineSet, apex: AffinePoint) -> Result<PointSet> {
    if !points.contains(&apex) {
        return Err(Error::ApexNotInSet);
    }
    Ok(cover_of(points, lines, apex))
}

fn cover_of(points: &PointSet, lines: &LineSet, apex: AffinePoint) -> PointSet {
    let ctx = *points.ctx();
    points.filter(|&q| q != apex && lines.contains(&line_through(&ctx, apex, q).expect("distinct")))
}

fn cover_size(points: &PointSet, lines: &LineSet, apex: AffinePoint) -> usize {
    let ctx = points.ctx();
    points
        .iter()
        .filter(|&&q| q != apex && lines.contains(&line_through(ctx, apex, q).expect("distinct")))
        .count()
}

/// Result of running the covering-set lemma on a degree-regular instance.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverBase {
    pub base: PointSet,
    /// The popular lines the base was re-refined against.
    pub popular_lines: LineSet,
    /// `min_{p in base} |P_p|`.
    pub threshold: usize,
    /// `threshold * |L| / (K^2 |P|)`.
    pub ratio: f64,
}

/// Popular lines, then points popular among those lines; reports the
/// smallest covering set over the surviving points.
pub fn find_popular_cover_base(points: &PointSet, lines: &LineSet, k: u64) -> Result<CoverBase> {
    let popular_lines = refine_popular_lines(points, lines)?;
    let base = refine_popular_points(points, &popular_lines)?;
    let threshold = base.iter().map(|&p| cover_size(points, lines, p)).min().unwrap_or(0);
    let ratio = threshold as f64 * lines.len() as f64
        / ((k as f64) * (k as f64) * points.len() as f64);
    Ok(CoverBase { base, popular_lines, threshold, ratio })
}

/// Two apexes and a point set that is good with respect to both.
#[derive(Clone, Debug, PartialEq)]
pub struct QConfig {
    pub p1: AffinePoint,
    pub p2: AffinePoint,
    pub q: PointSet,
    pub cert1: GoodnessCertificate,
    pub cert2: GoodnessCertificate,
    /// Both certificates use only lines of `L`.
    pub lines_in_l: bool,
    pub cover_base: CoverBase,
    /// `|P_{p1}|`.
    pub p1_cover: usize,
    /// `|Q| |L|^2 / (K^4 |P|)`.
    pub size_ratio: f64,
}

/// Picks `p1` with the largest covering set, then `p2 in P_{p1}` maximising
/// `|P_{p1} ∩ P_{p2}|`, and returns that intersection as `Q`.
pub fn find_q_config(points: &PointSet, lines: &LineSet, k: u64) -> Result<QConfig> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let mut best: Option<(AffinePoint, usize)> = None;
    for &p in points {
        let s = cover_size(points, lines, p);
        if best.is_none_or(|(_, bs)| s > bs) {
            best = Some((p, s));
        }
    }
    let (p1, p1_cover) = best.expect("nonempty");
    if p1_cover < 2 {
        return Err(Error::NoCandidate);
    }
    let cover_base = find_popular_cover_base(points, lines, k)?;
    let cover1 = cover_of(points, lines, p1);
    let mut best2: Option<(AffinePoint, usize)> = None;
    for &p2 in &cover1 {
        let s = cover_size(&cover1, lines, p2);
        if best2.is_none_or(|(_, bs)| s > bs) {
            best2 = Some((p2, s));
        }
    }
    let (p2, _) = best2.expect("cover of p1 has at least two points");
    // (P_{p1})_{p2} = P_{p1} ∩ P_{p2}
    let q = cover_of(&cover1, lines, p2);
    let cert1 = is_k_good(&q, p1)?;
    let cert2 = is_k_good(&q, p2)?;
    let lines_in_l = cert1.lines_within(lines) && cert2.lines_within(lines);
    let kf = k as f64;
    let size_ratio = q.len() as f64 * powi(lines.len() as f64, 2)
        / (powi(kf, 4) * points.len() as f64);
    Ok(QConfig { p1, p2, q, cert1, cert2, lines_in_l, cover_base, p1_cover, size_ratio })
}

/// The two sums compared in the Cauchy-Schwarz step of the second search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CauchySchwarzSplit {
    /// `sum_{p in Q ∩ l*} |Q_p|`.
    pub diagonal: u64,
    /// `sum_{p3 != p4 in Q ∩ l*} |Q_{p3} ∩ Q_{p4}|` over ordered pairs.
    pub off_diagonal: u64,
    /// `|Q|`.
    pub q_size: u64,
}

impl CauchySchwarzSplit {
    pub fn off_diagonal_dominates(&self) -> bool {
        self.off_diagonal >= self.diagonal
    }

    /// `(sum |Q_p|)^2 <= |Q| * (diagonal + off_diagonal)`, exactly.
    pub fn inequality_holds(&self) -> bool {
        let lhs = self.diagonal as u128 * self.diagonal as u128;
        lhs <= self.q_size as u128 * (self.diagonal as u128 + self.off_diagonal as u128)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RConfig {
    pub q: QConfig,
    pub p3: AffinePoint,
    pub p4: AffinePoint,
    pub l_star: AffLine,
    pub r: PointSet,
    pub cert3: GoodnessCertificate,
    pub cert4: GoodnessCertificate,
    /// `|Q_1|` after re-running the covering lemma on `Q`.
    pub q1_size: usize,
    /// Supporting lines of `Q_1` through `p2`.
    pub j_size: usize,
    /// Popular supporting lines.
    pub j1_size: usize,
    /// Largest number of `Q` points on one supporting line through `p1` or `p2`.
    pub max_supporting_load: u64,
    /// Whether that load is at most `|P| / K`.
    pub per_line_cap_ok: bool,
    /// `|Q ∩ l*|`.
    pub q_on_l_star: usize,
    pub split: CauchySchwarzSplit,
    /// `|R| |L|^4 / (K^8 |P|)`.
    pub size_ratio: f64,
    /// Points of the original `R` removed because they lie on `l*`.
    pub stripped: usize,
}

impl RConfig {
    /// The structural invariants of the configuration, checked exactly.
    pub fn structure_holds(&self, lines: &LineSet) -> bool {
        let ctx = self.r.ctx();
        let l = &self.l_star;
        lines.contains(l)
            && l.contains(ctx, self.q.p2)
            && l.contains(ctx, self.p3)
            && l.contains(ctx, self.p4)
            && !l.contains(ctx, self.q.p1)
            && self.p3 != self.p4
            && self.q.p1 != self.q.p2
            && self.cert3.validate()
            && self.cert4.validate()
    }

    /// Removes `R ∩ l*` and recomputes the two certificates.
    pub fn without_special_line(&self) -> Result<RConfig> {
        let ctx = *self.r.ctx();
        let l = self.l_star;
        let r = self.r.filter(|x| !l.contains(&ctx, *x));
        let mut out = self.clone();
        out.stripped = self.stripped + (self.r.len() - r.len());
        out.cert3 = is_k_good(&r, self.p3)?;
        out.cert4 = is_k_good(&r, self.p4)?;
        out.r = r;
        Ok(out)
    }
}

/// Second configuration search: a line `l*` through `p2` avoiding `p1`, two
/// points `p3, p4` of `Q` on it, and `R = Q_{p3} ∩ Q_{p4}`.
pub fn find_r_config(q: &QConfig, points: &PointSet, lines: &LineSet, k: u64) -> Result<RConfig> {
    let qs = &q.q;
    let ctx = *qs.ctx();
    if qs.is_empty() {
        return Err(Error::NoValidLine);
    }
    let q1 = find_popular_cover_base(qs, lines, k)?.base;
    let j = LineSet::new(ctx, q1.iter().map(|&x| line_through(&ctx, q.p2, x).expect("p2 not in Q")));
    let j1 = refine_popular_lines(&q1, &j)?;

    let max_supporting_load = q
        .cert1
        .line_loads
        .iter()
        .chain(&q.cert2.line_loads)
        .copied()
        .max()
        .unwrap_or(0);
    let per_line_cap_ok = max_supporting_load as u128 * k as u128 <= points.len() as u128;

    let mut best: Option<(AffLine, usize)> = None;
    for l in j1.iter().filter(|l| !l.contains(&ctx, q.p1)) {
        let load = qs.iter().filter(|x| l.contains(&ctx, **x)).count();
        if best.is_none_or(|(_, b)| load > b) {
            best = Some((*l, load));
        }
    }
    let (l_star, q_on_l_star) = best.ok_or(Error::NoValidLine)?;
    if q_on_l_star < 2 {
        return Err(Error::EmptyR);
    }
    let on_line = qs.on_line(&l_star);
    let covers: Vec<PointSet> = on_line.iter().map(|&x| cover_of(qs, lines, x)).collect();

    let diagonal: u64 = covers.iter().map(|c| c.len() as u64).sum();
    let mut off_diagonal = 0u64;
    let mut best_pair: Option<(usize, usize, usize)> = None;
    for i in 0..covers.len() {
        for jx in i + 1..covers.len() {
            let common = covers[i].iter().filter(|x| covers[jx].contains(x)).count();
            off_diagonal += 2 * common as u64;
            if best_pair.is_none_or(|(_, _, b)| common > b) {
                best_pair = Some((i, jx, common));
            }
        }
    }
    let (i3, i4, common) = best_pair.expect("at least two points on l*");
    if common == 0 {
        return Err(Error::EmptyR);
    }
    let p3 = on_line.as_slice()[i3];
    let p4 = on_line.as_slice()[i4];
    let r = covers[i3].intersection(&covers[i4]);
    let cert3 = is_k_good(&r, p3)?;
    let cert4 = is_k_good(&r, p4)?;
    let kf = k as f64;
    let size_ratio =
        r.len() as f64 * powi(lines.len() as f64, 4) / (powi(kf, 8) * points.len() as f64);
    Ok(RConfig {
        q: q.clone(),
        p3,
        p4,
        l_star,
        r,
        cert3,
        cert4,
        q1_size: q1.len(),
        j_size: j.len(),
        j1_size: j1.len(),
        max_supporting_load,
        per_line_cap_ok,
        q_on_l_star,
        split: CauchySchwarzSplit { diagonal, off_diagonal, q_size: qs.len() as u64 },
        size_ratio,
        stripped: 0,
    })
}
