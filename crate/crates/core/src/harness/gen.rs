use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Fe, PlaneContext};
use crate::incidence::{LineSet, PointSet};
use crate::plane::{AffLine, AffinePoint};
use crate::sumprod::GridInstance;

/// Instance families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `n` distinct uniform points.
    Random,
    /// `A × A` for `A = {0, .., n-1}` or an explicit base set.
    Grid,
    /// `A × A` for a random arithmetic progression `A` of length `n`.
    Ap,
    /// `A × A` for `A = {1, g, .., g^(n-1)}`, `g` the least primitive root.
    Gp,
    /// `n` points spread over a few random lines, which form the line set.
    UnionOfLines,
    /// All but about a tenth of `n` points on one random line.
    NearCollinear,
    /// Every point and every line of the plane.
    FullPlane,
    /// `n` points on one random line, which is the line set.
    Collinear,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Random,
        Family::Grid,
        Family::Ap,
        Family::Gp,
        Family::UnionOfLines,
        Family::NearCollinear,
        Family::FullPlane,
        Family::Collinear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::Grid => "grid",
            Family::Ap => "ap",
            Family::Gp => "gp",
            Family::UnionOfLines => "union-of-lines",
            Family::NearCollinear => "near-collinear",
            Family::FullPlane => "full-plane",
            Family::Collinear => "collinear",
        }
    }

    /// Families whose points are a product `A × A`.
    pub fn is_product(self) -> bool {
        matches!(self, Family::Grid | Family::Ap | Family::Gp)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidSpec(alloc::format!("unknown family {s:?}")))
    }
}

/// Everything that determines a generated instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub p: u64,
    /// Number of points, or `|A|` for product families.
    pub n: usize,
    /// Number of lines: random lines for families without their own, the
    /// number of carrier lines for `union-of-lines`.
    pub lines: Option<usize>,
    pub seed: u64,
    /// Explicit base set for the grid family.
    pub base: Option<Vec<u64>>,
}

impl GeneratorSpec {
    pub fn new(family: Family, p: u64, n: usize, seed: u64) -> Self {
        GeneratorSpec { family, p, n, lines: None, seed, base: None }
    }

    pub fn with_lines(mut self, m: usize) -> Self {
        self.lines = Some(m);
        self
    }

    pub fn with_base(mut self, base: Vec<u64>) -> Self {
        self.base = Some(base);
        self
    }
}

/// A generated point set, with a line set when the family defines one (or
/// random lines were requested), and the base set of product families.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub points: PointSet,
    pub lines: Option<LineSet>,
    pub base: Option<Vec<Fe>>,
}

fn oversize(requested: usize, available: u128) -> Error {
    Error::Oversize { requested: requested as u64, available: available.min(u64::MAX as u128) as u64 }
}

fn point_at(ctx: &PlaneContext, idx: u128) -> AffinePoint {
    let p = ctx.modulus() as u128;
    AffinePoint::new(ctx.elem((idx / p) as u64), ctx.elem((idx % p) as u64))
}

/// The `idx`-th line in canonical order: `(1, b, c)` then `(0, 1, c)`.
fn line_at(ctx: &PlaneContext, idx: u128) -> AffLine {
    let p = ctx.modulus() as u128;
    let (a, b, c) = if idx < p * p { (1, idx / p, idx % p) } else { (0, 1, idx - p * p) };
    AffLine::new(ctx, ctx.elem(a), ctx.elem(b as u64), ctx.elem(c as u64)).expect("canonical line")
}

/// `n` distinct indices below `total`.
fn distinct_indices(rng: &mut ChaCha8Rng, n: usize, total: u128) -> Result<Vec<u128>> {
    if n as u128 > total {
        return Err(oversize(n, total));
    }
    if 2 * n as u128 > total {
        let mut all: Vec<u128> = (0..total).collect();
        all.shuffle(rng);
        all.truncate(n);
        return Ok(all);
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let i = rng.random_range(0..total);
        if seen.insert(i) {
            out.push(i);
        }
    }
    Ok(out)
}

fn random_lines(ctx: &PlaneContext, rng: &mut ChaCha8Rng, m: usize) -> Result<Vec<AffLine>> {
    let p = ctx.modulus() as u128;
    Ok(distinct_indices(rng, m, p * p + p)?.into_iter().map(|i| line_at(ctx, i)).collect())
}

fn nth_point_on(ctx: &PlaneContext, l: &AffLine, t: u64) -> AffinePoint {
    // `ax + by = c`: parametrise by y when b = 0 (then a = 1), by x otherwise.
    if l.b().is_zero() {
        AffinePoint::new(l.c(), ctx.elem(t))
    } else {
        let x = ctx.elem(t);
        let y = ctx.div(ctx.sub(l.c(), ctx.mul(l.a(), x)), l.b()).expect("b nonzero");
        AffinePoint::new(x, y)
    }
}

/// The one-dimensional base set of a product family.
pub fn generate_set(spec: &GeneratorSpec) -> Result<Vec<Fe>> {
    let ctx = PlaneContext::new(spec.p)?;
    let p = spec.p;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut set: Vec<Fe> = match spec.family {
        Family::Grid => match &spec.base {
            Some(b) => b.iter().map(|&v| ctx.elem(v)).collect(),
            None => {
                if n as u64 > p {
                    return Err(oversize(n, p as u128));
                }
                (0..n as u64).map(|v| ctx.elem(v)).collect()
            }
        },
        Family::Ap => {
            if n as u64 > p {
                return Err(oversize(n, p as u128));
            }
            let start = ctx.elem(rng.random_range(0..p));
            let step = ctx.elem(rng.random_range(1..p));
            (0..n as u64).map(|i| ctx.add(start, ctx.mul(step, ctx.elem(i)))).collect()
        }
        Family::Gp => {
            if n as u64 > p - 1 {
                return Err(oversize(n, (p - 1) as u128));
            }
            let g = ctx.primitive_root();
            (0..n as u64).map(|i| ctx.pow(g, i)).collect()
        }
        Family::Random => {
            distinct_indices(&mut rng, n, p as u128)?.into_iter().map(|i| ctx.elem(i as u64)).collect()
        }
        f => return Err(Error::InvalidSpec(alloc::format!("family {f} has no base set"))),
    };
    set.sort_unstable();
    set.dedup();
    Ok(set)
}

/// Builds the instance a spec describes. The seed fully determines it.
pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    let ctx = if spec.family == Family::FullPlane {
        PlaneContext::new_allow_two(spec.p)?
    } else {
        PlaneContext::new(spec.p)?
    };
    let p = spec.p as u128;
    let n = spec.n;
    // Product families draw their base set from the seed; everything else
    // gets a separate stream so base and extras are independent.
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut base = None;
    let (points, own_lines): (Vec<AffinePoint>, Option<Vec<AffLine>>) = match spec.family {
        Family::Grid | Family::Ap | Family::Gp => {
            let a = generate_set(spec)?;
            let pts = a.iter().flat_map(|&x| a.iter().map(move |&y| AffinePoint::new(x, y))).collect();
            base = Some(a);
            (pts, None)
        }
        Family::Random => {
            (distinct_indices(&mut rng, n, p * p)?.into_iter().map(|i| point_at(&ctx, i)).collect(), None)
        }
        Family::FullPlane => (PointSet::full_plane(ctx).as_slice().to_vec(), Some(AffLine::all(&ctx).collect())),
        Family::Collinear => {
            let l = random_lines(&ctx, &mut rng, 1)?[0];
            let ts = distinct_indices(&mut rng, n, p)?;
            (ts.into_iter().map(|t| nth_point_on(&ctx, &l, t as u64)).collect(), Some(alloc::vec![l]))
        }
        Family::NearCollinear => {
            let l = random_lines(&ctx, &mut rng, 1)?[0];
            let off = (n / 10).max(1).min(n);
            let on = n - off;
            let mut pts: Vec<AffinePoint> =
                distinct_indices(&mut rng, on, p)?.into_iter().map(|t| nth_point_on(&ctx, &l, t as u64)).collect();
            if (off as u128) > p * p - p {
                return Err(oversize(n, p * p));
            }
            let mut seen: BTreeSet<AffinePoint> = pts.iter().copied().collect();
            while pts.len() < n {
                let q = point_at(&ctx, rng.random_range(0..p * p));
                if !l.contains(&ctx, q) && seen.insert(q) {
                    pts.push(q);
                }
            }
            (pts, None)
        }
        Family::UnionOfLines => {
            let m = spec.lines.unwrap_or_else(|| (libm::sqrt(n as f64) as usize).max(1));
            let lines = random_lines(&ctx, &mut rng, m)?;
            let on_union = PointSet::new(ctx, lines.iter().flat_map(|l| l.points(&ctx)));
            let picks = distinct_indices(&mut rng, n, on_union.len() as u128)?;
            (picks.into_iter().map(|i| on_union.as_slice()[i as usize]).collect(), Some(lines))
        }
    };
    let lines = match (own_lines, spec.lines) {
        (Some(l), _) => Some(LineSet::new(ctx, l)),
        (None, Some(m)) => Some(LineSet::new(ctx, random_lines(&ctx, &mut rng, m)?)),
        (None, None) => None,
    };
    Ok(Instance { points: PointSet::new(ctx, points), lines, base })
}

/// `A × A` with `removed` uniformly chosen edges deleted.
pub fn dense_random_grid(ctx: PlaneContext, a: &[Fe], removed: usize, seed: u64) -> Result<GridInstance> {
    let a = crate::sumprod::fe_set(a.iter().copied());
    let total = (a.len() * a.len()) as u128;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drop: BTreeSet<u128> = distinct_indices(&mut rng, removed, total)?.into_iter().collect();
    let n = a.len();
    let edges = (0..total).filter(|i| !drop.contains(i)).map(|i| (a[i as usize / n], a[i as usize % n]));
    GridInstance::new(ctx, a.iter().copied(), a.iter().copied(), edges)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one sweep instance: a SplitMix64 chain over the master seed, an
/// FNV-1a hash of the family name, the size and the index.
pub fn instance_seed(master: u64, family: Family, size: u64, index: u64) -> u64 {
    let fam = family.name().bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    });
    [fam, size, index].into_iter().fold(splitmix64(master), |h, x| splitmix64(h ^ x))
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(p={}, n={}, seed={})", self.family, self.p, self.n, self.seed)
    }
}
