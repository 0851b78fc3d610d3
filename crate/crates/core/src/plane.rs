//! Points, lines and projective transformations of the plane over `F_p`.
//!
//! Affine lines are stored as `a*x + b*y = c` scaled so the first nonzero of
//! `(a, b)` is 1, which gives exactly `p^2 + p` distinct keys. Projective
//! points are scaled so their last nonzero coordinate is 1, so an affine
//! point `(x, y)` lifts to `[x : y : 1]` unchanged.

use core::fmt;

use crate::error::{Error, Result};
use crate::field::{Fe, PlaneContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffinePoint {
    pub x: Fe,
    pub y: Fe,
}

impl AffinePoint {
    pub fn new(x: Fe, y: Fe) -> Self {
        AffinePoint { x, y }
    }

    /// Convenience constructor reducing raw integers mod `p`.
    pub fn from_u64(ctx: &PlaneContext, x: u64, y: u64) -> Self {
        AffinePoint { x: ctx.elem(x), y: ctx.elem(y) }
    }

    /// Homogeneous lift `[x : y : 1]`.
    pub fn lift(self) -> ProjPoint {
        ProjPoint([self.x, self.y, Fe::ONE])
    }
}

impl From<AffinePoint> for ProjPoint {
    fn from(p: AffinePoint) -> Self {
        p.lift()
    }
}

impl fmt::Display for AffinePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Canonical affine line `a*x + b*y = c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffLine {
    a: Fe,
    b: Fe,
    c: Fe,
}

impl AffLine {
    pub fn new(ctx: &PlaneContext, a: Fe, b: Fe, c: Fe) -> Result<Self> {
        let lead = if !a.is_zero() {
            a
        } else if !b.is_zero() {
            b
        } else {
            return Err(Error::DegenerateLine);
        };
        let s = ctx.inv(lead)?;
        Ok(AffLine { a: ctx.mul(a, s), b: ctx.mul(b, s), c: ctx.mul(c, s) })
    }

    pub fn from_i64(ctx: &PlaneContext, a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(ctx, ctx.elem_signed(a), ctx.elem_signed(b), ctx.elem_signed(c))
    }

    pub fn a(&self) -> Fe {
        self.a
    }

    pub fn b(&self) -> Fe {
        self.b
    }

    pub fn c(&self) -> Fe {
        self.c
    }

    pub fn coeffs(&self) -> [u64; 3] {
        [self.a.value(), self.b.value(), self.c.value()]
    }

    pub fn contains(&self, ctx: &PlaneContext, pt: AffinePoint) -> bool {
        ctx.add(ctx.mul(self.a, pt.x), ctx.mul(self.b, pt.y)) == self.c
    }

    /// Homogeneous coefficients `(a, b, -c)`.
    pub fn to_proj(&self, ctx: &PlaneContext) -> ProjLine {
        ProjLine([self.a, self.b, ctx.neg(self.c)])
    }

    /// Every point of the line, ordered by the free coordinate.
    pub fn points(&self, ctx: &PlaneContext) -> impl Iterator<Item = AffinePoint> + '_ {
        let ctx = *ctx;
        ctx.elements().map(move |t| {
            if self.a == Fe::ONE {
                // x = c - b*t, y = t
                AffinePoint::new(ctx.sub(self.c, ctx.mul(self.b, t)), t)
            } else {
                AffinePoint::new(t, self.c)
            }
        })
    }

    /// Enumerates all `p^2 + p` lines of the affine plane in canonical order.
    pub fn all(ctx: &PlaneContext) -> impl Iterator<Item = AffLine> {
        let ctx = *ctx;
        let horizontals = ctx.elements().map(|c| AffLine { a: Fe::ZERO, b: Fe::ONE, c });
        let rest = ctx.elements().flat_map(move |b| {
            ctx.elements().map(move |c| AffLine { a: Fe::ONE, b, c })
        });
        horizontals.chain(rest)
    }
}

impl fmt::Display for AffLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x + {}y = {}", self.a, self.b, self.c)
    }
}

/// The canonical line through two distinct points.
pub fn line_through(ctx: &PlaneContext, p: AffinePoint, q: AffinePoint) -> Result<AffLine> {
    if p == q {
        return Err(Error::DegeneratePair);
    }
    let dx = ctx.sub(q.x, p.x);
    let dy = ctx.sub(q.y, p.y);
    let a = dy;
    let b = ctx.neg(dx);
    let c = ctx.add(ctx.mul(a, p.x), ctx.mul(b, p.y));
    AffLine::new(ctx, a, b, c)
}

pub fn incident(ctx: &PlaneContext, point: AffinePoint, line: &AffLine) -> bool {
    line.contains(ctx, point)
}

fn scale_last_nonzero(ctx: &PlaneContext, v: [Fe; 3]) -> Result<[Fe; 3]> {
    let lead = v.iter().rev().copied().find(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
    let s = ctx.inv(lead)?;
    Ok([ctx.mul(v[0], s), ctx.mul(v[1], s), ctx.mul(v[2], s)])
}

fn scale_first_nonzero(ctx: &PlaneContext, v: [Fe; 3]) -> Result<[Fe; 3]> {
    let lead = v.iter().copied().find(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
    let s = ctx.inv(lead)?;
    Ok([ctx.mul(v[0], s), ctx.mul(v[1], s), ctx.mul(v[2], s)])
}

/// A point of the projective plane, last nonzero coordinate equal to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint([Fe; 3]);

impl ProjPoint {
    pub fn new(ctx: &PlaneContext, x: Fe, y: Fe, z: Fe) -> Result<Self> {
        scale_last_nonzero(ctx, [x, y, z]).map(ProjPoint)
    }

    pub fn from_u64(ctx: &PlaneContext, x: u64, y: u64, z: u64) -> Result<Self> {
        Self::new(ctx, ctx.elem(x), ctx.elem(y), ctx.elem(z))
    }

    pub fn coords(&self) -> [Fe; 3] {
        self.0
    }

    pub fn is_affine(&self) -> bool {
        !self.0[2].is_zero()
    }

    pub fn is_at_infinity(&self) -> bool {
        self.0[2].is_zero()
    }

    pub fn to_affine(&self) -> Option<AffinePoint> {
        self.is_affine().then(|| AffinePoint::new(self.0[0], self.0[1]))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}:{}]", self.0[0], self.0[1], self.0[2])
    }
}

/// A projective line `u*X + v*Y + w*Z = 0`, first nonzero coefficient 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjLine([Fe; 3]);

impl ProjLine {
    pub fn new(ctx: &PlaneContext, u: Fe, v: Fe, w: Fe) -> Result<Self> {
        scale_first_nonzero(ctx, [u, v, w]).map(ProjLine)
    }

    pub fn coeffs(&self) -> [Fe; 3] {
        self.0
    }

    pub fn contains(&self, ctx: &PlaneContext, pt: ProjPoint) -> bool {
        dot(ctx, self.0, pt.0).is_zero()
    }

    pub fn is_at_infinity(&self) -> bool {
        self.0[0].is_zero() && self.0[1].is_zero()
    }

    pub fn to_affine(&self, ctx: &PlaneContext) -> Option<AffLine> {
        if self.is_at_infinity() {
            return None;
        }
        AffLine::new(ctx, self.0[0], self.0[1], ctx.neg(self.0[2])).ok()
    }
}

fn dot(ctx: &PlaneContext, u: [Fe; 3], v: [Fe; 3]) -> Fe {
    let s = ctx.add(ctx.mul(u[0], v[0]), ctx.mul(u[1], v[1]));
    ctx.add(s, ctx.mul(u[2], v[2]))
}

/// A nonsingular 3x3 matrix acting on homogeneous coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProjMap {
    rows: [[Fe; 3]; 3],
}

impl ProjMap {
    pub fn new(ctx: &PlaneContext, rows: [[Fe; 3]; 3]) -> Result<Self> {
        let m = ProjMap { rows };
        if m.det(ctx).is_zero() {
            return Err(Error::Collinear);
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        let (o, z) = (Fe::ONE, Fe::ZERO);
        ProjMap { rows: [[o, z, z], [z, o, z], [z, z, o]] }
    }

    pub fn rows(&self) -> [[Fe; 3]; 3] {
        self.rows
    }

    pub fn det(&self, ctx: &PlaneContext) -> Fe {
        let m = &self.rows;
        let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
            ctx.sub(ctx.mul(m[r1][c1], m[r2][c2]), ctx.mul(m[r1][c2], m[r2][c1]))
        };
        let t0 = ctx.mul(m[0][0], minor(1, 2, 1, 2));
        let t1 = ctx.mul(m[0][1], minor(1, 2, 0, 2));
        let t2 = ctx.mul(m[0][2], minor(1, 2, 0, 1));
        ctx.add(ctx.sub(t0, t1), t2)
    }

    pub fn transpose(&self) -> Self {
        let m = &self.rows;
        let mut t = [[Fe::ZERO; 3]; 3];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = m[j][i];
            }
        }
        ProjMap { rows: t }
    }

    /// Inverse via the adjugate.
    pub fn inverse(&self, ctx: &PlaneContext) -> Result<Self> {
        let d = self.det(ctx);
        let dinv = ctx.inv(d).map_err(|_| Error::Collinear)?;
        let m = &self.rows;
        let mut inv = [[Fe::ZERO; 3]; 3];
        for (i, row) in inv.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                // cofactor of m[j][i]
                let (r1, r2) = others(j);
                let (c1, c2) = others(i);
                let minor =
                    ctx.sub(ctx.mul(m[r1][c1], m[r2][c2]), ctx.mul(m[r1][c2], m[r2][c1]));
                let cof = if (i + j) % 2 == 0 { minor } else { ctx.neg(minor) };
                *v = ctx.mul(cof, dinv);
            }
        }
        Ok(ProjMap { rows: inv })
    }

    pub fn compose(&self, ctx: &PlaneContext, other: &ProjMap) -> ProjMap {
        let mut out = [[Fe::ZERO; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let col = [other.rows[0][j], other.rows[1][j], other.rows[2][j]];
                *v = dot(ctx, self.rows[i], col);
            }
        }
        ProjMap { rows: out }
    }

    fn mul_vec(&self, ctx: &PlaneContext, v: [Fe; 3]) -> [Fe; 3] {
        [dot(ctx, self.rows[0], v), dot(ctx, self.rows[1], v), dot(ctx, self.rows[2], v)]
    }

    /// Image of a point. Nonsingularity guarantees a nonzero triple.
    pub fn apply(&self, ctx: &PlaneContext, pt: ProjPoint) -> ProjPoint {
        let v = self.mul_vec(ctx, pt.0);
        ProjPoint::new(ctx, v[0], v[1], v[2])
            .expect("nonsingular map sends nonzero vectors to nonzero vectors")
    }

    /// Image of a line, i.e. multiplication by the inverse transpose.
    pub fn apply_line(&self, ctx: &PlaneContext, line: ProjLine) -> ProjLine {
        let it = self.inverse(ctx).expect("nonsingular").transpose();
        let v = it.mul_vec(ctx, line.0);
        ProjLine::new(ctx, v[0], v[1], v[2]).expect("nonsingular")
    }
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

pub fn apply_map(ctx: &PlaneContext, m: &ProjMap, pt: ProjPoint) -> ProjPoint {
    m.apply(ctx, pt)
}

/// The projective map sending `first_dir` to `[1:0:0]`, `second_dir` to
/// `[0:1:0]` and `origin` to `[0:0:1]`.
///
/// It is the inverse of the matrix whose columns are the homogeneous lifts
/// of the three points, so the three must not be collinear.
pub fn build_tau(
    ctx: &PlaneContext,
    origin: ProjPoint,
    first_dir: ProjPoint,
    second_dir: ProjPoint,
) -> Result<ProjMap> {
    let (u, v, w) = (first_dir.0, second_dir.0, origin.0);
    let frame = ProjMap { rows: [[u[0], v[0], w[0]], [u[1], v[1], w[1]], [u[2], v[2], w[2]]] };
    if frame.det(ctx).is_zero() {
        return Err(Error::Collinear);
    }
    frame.inverse(ctx)
}
