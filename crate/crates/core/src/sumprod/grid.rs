use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Fe, PlaneContext};

/// Sorts and deduplicates a collection of field elements.
pub fn fe_set(items: impl IntoIterator<Item = Fe>) -> Vec<Fe> {
    let mut v: Vec<Fe> = items.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// The four operations partial sets are formed with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

impl Op {
    pub const ALL: [Op; 4] = [Op::Add, Op::Sub, Op::Mul, Op::Div];

    /// `x op y`, or `None` for division by zero.
    pub fn apply(self, ctx: &PlaneContext, x: Fe, y: Fe) -> Option<Fe> {
        match self {
            Op::Add => Some(ctx.add(x, y)),
            Op::Sub => Some(ctx.sub(x, y)),
            Op::Mul => Some(ctx.mul(x, y)),
            Op::Div => ctx.div(x, y).ok(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Op::Add => '+',
            Op::Sub => '-',
            Op::Mul => '*',
            Op::Div => '/',
        }
    }
}

/// `{ a op b : (a, b) in edges }`; division by zero on any edge is an error
/// naming every offending edge.
pub fn partial_over(ctx: &PlaneContext, edges: &[(Fe, Fe)], op: Op) -> Result<Vec<Fe>> {
    let bad: Vec<(u64, u64)> = match op {
        Op::Div => edges.iter().filter(|e| e.1.is_zero()).map(|e| (e.0.value(), e.1.value())).collect(),
        _ => Vec::new(),
    };
    if !bad.is_empty() {
        return Err(Error::DivisionByZero(bad));
    }
    Ok(fe_set(edges.iter().filter_map(|&(a, b)| op.apply(ctx, a, b))))
}

/// Like [`partial_over`] but skipping edges where the operation is
/// undefined; returns the set and the number of skipped edges.
pub fn partial_defined(ctx: &PlaneContext, edges: &[(Fe, Fe)], op: Op) -> (Vec<Fe>, usize) {
    let mut skipped = 0;
    let set = fe_set(edges.iter().filter_map(|&(a, b)| {
        let v = op.apply(ctx, a, b);
        skipped += v.is_none() as usize;
        v
    }));
    (set, skipped)
}

/// The full set `A op B`.
pub fn full_set(ctx: &PlaneContext, a: &[Fe], b: &[Fe], op: Op) -> Vec<Fe> {
    fe_set(a.iter().flat_map(|&x| b.iter().filter_map(move |&y| op.apply(ctx, x, y))))
}

/// `A - A`.
pub fn difference_set(ctx: &PlaneContext, a: &[Fe]) -> Vec<Fe> {
    full_set(ctx, a, a, Op::Sub)
}

/// A bipartite graph `G ⊆ A × B` between two sets of field elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridInstance {
    ctx: PlaneContext,
    a: Vec<Fe>,
    b: Vec<Fe>,
    edges: Vec<(Fe, Fe)>,
    /// `N(a)` for each `a`, parallel to `a`, sorted.
    neighbors: Vec<Vec<Fe>>,
    lambda: Option<Fe>,
}

impl GridInstance {
    /// Vertex sets are deduplicated; every edge endpoint must be a vertex and
    /// no edge may repeat.
    pub fn new(
        ctx: PlaneContext,
        a: impl IntoIterator<Item = Fe>,
        b: impl IntoIterator<Item = Fe>,
        edges: impl IntoIterator<Item = (Fe, Fe)>,
    ) -> Result<Self> {
        let a = fe_set(a);
        let b = fe_set(b);
        let mut edges: Vec<(Fe, Fe)> = edges.into_iter().collect();
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0.value(), w[0].1.value()));
        }
        let mut neighbors = alloc::vec![Vec::new(); a.len()];
        for &(x, y) in &edges {
            let i = a.binary_search(&x).map_err(|_| Error::EdgeOutOfRange(x.value(), y.value()))?;
            b.binary_search(&y).map_err(|_| Error::EdgeOutOfRange(x.value(), y.value()))?;
            neighbors[i].push(y);
        }
        Ok(GridInstance { ctx, a, b, edges, neighbors, lambda: None })
    }

    /// The complete graph `A × B`.
    pub fn complete(ctx: PlaneContext, a: &[Fe], b: &[Fe]) -> Self {
        let a = fe_set(a.iter().copied());
        let b = fe_set(b.iter().copied());
        let edges: Vec<(Fe, Fe)> = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect();
        Self::new(ctx, a, b, edges).expect("complete grid is well formed")
    }

    /// Convenience constructor from raw integers.
    pub fn from_u64(ctx: PlaneContext, a: &[u64], b: &[u64], edges: &[(u64, u64)]) -> Result<Self> {
        Self::new(
            ctx,
            a.iter().map(|&v| ctx.elem(v)),
            b.iter().map(|&v| ctx.elem(v)),
            edges.iter().map(|&(x, y)| (ctx.elem(x), ctx.elem(y))),
        )
    }

    pub fn with_lambda(mut self, lambda: Fe) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn ctx(&self) -> &PlaneContext {
        &self.ctx
    }

    pub fn a(&self) -> &[Fe] {
        &self.a
    }

    pub fn b(&self) -> &[Fe] {
        &self.b
    }

    pub fn edges(&self) -> &[(Fe, Fe)] {
        &self.edges
    }

    pub fn lambda(&self) -> Option<Fe> {
        self.lambda
    }

    /// `N(a)`; empty for elements outside `A`.
    pub fn neighbors(&self, a: Fe) -> &[Fe] {
        match self.a.binary_search(&a) {
            Ok(i) => &self.neighbors[i],
            Err(_) => &[],
        }
    }

    pub fn degree(&self, a: Fe) -> usize {
        self.neighbors(a).len()
    }

    /// `|N(a1) ∩ N(a2)|`.
    pub fn codegree(&self, a1: Fe, a2: Fe) -> usize {
        sorted_intersection_len(self.neighbors(a1), self.neighbors(a2))
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.a.len() * self.b.len()
    }
}

pub(crate) fn sorted_intersection_len(x: &[Fe], y: &[Fe]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// `A op_G B`.
pub fn partial_set(g: &GridInstance, op: Op) -> Result<Vec<Fe>> {
    partial_over(g.ctx(), g.edges(), op)
}
