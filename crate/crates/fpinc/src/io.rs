//! Instance files.
//!
//! * points: CSV with header `x,y`
//! * lines: CSV with header `a,b,c` for `ax + by = c`, stored canonically
//! * grids: JSON `{"p": 5, "A": [..], "B": [..], "G": [[a, b], ..], "lambda": null}`
//!
//! Coordinates must already be reduced modulo `p`; repeated points, lines
//! or edges are rejected rather than merged.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use fpinc_core::sumprod::GridInstance;
use fpinc_core::{AffLine, AffinePoint, LineSet, PlaneContext, PointSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_reduced(path: &Path, ctx: &PlaneContext, row: usize, vals: &[u64]) -> Result<()> {
    if let Some(v) = vals.iter().find(|&&v| v >= ctx.modulus()) {
        return Err(Error::format(path, format!("row {row}: value {v} is not reduced mod {}", ctx.modulus())));
    }
    Ok(())
}

fn read_rows<const N: usize>(path: &Path, reader: impl Read, header: [&str; N]) -> Result<Vec<[u64; N]>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let got = rdr.headers().map_err(|e| Error::format(path, e))?.clone();
    if got.iter().collect::<Vec<_>>() != header {
        return Err(Error::format(path, format!("expected header {}", header.join(","))));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.deserialize::<Vec<u64>>().enumerate() {
        let rec = rec.map_err(|e| Error::format(path, e))?;
        let row: [u64; N] = rec
            .try_into()
            .map_err(|_| Error::format(path, format!("row {}: expected {N} fields", i + 1)))?;
        rows.push(row);
    }
    Ok(rows)
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

pub fn parse_points(path: &Path, ctx: PlaneContext, reader: impl Read) -> Result<PointSet> {
    let mut seen = BTreeSet::new();
    for (i, [x, y]) in read_rows(path, reader, ["x", "y"])?.into_iter().enumerate() {
        check_reduced(path, &ctx, i + 1, &[x, y])?;
        if !seen.insert(AffinePoint::from_u64(&ctx, x, y)) {
            return Err(Error::format(path, format!("row {}: duplicate point ({x}, {y})", i + 1)));
        }
    }
    Ok(PointSet::new(ctx, seen))
}

pub fn parse_lines(path: &Path, ctx: PlaneContext, reader: impl Read) -> Result<LineSet> {
    let mut seen = BTreeSet::new();
    for (i, [a, b, c]) in read_rows(path, reader, ["a", "b", "c"])?.into_iter().enumerate() {
        check_reduced(path, &ctx, i + 1, &[a, b, c])?;
        let l = AffLine::new(&ctx, ctx.elem(a), ctx.elem(b), ctx.elem(c))
            .map_err(|e| Error::format(path, format!("row {}: {e}", i + 1)))?;
        if !seen.insert(l) {
            return Err(Error::format(path, format!("row {}: duplicate line {l}", i + 1)));
        }
    }
    Ok(LineSet::new(ctx, seen))
}

pub fn read_points(path: &Path, ctx: PlaneContext) -> Result<PointSet> {
    parse_points(path, ctx, open(path)?)
}

pub fn read_lines(path: &Path, ctx: PlaneContext) -> Result<LineSet> {
    parse_lines(path, ctx, open(path)?)
}

pub fn write_points(out: impl Write, points: &PointSet) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y"])?;
    for q in points {
        w.serialize((q.x.value(), q.y.value()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_lines(out: impl Write, lines: &LineSet) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["a", "b", "c"])?;
    for l in lines {
        w.serialize(l.coeffs())?;
    }
    w.flush()?;
    Ok(())
}

/// The on-disk shape of a grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridFile {
    pub p: u64,
    #[serde(rename = "A")]
    pub a: Vec<u64>,
    #[serde(rename = "B")]
    pub b: Vec<u64>,
    #[serde(rename = "G")]
    pub g: Vec<(u64, u64)>,
    #[serde(default)]
    pub lambda: Option<u64>,
}

impl GridFile {
    pub fn from_grid(g: &GridInstance) -> Self {
        GridFile {
            p: g.ctx().modulus(),
            a: g.a().iter().map(|x| x.value()).collect(),
            b: g.b().iter().map(|x| x.value()).collect(),
            g: g.edges().iter().map(|&(x, y)| (x.value(), y.value())).collect(),
            lambda: g.lambda().map(|x| x.value()),
        }
    }

    pub fn into_grid(self, path: &Path) -> Result<GridInstance> {
        let ctx = PlaneContext::new(self.p)?;
        let all = self.a.iter().chain(&self.b).copied().chain(self.lambda);
        check_reduced(path, &ctx, 0, &all.collect::<Vec<_>>())?;
        for (name, set) in [("A", &self.a), ("B", &self.b)] {
            if set.iter().collect::<BTreeSet<_>>().len() != set.len() {
                return Err(Error::format(path, format!("{name} has repeated elements")));
            }
        }
        let g = GridInstance::from_u64(ctx, &self.a, &self.b, &self.g)?;
        Ok(match self.lambda {
            Some(l) => g.with_lambda(ctx.elem(l)),
            None => g,
        })
    }
}

pub fn read_grid(path: &Path) -> Result<GridInstance> {
    let file: GridFile = serde_json::from_reader(open(path)?).map_err(|e| Error::format(path, e))?;
    file.into_grid(path)
}

pub fn write_grid(out: impl Write, g: &GridInstance) -> serde_json::Result<()> {
    serde_json::to_writer(out, &GridFile::from_grid(g))
}
