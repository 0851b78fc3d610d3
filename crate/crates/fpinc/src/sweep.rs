//! Seeded experiment sweeps.
//!
//! Every instance gets its own seed from `(master seed, family, size,
//! index)`, so a record depends only on its key and never on scheduling.
//! Records are sorted by key before they are returned.

use std::time::Instant;

use fpinc_core::harness::{
    dense_random_grid, generate, generate_set, instance_seed, run_beck_pipeline, run_incidence_pipeline, Family,
    GeneratorSpec,
};
use fpinc_core::incidence::lines_determined;
use fpinc_core::sumprod::{check_partial_sumprod, check_rudnev, half_bsg, Eps, GridInstance};
use fpinc_core::{Fe, LineSet, PlaneContext, PointSet};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::record::{ExperimentRecord, RatioEntry};

/// What each sweep instance runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CheckKind {
    /// Incidence-bound proof skeleton on `(P, L)`.
    Pipeline,
    /// Beck-type proof skeleton on `P`.
    Beck,
    /// Energy ratio and partial sum-product ratio of the base set.
    Rudnev,
    /// The refinement chain on a dense random subgraph of `A × A`.
    Bsg,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Pipeline => "pipeline",
            CheckKind::Beck => "beck",
            CheckKind::Rudnev => "rudnev",
            CheckKind::Bsg => "bsg",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub family: Family,
    pub p: u64,
    pub sizes: Vec<usize>,
    /// Instances per size.
    pub seeds: u64,
    pub master_seed: u64,
    pub check: CheckKind,
    pub eps: Eps,
    pub lines: Option<usize>,
    pub timing: bool,
}

/// `L` from the instance when it has one, otherwise `L(P)`.
pub fn lines_for(points: &PointSet, lines: Option<LineSet>) -> LineSet {
    lines.unwrap_or_else(|| lines_determined(points).unwrap_or_else(|_| LineSet::empty(*points.ctx())))
}

/// The one-dimensional set a sum-product check runs on.
pub fn base_set(spec: &GeneratorSpec) -> fpinc_core::Result<Vec<Fe>> {
    match spec.family {
        f if f.is_product() || f == Family::Random => generate_set(spec),
        f => Err(fpinc_core::Error::InvalidSpec(format!("family {f} has no base set"))),
    }
}

fn fill(rec: &mut ExperimentRecord, cfg: &SweepConfig, spec: &GeneratorSpec) -> fpinc_core::Result<()> {
    match cfg.check {
        CheckKind::Pipeline => {
            let inst = generate(spec)?;
            let lines = lines_for(&inst.points, inst.lines);
            rec.add_trace(&run_incidence_pipeline(&inst.points, &lines)?);
        }
        CheckKind::Beck => {
            let inst = generate(spec)?;
            rec.add_trace(&run_beck_pipeline(&inst.points)?);
        }
        CheckKind::Rudnev => {
            let ctx = PlaneContext::new(spec.p)?;
            let a = base_set(spec)?;
            rec.add_rudnev(&check_rudnev(&ctx, &a)?);
            let e = rec.energy.unwrap_or(0);
            let n = a.len() as u128;
            if !a.iter().any(|x| x.is_zero()) && !(n * n <= e && e <= n * n * n) {
                rec.warnings.push(format!("energy {e} outside [|A|^2, |A|^3]"));
            }
            rec.add_partial_sumprod(&check_partial_sumprod(&GridInstance::complete(ctx, &a, &a))?);
        }
        CheckKind::Bsg => {
            let ctx = PlaneContext::new(spec.p)?;
            let a = base_set(spec)?;
            let removed = (cfg.eps.num() as u128 * (a.len() * a.len()) as u128 / cfg.eps.den() as u128) as usize;
            let g = dense_random_grid(ctx, &a, removed, spec.seed)?;
            let h = half_bsg(&g, cfg.eps)?;
            rec.energy = Some(h.energy.energy);
            rec.ratios.push(RatioEntry::exact(
                "bsg_diff_ceiling",
                "|A''-A''| << |A -_G B|^4 |A|^4 |B|^3 / |G|^5",
                &h.ceiling_ratio,
            ));
            rec.ratios.push(RatioEntry::exact(
                "bsg_energy_floor",
                "E_x(A'') >> |G|^6 / (|B|^5 |A|^2 |A /_G B|^2)",
                &h.floor_ratio,
            ));
        }
    }
    Ok(())
}

/// Runs a single instance; errors are captured in the record.
pub fn run_one(cfg: &SweepConfig, size: usize, index: u64) -> ExperimentRecord {
    let seed = instance_seed(cfg.master_seed, cfg.family, size as u64, index);
    let mut spec = GeneratorSpec::new(cfg.family, cfg.p, size, seed);
    spec.lines = cfg.lines;
    let mut rec = ExperimentRecord::new(cfg.check.name(), &spec, index);
    let start = Instant::now();
    if let Err(e) = fill(&mut rec, cfg, &spec) {
        let tag = if e.is_internal() { "internal: " } else { "" };
        rec.error = Some(format!("{tag}{e}"));
    }
    if cfg.timing {
        rec.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    rec
}

/// Runs every `(size, index)` on `jobs` threads (0 picks the default).
pub fn sweep(cfg: &SweepConfig, jobs: usize) -> Result<Vec<ExperimentRecord>> {
    let keys: Vec<(usize, u64)> =
        cfg.sizes.iter().flat_map(|&s| (0..cfg.seeds).map(move |i| (s, i))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Usage(format!("thread pool: {e}")))?;
    let mut out: Vec<ExperimentRecord> =
        pool.install(|| keys.par_iter().map(|&(s, i)| run_one(cfg, s, i)).collect());
    out.sort_by_key(|r| r.key());
    Ok(out)
}
