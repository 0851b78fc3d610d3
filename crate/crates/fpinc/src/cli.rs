//! The `fpinc` command line.
//!
//! Output is JSON (one object, or JSON lines for multi-record commands)
//! unless `--pretty` is given. Exit codes: 0 success, 1 usage error, 2 bad
//! input data, 3 internal invariant violation.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fpinc_core::harness::{generate, run_beck_pipeline, run_incidence_pipeline, Family, GeneratorSpec, Instance};
use fpinc_core::incidence::{count_incidences_with, IncidenceAlgorithm};
use fpinc_core::sumprod::{
    check_partial_sumprod, half_bsg, mult_energy, partial_set, Eps, GridInstance, Op,
};
use fpinc_core::{LineSet, PlaneContext, PointSet};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io;
use crate::record::{write_jsonl, write_summary, ExperimentRecord, RatioEntry};
use crate::sweep::{base_set, lines_for, sweep, CheckKind, SweepConfig};

#[derive(Debug, Parser)]
#[command(name = "fpinc", version, about = "Point-line incidences and partial sum-product statistics over F_p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Log progress to stderr; repeat for more detail.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    /// Write the main output here instead of stdout.
    #[arg(short, long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance and write it as CSV (points, optionally lines) or grid JSON.
    Gen(GenArgs),
    /// Count incidences between a point set and a line set.
    Incidences(IncidencesArgs),
    /// Run the Beck-type proof skeleton on a point set.
    Beck(InputArgs),
    /// Run the incidence-bound proof skeleton on a point and line set.
    Pipeline(PipelineArgs),
    /// Checks on a grid file: energy, partial sets, half-bsg, prop41.
    Sumprod(SumprodArgs),
    /// Energy ratio over a family of sets, one record per size.
    Rudnev(RudnevArgs),
    /// Seeded sweep over sizes and instances.
    Sweep(SweepArgs),
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: fpinc_core::Error| e.to_string())
}

fn parse_eps(s: &str) -> std::result::Result<Eps, String> {
    s.parse().map_err(|e: fpinc_core::Error| e.to_string())
}

/// Parsed `--sizes` value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sizes(pub Vec<usize>);

fn parse_size_arg(s: &str) -> std::result::Result<Sizes, String> {
    parse_sizes(s).map(Sizes)
}

/// `n`, `a..b` (exclusive) or `a..=b` (inclusive).
pub fn parse_sizes(s: &str) -> std::result::Result<Vec<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    if let Some((a, b)) = s.split_once("..=") {
        Ok((num(a)?..=num(b)?).collect())
    } else if let Some((a, b)) = s.split_once("..") {
        Ok((num(a)?..num(b)?).collect())
    } else {
        Ok(vec![num(s)?])
    }
}

#[derive(Debug, Clone, Args)]
pub struct GenSpecArgs {
    /// Instance family.
    #[arg(long, value_parser = parse_family)]
    pub family: Option<Family>,
    /// Number of points, or |A| for grid, ap and gp.
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    /// Random lines to add, or carrier lines for union-of-lines.
    #[arg(long)]
    pub m: Option<usize>,
    /// Explicit base set for the grid family, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub base: Option<Vec<u64>>,
    #[arg(long, env = "FPINC_SEED", default_value_t = 0)]
    pub seed: u64,
}

impl GenSpecArgs {
    fn spec(&self, p: u64) -> Option<GeneratorSpec> {
        let family = self.family?;
        let mut spec = GeneratorSpec::new(family, p, self.n, self.seed);
        spec.lines = self.m;
        spec.base = self.base.clone();
        if let Some(b) = &spec.base {
            spec.n = b.len();
        }
        Some(spec)
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Field size (an odd prime; 2 is allowed for full-plane).
    #[arg(long)]
    pub p: u64,
    #[command(flatten)]
    pub gen: GenSpecArgs,
    /// Also write the instance's line set here.
    #[arg(long)]
    pub lines_out: Option<PathBuf>,
    /// Write the complete grid A x A as JSON here (grid, ap, gp families).
    #[arg(long)]
    pub grid_out: Option<PathBuf>,
}

/// Exactly one input source: `--points` (with optional `--lines`) or a
/// generator (`--family` and its flags).
#[derive(Debug, Args)]
pub struct InputArgs {
    /// Field size.
    #[arg(long)]
    pub p: u64,
    /// Points CSV (`x,y`).
    #[arg(long, conflicts_with = "family")]
    pub points: Option<PathBuf>,
    /// Lines CSV (`a,b,c`); defaults to the lines the points determine.
    #[arg(long, requires = "points")]
    pub lines: Option<PathBuf>,
    #[command(flatten)]
    pub gen: GenSpecArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Algorithm {
    Naive,
    Bucketed,
}

#[derive(Debug, Args)]
pub struct IncidencesArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "bucketed")]
    pub algorithm: Algorithm,
    /// Include per-point degrees and per-line richness.
    #[arg(long)]
    pub profiles: bool,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Emit one JSON line per stage before the final record.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SumprodCheck {
    Energy,
    Partial,
    HalfBsg,
    /// The partial sum-product ratio `|G|^55 / (|A|^36 |B|^37 |A-B|^28 |A/B|^8)`.
    #[value(alias = "partial-sumprod")]
    Prop41,
    All,
}

#[derive(Debug, Args)]
pub struct SumprodArgs {
    /// Grid JSON file.
    #[arg(long)]
    pub grid: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    pub check: SumprodCheck,
    #[arg(long, value_parser = parse_eps, default_value = "0.01")]
    pub eps: Eps,
}

#[derive(Debug, Args)]
pub struct RudnevArgs {
    #[arg(long, default_value_t = 1009)]
    pub p: u64,
    #[arg(long, value_parser = parse_family, default_value = "gp")]
    pub family: Family,
    /// Sizes: `n`, `a..b` or `a..=b`.
    #[arg(long, value_parser = parse_size_arg, default_value = "4..=16")]
    pub sizes: Sizes,
    #[arg(long, env = "FPINC_SEED", default_value_t = 0)]
    pub seed: u64,
    /// An explicit set instead of a family, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "sizes")]
    pub set: Option<Vec<u64>>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long)]
    pub p: u64,
    /// Sizes: `n`, `a..b` or `a..=b`.
    #[arg(long, value_parser = parse_size_arg)]
    pub sizes: Sizes,
    /// Instances per size.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    #[arg(long, value_enum, default_value = "pipeline")]
    pub check: CheckKind,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, value_parser = parse_eps, default_value = "0.01")]
    pub eps: Eps,
    #[arg(long)]
    pub m: Option<usize>,
    /// Master seed.
    #[arg(long, env = "FPINC_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Also write the summary CSV here.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Record wall time per instance (makes output run-dependent).
    #[arg(long)]
    pub timing: bool,
}

fn plane(p: u64) -> Result<PlaneContext> {
    Ok(PlaneContext::new(p).or_else(|_| PlaneContext::new_allow_two(p))?)
}

struct Loaded {
    points: PointSet,
    lines: Option<LineSet>,
    spec: Option<GeneratorSpec>,
}

fn load(input: &InputArgs) -> Result<Loaded> {
    match (&input.points, input.gen.spec(input.p)) {
        (Some(path), None) => {
            let ctx = plane(input.p)?;
            let points = io::read_points(path, ctx)?;
            let lines = input.lines.as_deref().map(|l| io::read_lines(l, ctx)).transpose()?;
            Ok(Loaded { points, lines, spec: None })
        }
        (None, Some(spec)) => {
            let Instance { points, lines, .. } = generate(&spec)?;
            Ok(Loaded { points, lines, spec: Some(spec) })
        }
        _ => Err(Error::Usage("give exactly one input: --points FILE or --family NAME".into())),
    }
}

fn file_record(kind: &str, l: &Loaded) -> ExperimentRecord {
    match &l.spec {
        Some(spec) => ExperimentRecord::new(kind, spec, 0),
        None => ExperimentRecord {
            kind: kind.into(),
            family: "file".into(),
            p: l.points.ctx().modulus(),
            size: l.points.len() as u64,
            ..Default::default()
        },
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?))
}

/// `key: value` lines for scalars, indented JSON for the rest.
fn pretty(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, x)| match x {
                Value::Object(_) | Value::Array(_) => {
                    format!("{k}: {}", serde_json::to_string_pretty(x).unwrap_or_default())
                }
                Value::String(s) => format!("{k}: {s}"),
                _ => format!("{k}: {x}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        _ => v.to_string(),
    }
}

struct Output<'a> {
    out: Box<dyn Write + 'a>,
    pretty: bool,
    path: PathBuf,
}

impl Output<'_> {
    fn value(&mut self, v: &Value) -> Result<()> {
        let text = if self.pretty { pretty(v) + "\n" } else { v.to_string() + "\n" };
        self.out.write_all(text.as_bytes()).map_err(|e| Error::io(&self.path, e))
    }

    fn records(&mut self, recs: &[ExperimentRecord]) -> Result<()> {
        if self.pretty {
            for r in recs {
                self.value(&serde_json::to_value(r).expect("records serialise"))?;
            }
            Ok(())
        } else {
            write_jsonl(&mut self.out, recs).map_err(|e| Error::io(&self.path, e))
        }
    }

    fn raw(&mut self, f: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
        f(&mut self.out).map_err(|e| Error::io(&self.path, e))
    }
}

fn cmd_gen(a: &GenArgs, out: &mut Output) -> Result<()> {
    let spec = a.gen.spec(a.p).ok_or_else(|| Error::Usage("--family is required".into()))?;
    let inst = generate(&spec)?;
    out.raw(|w| io::write_points(w, &inst.points).map_err(std::io::Error::other))?;
    if let Some(path) = &a.lines_out {
        let lines = inst
            .lines
            .as_ref()
            .ok_or_else(|| Error::Usage(format!("family {} defines no lines; pass --m", spec.family)))?;
        io::write_lines(create(path)?, lines).map_err(|e| Error::format(path, e))?;
    }
    if let Some(path) = &a.grid_out {
        let base = inst.base.as_ref().ok_or_else(|| Error::Usage("only grid, ap and gp have a grid".into()))?;
        let g = GridInstance::complete(*inst.points.ctx(), base, base);
        let mut w = create(path)?;
        io::write_grid(&mut w, &g).map_err(|e| Error::format(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

fn cmd_incidences(a: &IncidencesArgs, out: &mut Output) -> Result<()> {
    let l = load(&a.input)?;
    let source = if l.lines.is_some() { "given" } else { "determined" };
    let lines = lines_for(&l.points, l.lines);
    let alg = match a.algorithm {
        Algorithm::Naive => IncidenceAlgorithm::Naive,
        Algorithm::Bucketed => IncidenceAlgorithm::Bucketed,
    };
    let prof = count_incidences_with(&l.points, &lines, alg);
    let mut v = json!({
        "p": l.points.ctx().modulus(),
        "points": l.points.len(),
        "lines": lines.len(),
        "lines_source": source,
        "algorithm": format!("{:?}", a.algorithm).to_lowercase(),
        "I": prof.incidences,
    });
    if a.profiles {
        v["point_degrees"] = json!(prof.point_degrees);
        v["line_richness"] = json!(prof.line_richness);
    }
    out.value(&v)
}

fn cmd_beck(a: &InputArgs, out: &mut Output) -> Result<()> {
    let l = load(a)?;
    let trace = run_beck_pipeline(&l.points)?;
    let mut rec = file_record("beck", &l);
    rec.add_trace(&trace);
    log::info!("beck: case {} ({})", trace.case, trace.reason);
    out.records(&[rec])
}

fn cmd_pipeline(a: &PipelineArgs, out: &mut Output) -> Result<()> {
    let l = load(&a.input)?;
    let lines = lines_for(&l.points, l.lines.clone());
    let trace = run_incidence_pipeline(&l.points, &lines)?;
    let mut rec = file_record("pipeline", &l);
    rec.add_trace(&trace);
    if a.trace {
        for s in &rec.stages {
            out.value(&serde_json::to_value(s).expect("stages serialise"))?;
        }
    }
    rec.stages.clear();
    out.records(&[rec])
}

fn set_values(v: &[fpinc_core::Fe]) -> Vec<u64> {
    v.iter().map(|x| x.value()).collect()
}

fn cmd_sumprod(a: &SumprodArgs, out: &mut Output) -> Result<()> {
    let g = io::read_grid(&a.grid)?;
    let ctx = *g.ctx();
    let want = |c: SumprodCheck| a.check == c || a.check == SumprodCheck::All;
    let mut v = json!({ "p": ctx.modulus(), "A": g.a().len(), "B": g.b().len(), "G": g.edges().len() });
    if want(SumprodCheck::Energy) {
        let ea = mult_energy(&ctx, g.a())?;
        let eb = mult_energy(&ctx, g.b())?;
        v["energy"] = json!({ "A": ea.energy.to_string(), "B": eb.energy.to_string() });
    }
    if want(SumprodCheck::Partial) {
        let mut sets = serde_json::Map::new();
        for op in Op::ALL {
            let entry = match partial_set(&g, op) {
                Ok(s) => json!({ "size": s.len(), "set": set_values(&s) }),
                Err(e) => json!({ "error": e.to_string() }),
            };
            sets.insert(op.symbol().to_string(), entry);
        }
        v["partial"] = Value::Object(sets);
    }
    if want(SumprodCheck::HalfBsg) {
        v["half_bsg"] = match half_bsg(&g, a.eps) {
            Ok(h) => json!({
            "eps": a.eps.to_string(),
            "A_prime": h.refined.selection.a_prime.len(),
            "threshold": h.refined.selection.threshold,
            "A2": set_values(&h.a2),
            "diff": h.diff_size,
            "energy": h.energy.energy.to_string(),
            "H_prime": h.h_prime_size,
            "H_prime_ratio_set": h.h_prime_ratio_size,
            "cauchy_schwarz": h.cauchy_schwarz_holds(),
            "diff_ceiling": RatioEntry::exact("bsg_diff_ceiling", "|A''-A''| << |A -_G B|^4 |A|^4 |B|^3 / |G|^5", &h.ceiling_ratio),
            "energy_floor": RatioEntry::exact("bsg_energy_floor", "E_x(A'') >> |G|^6 / (|B|^5 |A|^2 |A /_G B|^2)", &h.floor_ratio),
            }),
            // Only the explicitly requested check turns a failed precondition into an error.
            Err(e) if a.check == SumprodCheck::All && !e.is_internal() => json!({ "error": e.to_string() }),
            Err(e) => return Err(e.into()),
        };
    }
    if want(SumprodCheck::Prop41) {
        let r = check_partial_sumprod(&g)?;
        v["partial_sumprod"] = json!({
            "G": r.g_size, "A": r.a_size, "B": r.b_size,
            "diff": r.diff_size, "ratio_set": r.ratio_size,
            "zero_denominator_edges": r.zero_denominator_edges,
            "ratio": r.ratio.to_fraction_string(),
            "value": r.ratio.to_f64(),
            "log2": r.ratio.log2(),
            "large_graph_warning": r.large_graph_warning,
        });
    }
    out.value(&v)
}

fn cmd_rudnev(a: &RudnevArgs, out: &mut Output) -> Result<()> {
    let ctx = PlaneContext::new(a.p)?;
    let mut recs = Vec::new();
    let runs: Vec<(GeneratorSpec, Option<Vec<fpinc_core::Fe>>)> = match &a.set {
        Some(s) => {
            let spec = GeneratorSpec::new(Family::Grid, a.p, s.len(), a.seed).with_base(s.clone());
            vec![(spec, None)]
        }
        None => a.sizes.0.iter().map(|&n| (GeneratorSpec::new(a.family, a.p, n, a.seed), None)).collect(),
    };
    for (spec, _) in runs {
        let set = base_set(&spec)?;
        let mut rec = ExperimentRecord::new("rudnev", &spec, 0);
        if a.set.is_some() {
            rec.family = "set".into();
        }
        rec.add_rudnev(&fpinc_core::sumprod::check_rudnev(&ctx, &set)?);
        recs.push(rec);
    }
    out.records(&recs)
}

fn cmd_sweep(a: &SweepArgs, out: &mut Output) -> Result<()> {
    let cfg = SweepConfig {
        family: a.family,
        p: a.p,
        sizes: a.sizes.0.clone(),
        seeds: a.seeds,
        master_seed: a.seed,
        check: a.check,
        eps: a.eps,
        lines: a.m,
        timing: a.timing,
    };
    let recs = sweep(&cfg, a.jobs)?;
    log::info!("sweep: {} records", recs.len());
    if let Some(path) = &a.summary {
        write_summary(create(path)?, &recs).map_err(|e| Error::format(path, e))?;
    }
    out.records(&recs)
}

fn dispatch(cli: &Cli, out: &mut Output) -> Result<()> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(a, out),
        Command::Incidences(a) => cmd_incidences(a, out),
        Command::Beck(a) => cmd_beck(a, out),
        Command::Pipeline(a) => cmd_pipeline(a, out),
        Command::Sumprod(a) => cmd_sumprod(a, out),
        Command::Rudnev(a) => cmd_rudnev(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
    }
}

/// Parses `args`, runs the command and returns the exit code. Main output
/// goes to `--out` or `stdout`; diagnostics go to `stderr`.
pub fn run(args: impl IntoIterator<Item = impl Into<OsString> + Clone>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).try_init();

    let result = (|| {
        let mut out = match &cli.out {
            Some(path) => Output { out: Box::new(create(path)?), pretty: cli.pretty, path: path.clone() },
            None => Output { out: Box::new(&mut *stdout), pretty: cli.pretty, path: "<stdout>".into() },
        };
        dispatch(&cli, &mut out)?;
        out.raw(|w| w.flush())
    })();
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "fpinc: {e}");
            e.exit_code()
        }
    }
}
