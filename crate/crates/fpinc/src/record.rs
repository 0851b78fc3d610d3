//! Experiment records: one JSON object per run, plus a flat CSV summary.

use std::collections::BTreeMap;
use std::io::Write;

use fpinc_core::harness::{CaseTrace, GeneratorSpec, Stage};
use fpinc_core::ratio::ExactRatio;
use fpinc_core::sumprod::{PartialSumProdReport, ReductionOutput, RudnevReport};
use serde::{Deserialize, Serialize};

pub const RUDNEV_STATEMENT: &str = "E_x(A)^4 <~ |A-A|^7 |A|^4";
pub const PARTIAL_SUMPROD_STATEMENT: &str = "|G|^55 << |A|^36 |B|^37 |A -_G B|^28 |A /_G B|^8";

/// A reported ratio with the inequality it instantiates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioEntry {
    pub name: String,
    pub statement: String,
    pub value: f64,
    pub log2: f64,
    /// Lowest-terms fraction, for ratios computed exactly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl RatioEntry {
    pub fn exact(name: &str, statement: &str, r: &ExactRatio) -> Self {
        RatioEntry {
            name: name.into(),
            statement: statement.into(),
            value: r.to_f64(),
            log2: r.log2(),
            exact: Some(r.to_fraction_string()),
        }
    }

    pub fn float(name: &str, statement: &str, v: f64) -> Self {
        RatioEntry { name: name.into(), statement: statement.into(), value: v, log2: v.log2(), exact: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: String,
    pub sizes: BTreeMap<String, u64>,
    pub ratios: BTreeMap<String, f64>,
    pub checks: BTreeMap<String, bool>,
}

impl From<&Stage> for StageRecord {
    fn from(s: &Stage) -> Self {
        StageRecord {
            stage: s.name.into(),
            sizes: s.sizes.iter().map(|&(k, v)| (k.into(), v)).collect(),
            ratios: s.ratios.iter().map(|&(k, v)| (k.into(), v)).collect(),
            checks: s.checks.iter().map(|&(k, v)| (k.into(), v)).collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReductionRecord {
    pub lambda: u64,
    pub tau: [[u64; 3]; 3],
    pub apexes: [[u64; 3]; 4],
    pub goodness: [usize; 4],
    pub g: usize,
    pub a: usize,
    pub b: usize,
    pub diff: usize,
    pub ratio: usize,
    pub zero_denominator_edges: usize,
    pub bounds_hold: bool,
    pub swapped_labeling_holds: bool,
    pub equalities: bool,
}

impl From<&ReductionOutput> for ReductionRecord {
    fn from(r: &ReductionOutput) -> Self {
        ReductionRecord {
            lambda: r.lambda.value(),
            tau: r.tau.rows().map(|row| row.map(|x| x.value())),
            apexes: r.apexes.map(|q| q.coords().map(|x| x.value())),
            goodness: r.goodness,
            g: r.grid.edges().len(),
            a: r.grid.a().len(),
            b: r.grid.b().len(),
            diff: r.diff_size,
            ratio: r.ratio_size,
            zero_denominator_edges: r.zero_denominator_edges,
            bounds_hold: r.bounds.all_hold(),
            swapped_labeling_holds: r.bounds.swapped_labeling,
            equalities: r.bounds.all_equalities,
        }
    }
}

/// One harness run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub kind: String,
    pub family: String,
    pub p: u64,
    pub size: u64,
    pub index: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lines: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub incidences: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lines_determined: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_collinear: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<u128>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ratios: Vec<RatioEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<StageRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl ExperimentRecord {
    pub fn new(kind: &str, spec: &GeneratorSpec, index: u64) -> Self {
        ExperimentRecord {
            kind: kind.into(),
            family: spec.family.name().into(),
            p: spec.p,
            size: spec.n as u64,
            index,
            seed: spec.seed,
            ..Default::default()
        }
    }

    /// Sort key for deterministic output.
    pub fn key(&self) -> (String, String, u64, u64, u64) {
        (self.kind.clone(), self.family.clone(), self.p, self.size, self.index)
    }

    pub fn ratio(&self, name: &str) -> Option<&RatioEntry> {
        self.ratios.iter().find(|r| r.name == name)
    }

    pub fn add_trace(&mut self, t: &CaseTrace) {
        self.n = Some(t.big_n);
        self.points = Some(t.n_points);
        self.lines = Some(t.n_lines);
        self.incidences = Some(t.incidences);
        self.case = Some(t.case);
        self.reason = Some(t.reason.clone());
        self.stages = t.stages.iter().map(StageRecord::from).collect();
        if let Some(b) = &t.beck {
            self.lines_determined = Some(b.determined_lines);
            self.max_collinear = Some(b.max_collinear);
            self.exponent = b.exponent.is_finite().then_some(b.exponent);
        }
        if let Some(r) = &t.reduction {
            self.reduction = Some(r.into());
        }
        if let Some(rep) = &t.partial_sumprod {
            self.add_partial_sumprod(rep);
        }
        if t.big_n >= self.p {
            self.warnings.push(format!("N = {} is not below p", t.big_n));
        }
    }

    pub fn add_rudnev(&mut self, r: &RudnevReport) {
        self.energy = Some(r.energy);
        self.ratios.push(RatioEntry::exact("rudnev", RUDNEV_STATEMENT, &r.ratio));
        if r.large_set_warning {
            self.warnings.push("|A|^2 >= p".into());
        }
    }

    pub fn add_partial_sumprod(&mut self, r: &PartialSumProdReport) {
        self.ratios.push(RatioEntry::exact("partial_sumprod", PARTIAL_SUMPROD_STATEMENT, &r.ratio));
        if r.large_graph_warning {
            self.warnings.push("|G| > p |B|".into());
        }
    }
}

pub fn write_jsonl<'a>(mut out: impl Write, records: impl IntoIterator<Item = &'a ExperimentRecord>) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

#[derive(Debug, Serialize)]
struct SummaryRow<'a> {
    family: &'a str,
    p: u64,
    size: u64,
    seed: u64,
    #[serde(rename = "I")]
    incidences: Option<u64>,
    #[serde(rename = "L_of_P")]
    l_of_p: Option<u64>,
    maxcol: Option<u64>,
    case: Option<u8>,
    ratio_rudnev: Option<f64>,
    ratio_prop41: Option<f64>,
    exponent: Option<f64>,
}

/// Summary CSV with columns `family, p, size, seed, I, L_of_P, maxcol,
/// case, ratio_rudnev, ratio_prop41, exponent`; absent values are empty.
pub fn write_summary<'a>(out: impl Write, records: impl IntoIterator<Item = &'a ExperimentRecord>) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(SummaryRow {
            family: &r.family,
            p: r.p,
            size: r.size,
            seed: r.seed,
            incidences: r.incidences,
            l_of_p: r.lines_determined,
            maxcol: r.max_collinear,
            case: r.case,
            ratio_rudnev: r.ratio("rudnev").map(|x| x.value),
            ratio_prop41: r.ratio("partial_sumprod").map(|x| x.value),
            exponent: r.exponent,
        })?;
    }
    w.flush()?;
    Ok(())
}
