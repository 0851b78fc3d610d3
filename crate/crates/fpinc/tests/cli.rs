use std::path::Path;
use std::process::{Command, Stdio};

use fpinc::cli::run;
use fpinc::io;
use fpinc_core::harness::{generate, Family, GeneratorSpec};
use fpinc_core::PlaneContext;
use serde_json::Value;

fn fpinc(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fpinc").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text.lines().last().unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn full_plane_gen_then_count() {
    let dir = tempfile::tempdir().unwrap();
    let (pts, lines) = (dir.path().join("p.csv"), dir.path().join("l.csv"));
    let (code, _, err) = fpinc(&["gen", "--family", "full-plane", "--p", "3", "--out", s(&pts), "--lines-out", s(&lines)]);
    assert_eq!(code, 0, "{err}");
    let (code, out, _) = fpinc(&["incidences", "--p", "3", "--points", s(&pts), "--lines", s(&lines)]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!((v["I"].as_u64(), v["points"].as_u64(), v["lines"].as_u64()), (Some(36), Some(9), Some(12)));
}

#[test]
fn gen_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (pts, lines) = (dir.path().join("p.csv"), dir.path().join("l.csv"));
    let args = ["gen", "--family", "random", "--p", "31", "--n", "40", "--m", "25", "--seed", "5"];
    let (code, _, _) = fpinc(&[&args[..], &["--out", s(&pts), "--lines-out", s(&lines)]].concat());
    assert_eq!(code, 0);
    let inst = generate(&GeneratorSpec::new(Family::Random, 31, 40, 5).with_lines(25)).unwrap();
    let c = PlaneContext::new(31).unwrap();
    assert_eq!(io::read_points(&pts, c).unwrap(), inst.points);
    assert_eq!(io::read_lines(&lines, c).unwrap(), inst.lines.unwrap());
}

#[test]
fn beck_on_collinear_points() {
    let (code, out, _) = fpinc(&["beck", "--family", "collinear", "--p", "101", "--n", "5"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!((v["max_collinear"].as_u64(), v["lines_determined"].as_u64()), (Some(5), Some(1)));
}

#[test]
fn partial_sumprod_on_two_edge_grid() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    std::fs::write(&g, r#"{"p": 5, "A": [1, 2], "B": [1, 3], "G": [[1, 1], [2, 3]]}"#).unwrap();
    let (code, out, _) = fpinc(&["sumprod", "--grid", s(&g), "--check", "prop41"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["partial_sumprod"]["log2"].as_f64(), Some(-54.0));
    assert_eq!(v["partial_sumprod"]["ratio"].as_str(), Some("1/18014398509481984"));
}

#[test]
fn pipeline_trace_emits_stages() {
    let (code, out, _) = fpinc(&["pipeline", "--family", "full-plane", "--p", "7", "--trace"]);
    assert_eq!(code, 0);
    let lines: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(lines.len() >= 2);
    assert!(lines[..lines.len() - 1].iter().all(|l| l["stage"].is_string()));
    let rec = lines.last().unwrap();
    assert!((1..=5).contains(&rec["case"].as_u64().unwrap()));
    assert!(rec["warnings"].as_array().is_some_and(|w| !w.is_empty()));
}

#[test]
fn rudnev_over_a_family() {
    let (code, out, _) = fpinc(&["rudnev", "--family", "gp", "--p", "1009", "--sizes", "4..=16"]);
    assert_eq!(code, 0);
    let recs: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(recs.len(), 13);
    assert!(recs.iter().all(|r| r["ratios"][0]["value"].as_f64().unwrap() > 0.0));
    let (_, out, _) = fpinc(&["rudnev", "--p", "101", "--set", "1,2"]);
    assert_eq!(json(&out)["ratios"][0]["exact"].as_str(), Some("1/27"));
}

#[test]
fn sweep_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("s.csv");
    let args = ["sweep", "--family", "gp", "--p", "1009", "--sizes", "4..8", "--check", "rudnev", "--summary", s(&summary)];
    let (code, out, _) = fpinc(&args);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4);
    let text = std::fs::read_to_string(&summary).unwrap();
    assert!(text.starts_with("family,p,size,seed,I,L_of_P,maxcol,case,ratio_rudnev,ratio_prop41,exponent\n"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn exit_codes() {
    assert_eq!(fpinc(&["--help"]).0, 0);
    assert_eq!(fpinc(&["--version"]).0, 0);
    assert_eq!(fpinc(&["frobnicate"]).0, 1);
    assert_eq!(fpinc(&["incidences", "--p", "7"]).0, 1);
    assert_eq!(fpinc(&["gen", "--family", "nope", "--p", "7"]).0, 1);
    assert_eq!(fpinc(&["sweep", "--family", "gp", "--p", "7", "--sizes", "x..y"]).0, 1);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "x,y\n1,2\n1,2\n").unwrap();
    assert_eq!(fpinc(&["incidences", "--p", "7", "--points", s(&bad)]).0, 2);
    assert_eq!(fpinc(&["incidences", "--p", "7", "--points", s(&dir.path().join("missing.csv"))]).0, 2);
    assert_eq!(fpinc(&["gen", "--family", "random", "--p", "8", "--n", "3"]).0, 2);
    assert_eq!(fpinc(&["gen", "--family", "random", "--p", "3", "--n", "10"]).0, 2);
    let grid = dir.path().join("g.json");
    std::fs::write(&grid, r#"{"p": 5, "A": [1], "B": [0], "G": [[1, 0]]}"#).unwrap();
    assert_eq!(fpinc(&["sumprod", "--grid", s(&grid), "--check", "prop41"]).0, 2);
}

#[test]
fn binary_matches_library_and_reads_seed_from_env() {
    let bin = env!("CARGO_BIN_EXE_fpinc");
    let out = Command::new(bin)
        .args(["gen", "--family", "random", "--p", "101", "--n", "10"])
        .env("FPINC_SEED", "42")
        .output()
        .unwrap();
    assert!(out.status.success());
    let (_, lib, _) = fpinc(&["gen", "--family", "random", "--p", "101", "--n", "10", "--seed", "42"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), lib);
    assert_eq!(Command::new(bin).arg("bogus").stderr(Stdio::null()).status().unwrap().code(), Some(1));
}
