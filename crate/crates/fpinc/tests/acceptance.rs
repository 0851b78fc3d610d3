//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use fpinc::sweep::{sweep, CheckKind, SweepConfig};
use fpinc_core::harness::{
    dense_random_grid, generate, generate_set, instance_seed, run_incidence_pipeline, Family, GeneratorSpec,
};
use fpinc_core::incidence::{
    count_incidences, count_incidences_with, determined_lines_with_richness, lines_determined, IncidenceAlgorithm,
};
use fpinc_core::ratio::ExactRatio;
use fpinc_core::refine::{refine_bounded_lines, refine_bounded_points, refine_popular_lines, refine_popular_points};
use fpinc_core::sumprod::{
    check_partial_sumprod, check_rudnev, half_bsg, mult_energy, mult_energy_with, partial_set, EnergyMethod, Eps,
    GridInstance, Op,
};
use fpinc_core::{Error, PlaneContext};

const PRIMES: [u64; 12] = [3, 5, 7, 11, 13, 17, 19, 23, 31, 47, 61, 101];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn seed(tag: u64, i: u64) -> u64 {
    instance_seed(0x00ac_ce97, Family::Random, tag, i)
}

/// A seeded random `(P, L)` with `p <= 101` and `|P|, |L| <= 200`.
fn random_instance(tag: u64, i: u64) -> fpinc_core::Result<(fpinc_core::PointSet, fpinc_core::LineSet)> {
    let s = seed(tag, i);
    let p = PRIMES[(s % PRIMES.len() as u64) as usize];
    let n = (1 + (s >> 8) % 200).min(p * p) as usize;
    let m = (1 + (s >> 20) % 200).min(p * p + p) as usize;
    let inst = generate(&GeneratorSpec::new(Family::Random, p, n, s).with_lines(m))?;
    Ok((inst.points, inst.lines.expect("lines requested")))
}

fn incidence_oracle() -> Outcome {
    let start = Instant::now();
    let mut mismatches = 0;
    for i in 0..200 {
        let (pts, lines) = match random_instance(1, i) {
            Ok(x) => x,
            Err(e) => return outcome(false, format!("instance {i}: {e}")),
        };
        let a = count_incidences_with(&pts, &lines, IncidenceAlgorithm::Naive);
        let b = count_incidences_with(&pts, &lines, IncidenceAlgorithm::Bucketed);
        mismatches += (a != b) as u32;
    }
    let t = start.elapsed();
    outcome(
        mismatches == 0 && t < Duration::from_secs(10),
        format!("200 instances, {mismatches} mismatches, {:.2} s", t.as_secs_f64()),
    )
}

fn energy_oracle() -> Outcome {
    let mut mismatches = 0;
    for i in 0..100u64 {
        let s = seed(2, i);
        let p = [13, 101, 1009][(s % 3) as usize];
        let n = 1 + (i % 12) as usize;
        let Ok(a) = generate_set(&GeneratorSpec::new(Family::Random, p, n, s)) else {
            return outcome(false, format!("instance {i}: generation failed"));
        };
        let c = PlaneContext::new(p).unwrap();
        let brute = mult_energy_with(&c, &a, EnergyMethod::Brute).unwrap().energy;
        let fast = mult_energy_with(&c, &a, EnergyMethod::Bucketed).unwrap().energy;
        mismatches += (brute != fast) as u32;
    }
    outcome(mismatches == 0, format!("100 sets with |A| <= 12, {mismatches} mismatches"))
}

fn exact_halving() -> Outcome {
    let mut violations = 0;
    let mut nonempty = 0;
    for i in 0..500 {
        let (pts, lines) = random_instance(3, i).unwrap();
        let total = count_incidences(&pts, &lines).incidences;
        if total == 0 {
            continue;
        }
        nonempty += 1;
        let kept = [
            refine_popular_points(&pts, &lines).map(|x| count_incidences(&x, &lines).incidences),
            refine_popular_lines(&pts, &lines).map(|x| count_incidences(&pts, &x).incidences),
            refine_bounded_points(&pts, &lines).map(|x| count_incidences(&x, &lines).incidences),
            refine_bounded_lines(&pts, &lines).map(|x| count_incidences(&pts, &x).incidences),
        ];
        for k in kept {
            violations += !matches!(k, Ok(k) if 2 * k >= total) as u32;
        }
    }
    outcome(
        violations == 0,
        format!("500 instances ({nonempty} with incidences), {violations} violations over 4 refinements"),
    )
}

fn closed_forms() -> Outcome {
    let mut bad = Vec::new();
    for p in [2u64, 3, 5, 7] {
        let inst = generate(&GeneratorSpec::new(Family::FullPlane, p, 0, 0)).unwrap();
        let lines = inst.lines.unwrap();
        let i = count_incidences(&inst.points, &lines).incidences;
        let lp = lines_determined(&inst.points).unwrap().len() as u64;
        if i != p * p * (p + 1) || lines.len() as u64 != p * p + p || lp != p * p + p {
            bad.push(format!("p={p}"));
        }
    }
    for i in 0..100 {
        let s = seed(4, i);
        let p = PRIMES[(s % PRIMES.len() as u64) as usize];
        let n = (2 + (s >> 8) % 60).min(p * p) as usize;
        let pts = generate(&GeneratorSpec::new(Family::Random, p, n, s)).unwrap().points;
        let pairs: u64 = determined_lines_with_richness(&pts).iter().map(|&(_, m)| m * (m - 1) / 2).sum();
        if pairs != (n * (n - 1) / 2) as u64 {
            bad.push(format!("pair sum instance {i}"));
        }
    }
    outcome(bad.is_empty(), format!("full plane p in {{2,3,5,7}}, 100 pair sums; failures: {bad:?}"))
}

fn reduction_contract() -> Outcome {
    let mut case5 = 0;
    let mut violations = Vec::new();
    let mut cases = [0u32; 6];
    for i in 0..50u64 {
        let p = [101, 1009][(i % 2) as usize];
        let (family, n) = match (i / 2) % 3 {
            0 => (Family::Grid, 8 + (i % 5) as usize),
            1 => (Family::Ap, 8 + (i % 5) as usize),
            _ => (Family::Random, 100 + 2 * i as usize),
        };
        let spec = GeneratorSpec::new(family, p, n, seed(5, i));
        let pts = generate(&spec).unwrap().points;
        let lines = lines_determined(&pts).unwrap();
        let t = match run_incidence_pipeline(&pts, &lines) {
            Ok(t) => t,
            Err(e) => {
                violations.push(format!("{spec}: {e}"));
                continue;
            }
        };
        cases[t.case as usize] += 1;
        if !t.is_consistent() || !t.all_checks_pass() {
            violations.push(format!("{spec}: inconsistent trace"));
        }
        let Some(r) = &t.reduction else { continue };
        case5 += 1;
        let c = PlaneContext::new(p).unwrap();
        let src = r.source.as_ref().expect("pipeline reductions carry their source");
        let ok = r.grid.edges().len() == src.r.len()
            && src.r.iter().all(|&x| !src.l_star.contains(&c, x))
            && r.goodness[2] == src.cert3.k
            && r.goodness[3] == src.cert4.k
            && r.bounds.all_hold();
        if !ok {
            violations.push(format!("{spec}: {:?}", r.bounds));
        }
    }
    outcome(
        case5 > 0 && violations.is_empty(),
        format!("50 runs, cases 1..5 = {:?}, {case5} reductions, violations: {violations:?}", &cases[1..]),
    )
}

fn refinement_floors() -> Outcome {
    let eps = Eps::default();
    let (mut ran, mut skipped, mut violations) = (0, 0, Vec::new());
    let c = PlaneContext::new(1009).unwrap();
    for i in 0..100u64 {
        let s = seed(6, i);
        let n = 6 + (i % 15) as usize;
        let spec = GeneratorSpec::new(Family::Random, 1009, n, s);
        let a = generate_set(&spec).unwrap();
        let removed = (eps.num() as usize * n * n) / eps.den() as usize;
        let g = dense_random_grid(c, &a, removed, s).unwrap();
        match half_bsg(&g, eps) {
            Ok(h) => {
                ran += 1;
                let reg = &h.dense.regularized;
                let nh = h.refined.h.a().len() as u64;
                let floors = eps.above_sqrt_floor(reg.a_prime.len() as u64, 1, nh)
                    && eps.above_sqrt_floor(reg.c_prime.len() as u64, 1, nh);
                if !floors || !h.cauchy_schwarz_holds() {
                    violations.push(format!("{spec}"));
                }
            }
            Err(Error::Invariant(m)) => violations.push(format!("{spec}: {m}")),
            Err(_) => skipped += 1,
        }
    }
    outcome(
        ran > 0 && violations.is_empty(),
        format!("100 dense grids: {ran} ran, {skipped} failed a precondition, violations: {violations:?}"),
    )
}

fn micro_examples() -> Outcome {
    let f5 = PlaneContext::new(5).unwrap();
    let f7 = PlaneContext::new(7).unwrap();
    let f101 = PlaneContext::new(101).unwrap();
    let el = |c: &PlaneContext, v: &[u64]| v.iter().map(|&x| c.elem(x)).collect::<Vec<_>>();
    let vals = |v: Vec<fpinc_core::Fe>| v.into_iter().map(|x| x.value()).collect::<Vec<_>>();
    let g = GridInstance::from_u64(f5, &[1, 2], &[1, 3], &[(1, 1), (2, 3)]).unwrap();
    let rud = check_rudnev(&f101, &el(&f101, &[1, 2])).unwrap();
    let checks = [
        ("E({1,2}) = 6 in F5", mult_energy(&f5, &el(&f5, &[1, 2])).unwrap().energy == 6),
        ("E({1,2,4}) = 27 in F7", mult_energy(&f7, &el(&f7, &[1, 2, 4])).unwrap().energy == 27),
        ("A -_G B = {0,4}", vals(partial_set(&g, Op::Sub).unwrap()) == [0, 4]),
        ("A /_G B = {1,4}", vals(partial_set(&g, Op::Div).unwrap()) == [1, 4]),
        ("rudnev 1296/34992", rud.ratio == ExactRatio::from_u64(1296, 34992)),
        ("partial sum-product 2^-54", check_partial_sumprod(&g).unwrap().ratio == ExactRatio::from_u64(1, 1 << 54)),
    ];
    let failed: Vec<_> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    outcome(failed.is_empty(), format!("{} golden values, failed: {failed:?}", checks.len()))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |jobs: &str, name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_fpinc"))
            .args(["sweep", "--family", "random", "--p", "101", "--sizes", "20..=40", "--seeds", "3"])
            .args(["--check", "pipeline", "--seed", "7", "--jobs", jobs, "--out"])
            .arg(&path)
            .status()
            .unwrap();
        (status.success(), std::fs::read(&path).unwrap_or_default())
    };
    let (ok1, a) = run("4", "a.jsonl");
    let (ok2, b) = run("4", "b.jsonl");
    let (ok3, c) = run("1", "c.jsonl");
    let cfg = SweepConfig {
        family: Family::Gp,
        p: 1009,
        sizes: (4..=12).collect(),
        seeds: 2,
        master_seed: 3,
        check: CheckKind::Rudnev,
        eps: Eps::default(),
        lines: None,
        timing: false,
    };
    let lib_same = sweep(&cfg, 3).unwrap() == sweep(&cfg, 1).unwrap();
    let same = !a.is_empty() && a == b && a == c;
    outcome(
        ok1 && ok2 && ok3 && same && lib_same,
        format!("CLI sweep of 63 records ({} bytes), jobs 4/4/1 identical: {same}; library sweep identical: {lib_same}", a.len()),
    )
}

fn ratio_sanity() -> Outcome {
    let start = Instant::now();
    let c = PlaneContext::new(1009).unwrap();
    let mut bad = Vec::new();
    for n in 4..=30usize {
        let a = generate_set(&GeneratorSpec::new(Family::Gp, 1009, n, 0)).unwrap();
        let rud = check_rudnev(&c, &a).unwrap();
        let ps = check_partial_sumprod(&GridInstance::complete(c, &a, &a)).unwrap();
        let e = rud.energy;
        let m = n as u128;
        let finite = |r: &ExactRatio| r.is_positive() && r.log2().is_finite();
        if !(finite(&rud.ratio) && finite(&ps.ratio) && m * m <= e && e <= m * m * m) {
            bad.push(n);
        }
    }
    let t = start.elapsed();
    outcome(
        bad.is_empty() && t < Duration::from_secs(60),
        format!("GP n = 4..30 in F1009, failing n: {bad:?}, {:.2} s", t.as_secs_f64()),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("incidence counters agree", incidence_oracle),
        ("energy methods agree", energy_oracle),
        ("refinements keep half the incidences", exact_halving),
        ("closed-form identities", closed_forms),
        ("reduction contract", reduction_contract),
        ("refinement size floors and Cauchy-Schwarz step", refinement_floors),
        ("worked micro-examples", micro_examples),
        ("sweep determinism", determinism),
        ("ratio sanity on geometric progressions", ratio_sanity),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        failed += !o.pass as u32;
        println!(
            "{} {}. {name}: {} [{:.1} s]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() as u32 - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
