use fpinc_core::harness::{generate, instance_seed, run_beck_pipeline, run_incidence_pipeline, Family, GeneratorSpec};
use fpinc_core::incidence::{count_incidences, determined_lines_with_richness, lines_determined};
use fpinc_core::{LineSet, PlaneContext, PointSet};
use proptest::prelude::*;

#[test]
fn full_plane_identities() {
    for p in [2u64, 3, 5, 7] {
        let inst = generate(&GeneratorSpec::new(Family::FullPlane, p, 0, 0)).unwrap();
        let lines = inst.lines.unwrap();
        assert_eq!(lines.len() as u64, p * p + p);
        assert_eq!(count_incidences(&inst.points, &lines).incidences, p * p * (p + 1));
        assert_eq!(lines_determined(&inst.points).unwrap(), lines);
    }
}

#[test]
fn seeds_differ_by_key() {
    let a = instance_seed(1, Family::Random, 10, 0);
    assert_ne!(a, instance_seed(1, Family::Random, 10, 1));
    assert_ne!(a, instance_seed(1, Family::Grid, 10, 0));
    assert_ne!(a, instance_seed(2, Family::Random, 10, 0));
    assert_eq!(a, instance_seed(1, Family::Random, 10, 0));
}

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(vec![
        Family::Random,
        Family::Grid,
        Family::Ap,
        Family::Gp,
        Family::UnionOfLines,
        Family::NearCollinear,
        Family::Collinear,
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generation_is_deterministic(f in family(), n in 2usize..9, seed in any::<u64>()) {
        let spec = GeneratorSpec::new(f, 101, n, seed);
        prop_assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
    }

    #[test]
    fn small_random_sets_count_pairs(n in 2usize..11, seed in any::<u64>()) {
        let inst = generate(&GeneratorSpec::new(Family::Random, 101, n, seed)).unwrap();
        prop_assert_eq!(inst.points.len(), n);
        let pairs: u64 = determined_lines_with_richness(&inst.points).iter().map(|&(_, m)| m * (m - 1) / 2).sum();
        prop_assert_eq!(pairs, (n * (n - 1) / 2) as u64);
    }

    #[test]
    fn pipelines_end_in_a_consistent_case(f in family(), n in 2usize..12, seed in any::<u64>()) {
        let inst = generate(&GeneratorSpec::new(f, 101, n, seed)).unwrap();
        let lines = inst.lines.clone().unwrap_or_else(|| lines_determined(&inst.points).unwrap());
        let t = run_incidence_pipeline(&inst.points, &lines).unwrap();
        prop_assert!((1..=5).contains(&t.case));
        prop_assert!(t.is_consistent() && t.all_checks_pass(), "{:?}", t);
        let b = run_beck_pipeline(&inst.points).unwrap();
        prop_assert!(b.is_consistent() && b.all_checks_pass(), "{:?}", b);
        prop_assert!(b.beck.is_some());
    }
}

#[test]
fn empty_line_set_trace() {
    let c = PlaneContext::new(7).unwrap();
    let t = run_incidence_pipeline(&PointSet::full_plane(c), &LineSet::empty(c)).unwrap();
    assert_eq!((t.incidences, t.case), (0, 1));
}
