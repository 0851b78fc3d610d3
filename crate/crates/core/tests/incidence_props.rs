use fpinc_core::incidence::{
    count_incidences, count_incidences_with, determined_lines_with_richness, dyadic_select_lines,
    dyadic_select_points, lines_determined, max_collinear, IncidenceAlgorithm,
};
use fpinc_core::refine::{
    find_q_config, find_r_config, is_k_good, refine_bounded_lines, refine_bounded_points, refine_popular_lines,
    refine_popular_points,
};
use fpinc_core::{AffLine, AffinePoint, LineSet, PlaneContext, PointSet};
use proptest::prelude::*;

fn instance(p: u64, pts: &[(u64, u64)], lines: &[(u64, u64, u64)]) -> (PointSet, LineSet) {
    let c = PlaneContext::new(p).unwrap();
    let pts = PointSet::new(c, pts.iter().map(|&(x, y)| AffinePoint::from_u64(&c, x % p, y % p)));
    let lines = LineSet::new(
        c,
        lines.iter().filter_map(|&(a, b, k)| AffLine::new(&c, c.elem(a), c.elem(b), c.elem(k)).ok()),
    );
    (pts, lines)
}

fn arb_instance() -> impl Strategy<Value = (PointSet, LineSet)> {
    prop::sample::select(vec![3u64, 5, 7, 11, 13, 31, 101]).prop_flat_map(|p| {
        (
            prop::collection::vec((0..p, 0..p), 1..60),
            prop::collection::vec((0..p, 0..p, 0..p), 0..60),
        )
            .prop_map(move |(pts, ls)| instance(p, &pts, &ls))
    })
}

fn arb_points() -> impl Strategy<Value = PointSet> {
    prop::sample::select(vec![5u64, 7, 11, 31, 101])
        .prop_flat_map(|p| prop::collection::vec((0..p, 0..p), 2..40).prop_map(move |pts| instance(p, &pts, &[]).0))
}

fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

proptest! {
    #[test]
    fn counters_agree((pts, lines) in arb_instance()) {
        let naive = count_incidences_with(&pts, &lines, IncidenceAlgorithm::Naive);
        let fast = count_incidences_with(&pts, &lines, IncidenceAlgorithm::Bucketed);
        prop_assert_eq!(&naive, &fast);
        prop_assert_eq!(naive.point_degrees.iter().sum::<u64>(), naive.incidences);
        prop_assert_eq!(naive.line_richness.iter().sum::<u64>(), naive.incidences);
    }

    #[test]
    fn trivial_incidence_bounds((pts, lines) in arb_instance()) {
        // I <= |L| + |P| sqrt|L| and the mirror bound, compared after squaring.
        let i = count_incidences(&pts, &lines).incidences as u128;
        let (np, nl) = (pts.len() as u128, lines.len() as u128);
        prop_assert!(i <= nl || (i - nl) * (i - nl) <= np * np * nl);
        prop_assert!(i <= np || (i - np) * (i - np) <= nl * nl * np);
    }

    #[test]
    fn determined_lines_count_pairs(pts in arb_points()) {
        let n = pts.len() as u64;
        let rich = determined_lines_with_richness(&pts);
        prop_assert_eq!(rich.iter().map(|&(_, m)| choose2(m)).sum::<u64>(), choose2(n));
        let l = lines_determined(&pts).unwrap();
        prop_assert!(l.len() as u64 <= choose2(n));
        let (_, maxcol) = max_collinear(&pts).unwrap();
        prop_assert_eq!(l.len() as u64 == choose2(n), maxcol == 2);
    }

    #[test]
    fn dyadic_classes((pts, lines) in arb_instance()) {
        let prof = count_incidences(&pts, &lines);
        if prof.incidences == 0 {
            prop_assert!(dyadic_select_points(&pts, &lines).is_err());
            return Ok(());
        }
        let pc = dyadic_select_points(&pts, &lines).unwrap();
        let deg = count_incidences(&pc.members, &lines).point_degrees;
        prop_assert!(deg.iter().all(|&d| pc.base <= d && d < 2 * pc.base));
        prop_assert!(pc.guarantee_holds());
        let lc = dyadic_select_lines(&pts, &lines).unwrap();
        let mu = count_incidences(&pts, &lc.members).line_richness;
        prop_assert!(mu.iter().all(|&m| lc.base <= m && m < 2 * lc.base));
        prop_assert!(lc.guarantee_holds());
    }

    #[test]
    fn refinements_keep_half((pts, lines) in arb_instance()) {
        let i = count_incidences(&pts, &lines).incidences;
        if i == 0 {
            return Ok(());
        }
        let kept = [
            count_incidences(&refine_popular_points(&pts, &lines).unwrap(), &lines).incidences,
            count_incidences(&pts, &refine_popular_lines(&pts, &lines).unwrap()).incidences,
            count_incidences(&refine_bounded_points(&pts, &lines).unwrap(), &lines).incidences,
            count_incidences(&pts, &refine_bounded_lines(&pts, &lines).unwrap()).incidences,
        ];
        for k in kept {
            prop_assert!(2 * k >= i, "kept {} of {}", k, i);
        }
    }

    #[test]
    fn goodness_is_monotone(pts in arb_points(), keep in prop::collection::vec(any::<bool>(), 40), apex in (0u64..5, 0u64..5)) {
        let c = *pts.ctx();
        let apex = AffinePoint::from_u64(&c, apex.0, apex.1);
        let s = pts.filter(|q| *q != apex);
        let mut i = 0;
        let sub = s.filter(|_| { i += 1; keep[i - 1] });
        let big = is_k_good(&s, apex).unwrap();
        let small = is_k_good(&sub, apex).unwrap();
        prop_assert!(big.validate() && small.validate());
        prop_assert!(small.k <= big.k);
    }

    #[test]
    fn configuration_searches((pts, lines) in arb_instance()) {
        let Ok(class) = dyadic_select_points(&pts, &lines) else { return Ok(()) };
        let k = class.base;
        let Ok(q) = find_q_config(&class.members, &lines, k) else { return Ok(()) };
        prop_assert!(q.p1 != q.p2);
        prop_assert!(q.cert1.validate() && q.cert2.validate() && q.lines_in_l);
        prop_assert!((q.cert1.k as u64) < 2 * k && (q.cert2.k as u64) < 2 * k);
        prop_assert!(q.q.is_subset(&class.members));
        if let Ok(r) = find_r_config(&q, &class.members, &lines, k) {
            prop_assert!(r.structure_holds(&lines));
            prop_assert!(r.split.inequality_holds());
            prop_assert!(r.r.is_subset(&q.q));
        }
    }
}
