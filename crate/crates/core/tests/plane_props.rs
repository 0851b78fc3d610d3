use std::collections::BTreeSet;

use fpinc_core::plane::{line_through, ProjMap};
use fpinc_core::{AffLine, AffinePoint, PlaneContext, ProjLine, ProjPoint};
use proptest::prelude::*;

fn ctx(p: u64) -> PlaneContext {
    PlaneContext::new(p).or_else(|_| PlaneContext::new_allow_two(p)).unwrap()
}

fn affine_points(c: &PlaneContext) -> Vec<AffinePoint> {
    let p = c.modulus();
    (0..p).flat_map(|x| (0..p).map(move |y| (x, y))).map(|(x, y)| AffinePoint::from_u64(c, x, y)).collect()
}

fn proj_points(c: &PlaneContext) -> BTreeSet<ProjPoint> {
    let p = c.modulus();
    let mut out = BTreeSet::new();
    for x in 0..p {
        for y in 0..p {
            for z in 0..p {
                if let Ok(q) = ProjPoint::from_u64(c, x, y, z) {
                    out.insert(q);
                }
            }
        }
    }
    out
}

fn proj_lines(c: &PlaneContext) -> BTreeSet<ProjLine> {
    proj_points(c)
        .into_iter()
        .map(|q| {
            let [u, v, w] = q.coords();
            ProjLine::new(c, u, v, w).unwrap()
        })
        .collect()
}

#[test]
fn line_through_is_symmetric_and_incident() {
    for p in [2, 3, 5, 7] {
        let c = ctx(p);
        let pts = affine_points(&c);
        for &a in &pts {
            for &b in pts.iter().filter(|&&b| b != a) {
                let l = line_through(&c, a, b).unwrap();
                assert_eq!(l, line_through(&c, b, a).unwrap());
                assert!(l.contains(&c, a) && l.contains(&c, b));
            }
        }
    }
}

#[test]
fn canonical_lines_count_and_size() {
    for p in [2, 3, 5, 7] {
        let c = ctx(p);
        let mut lines = BTreeSet::new();
        for a in 0..p {
            for b in 0..p {
                for k in 0..p {
                    if let Ok(l) = AffLine::new(&c, c.elem(a), c.elem(b), c.elem(k)) {
                        lines.insert(l);
                    }
                }
            }
        }
        assert_eq!(lines.len() as u64, p * p + p);
        assert_eq!(AffLine::all(&c).collect::<BTreeSet<_>>(), lines);
        for l in &lines {
            assert_eq!(l.points(&c).count() as u64, p, "{l:?}");
        }
    }
}

#[test]
fn inverse_is_an_involution() {
    for p in [2, 3, 5, 7, 101, 1009] {
        let c = ctx(p);
        for x in c.elements().filter(|x| !x.is_zero()) {
            assert_eq!(c.inv(c.inv(x).unwrap()).unwrap(), x);
        }
    }
}

proptest! {
    #[test]
    fn projective_maps_preserve_incidence(
        p in prop::sample::select(vec![3u64, 5, 7]),
        raw in prop::array::uniform9(0u64..7),
    ) {
        let c = ctx(p);
        let e = |i: usize| c.elem(raw[i] % p);
        let rows = [[e(0), e(1), e(2)], [e(3), e(4), e(5)], [e(6), e(7), e(8)]];
        let m = match ProjMap::new(&c, rows) {
            Ok(m) => m,
            Err(_) => return Ok(()),
        };
        let pts = proj_points(&c);
        let lines = proj_lines(&c);
        prop_assert_eq!(pts.len() as u64, p * p + p + 1);
        for &l in &lines {
            let ml = m.apply_line(&c, l);
            for &x in &pts {
                prop_assert_eq!(l.contains(&c, x), ml.contains(&c, m.apply(&c, x)));
            }
        }
    }
}
