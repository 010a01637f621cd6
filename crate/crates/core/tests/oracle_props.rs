use fsgap::criteria::{default_lambda, kset, LatticeKind};
use fsgap::profiles::CoefficientProfile;
use fsgap::weight_oracle::{
    build_torus, census_vs_kset, classify_pair, enumerate_boxes, run_census, ShapeClass,
};
use proptest::prelude::*;

fn mirrored(half: &[i64], len: usize) -> Vec<i64> {
    let mut acc = 0;
    let mut v: Vec<i64> = half[..len.div_ceil(2)]
        .iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect();
    let tail: Vec<i64> = v[..len / 2].iter().rev().copied().collect();
    v.extend(tail);
    v
}

fn profile(ell: usize) -> impl Strategy<Value = CoefficientProfile> {
    (
        proptest::collection::vec(0i64..4, ell + 1),
        proptest::collection::vec(0i64..4, ell + 2),
        1i64..4,
        1i64..4,
    )
        .prop_map(move |(mut hc, mut hd, c0, d0)| {
            hc[0] = c0;
            hd[0] = d0;
            CoefficientProfile::from_integers(&mirrored(&hc, ell), &mirrored(&hd, ell + 1)).unwrap()
        })
}

fn small_profile() -> impl Strategy<Value = CoefficientProfile> {
    prop_oneof![profile(2), profile(3)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn square_census_matches_closed_form(p in small_profile()) {
        let lat = LatticeKind::Hypercubic { dim: 2 };
        let (_, c) = run_census(lat, &p, None).unwrap();
        let k = kset(lat, &p).unwrap();
        let rep = census_vs_kset(&c, &k).unwrap();
        prop_assert!(rep.all_equal, "{:?}", rep);
        if k.feasible {
            prop_assert!(rep.residual_ok, "{:?}", rep);
        }
    }

    #[test]
    fn triangular_census_matches_closed_form(p in small_profile()) {
        let lat = LatticeKind::Triangular;
        let (_, c) = run_census(lat, &p, None).unwrap();
        let k = kset(lat, &p).unwrap();
        let rep = census_vs_kset(&c, &k).unwrap();
        prop_assert!(rep.all_equal, "{:?}", rep);
        if k.feasible {
            prop_assert!(rep.residual_ok, "{:?}", rep);
        }
    }

    #[test]
    fn diagonal_is_translation_invariant_and_equals_k0(p in small_profile(), which in 0usize..3) {
        let lat = [LatticeKind::Hypercubic { dim: 2 }, LatticeKind::Honeycomb, LatticeKind::Triangular][which];
        let (_, c) = run_census(lat, &p, None).unwrap();
        let d = c.diagonal_uniform();
        prop_assert!(d.is_some());
        let k = kset(lat, &p).unwrap();
        prop_assert_eq!(d.as_ref(), k.get("K0"));
    }

    #[test]
    fn collinear_weight_decreases_with_distance(p in small_profile()) {
        let lat = LatticeKind::Hypercubic { dim: 2 };
        let l = 2 * p.ell + 3;
        let g = build_torus(lat, l).unwrap();
        let boxes = enumerate_boxes(&g, p.ell, &p).unwrap();
        let c = fsgap::weight_oracle::census(&g, &boxes).unwrap();
        for class in 0..2 {
            let dir = |z: i64| if class == 0 { [z, 0] } else { [0, z] };
            let base = g.edge_id(&[0, 0], class);
            let w: Vec<_> = (1..=(l as i64) / 2)
                .map(|z| c.pair_weight(base, g.edge_id(&dir(z), class)))
                .collect();
            for pair in w.windows(2) {
                prop_assert!(pair[1] <= pair[0]);
            }
            // parallel pairs: decreasing in the transverse and longitudinal offsets
            for x in 0..3i64 {
                for y in 1..3i64 {
                    let at = |x: i64, y: i64| {
                        let off = if class == 0 { [x, y] } else { [y, x] };
                        c.pair_weight(base, g.edge_id(&off, class))
                    };
                    prop_assert!(at(x, y + 1) <= at(x, y));
                    prop_assert!(at(x + 1, y) <= at(x, y));
                }
            }
        }
    }

    #[test]
    fn pair_weights_symmetric(p in small_profile(), e1 in 0usize..98, e2 in 0usize..98, tx in 0i64..7, ty in 0i64..7) {
        let lat = LatticeKind::Hypercubic { dim: 2 };
        let g = build_torus(lat, 7).unwrap();
        let boxes = enumerate_boxes(&g, p.ell, &p).unwrap();
        let c = fsgap::weight_oracle::census(&g, &boxes).unwrap();
        let base = |e: usize| g.vertices[g.edges[e].a].clone();
        let class = |e: usize| g.edges[e].class;
        let w = c.pair_weight(e1, e2);
        prop_assert_eq!(&w, &c.pair_weight(e2, e1));
        let shift = |e: usize| {
            let b = base(e);
            g.edge_id(&[b[0] + tx, b[1] + ty], class(e))
        };
        prop_assert_eq!(&w, &c.pair_weight(shift(e1), shift(e2)));
        // reflection x -> -x
        let reflect = |e: usize| {
            let b = base(e);
            let x = if class(e) == 0 { -b[0] - 1 } else { -b[0] };
            g.edge_id(&[x, b[1]], class(e))
        };
        prop_assert_eq!(&w, &c.pair_weight(reflect(e1), reflect(e2)));
        prop_assert_eq!(classify_pair(e1, e2, &g), classify_pair(reflect(e1), reflect(e2), &g));
    }
}

#[test]
fn honeycomb_shared_constants_match() {
    let lat = LatticeKind::Honeycomb;
    for ell in [2, 3] {
        for p in [
            CoefficientProfile::uniform(ell).unwrap(),
            CoefficientProfile::quadratic(ell, default_lambda(lat, ell)).unwrap(),
        ] {
            let (_, c) = run_census(lat, &p, None).unwrap();
            let rep = census_vs_kset(&c, &kset(lat, &p).unwrap()).unwrap();
            for name in ["K0", "K2", "K3"] {
                assert!(rep.row(name).unwrap().equal, "{name} ell={ell}");
            }
            assert!(rep.residual_ok);
            let adjacent = c
                .shape_max
                .keys()
                .filter(|s| matches!(s, ShapeClass::HoneycombAdjacent { .. }))
                .count();
            assert_eq!(adjacent, 6);
        }
    }
}

#[test]
fn honeycomb_adjacent_coefficient_from_box_geometry() {
    // sum over the three rotations of the six adjacent shapes, per the box drawing:
    // 2[(Σd²)(Σcd) - c0 d0³] + (Σcd)²
    let lat = LatticeKind::Honeycomb;
    for ell in [2, 3] {
        let p = CoefficientProfile::quadratic(ell, default_lambda(lat, ell)).unwrap();
        let (_, c) = run_census(lat, &p, None).unwrap();
        let sd2: fsgap::scalars::QuadraticScalar = p.d.iter().map(|x| x * x).sum();
        let scd: fsgap::scalars::QuadraticScalar = p.c.iter().zip(&p.d).map(|(a, b)| a * b).sum();
        let corr = &p.c[0] * &p.d[0].pow(3);
        let two = fsgap::scalars::QuadraticScalar::from_integer(2);
        let expect = &(&two * &(&(&sd2 * &scd) - &corr)) + &(&scd * &scd);
        assert_eq!(c.adjacent_max().unwrap(), expect, "ell={ell}");
    }
}
