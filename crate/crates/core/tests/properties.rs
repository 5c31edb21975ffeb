use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use simplexforge::codec::{
    apex_labels, build_scheme, decode_all, default_neighborhood, detect_structure, ground_truth, standard_phi,
    DetectMode, PhiParams,
};
use simplexforge::cone::{
    cone, decompose, double_cone_swap, iterated_cone, recombine, subcone, subcone_is_face, swap_cone,
};
use simplexforge::geometry::{
    apply_affine, extreme_points, hausdorff_distance, in_convex_hull, AffineMap, HilbertMetric,
};
use simplexforge::metric::{
    brute_force_isometry, convex_combine_katetov, is_katetov, normalize_diameter, validate_metric, FiniteMetricSpace,
    KatetovFunction, PointFunction,
};
use simplexforge::rational::q;
use simplexforge::sext::{build_stage, dxd, Enumeration};
use simplexforge::verify::{affine_proximity, blend, contraction, saturation_pool};
use simplexforge::{rng, Rational};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn space(seed: u64, n: usize) -> Arc<FiniteMetricSpace> {
    Arc::new(rng::space(&mut rng::seeded(seed), n, 8))
}

fn dyadic_space(seed: u64, n: usize) -> Arc<FiniteMetricSpace> {
    let values = [q(1, 4), q(1, 2), q(3, 4), q(1, 1)];
    Arc::new(rng::space_from_values(&mut rng::seeded(seed), n, &values))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rationals_are_reduced(p in -10_000i64..10_000, d in 1i64..10_000) {
        let r = q(p, d);
        let g = gcd(p, d);
        prop_assert_eq!(r.numer(), &BigInt::from(p / g));
        prop_assert_eq!(r.denom(), &BigInt::from(d / g));
        let text = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&text).unwrap(), r);
    }

    #[test]
    fn hilbert_weights_decrease(dim in 1usize..40) {
        let m = HilbertMetric::new(dim);
        let w = m.weights();
        prop_assert!(w.windows(2).all(|p| p[1] < p[0]));
        prop_assert!(m.total_weight() < Rational::one());
    }

    #[test]
    fn extreme_points_are_idempotent_and_cover(seed: u64, dim in 1usize..4, n in 1usize..9) {
        let p = rng::polytope(&mut rng::seeded(seed), dim, n, 8);
        let e = extreme_points(&p);
        prop_assert_eq!(extreme_points(&e), e.clone());
        for (v, l) in p.vertices().iter().zip(p.labels()) {
            if e.index_of(l).is_none() {
                prop_assert!(in_convex_hull(v, e.vertices()).unwrap());
            }
        }
    }

    #[test]
    fn hausdorff_is_a_metric(seed: u64, dim in 1usize..4) {
        let mut r = rng::seeded(seed);
        let [a, b, c] = [0, 1, 2].map(|i| rng::polytope(&mut r, dim, 2 + i, 6));
        let m = HilbertMetric::new(dim);
        let ab = hausdorff_distance(&a, &b, &m).unwrap();
        prop_assert_eq!(&ab, &hausdorff_distance(&b, &a, &m).unwrap());
        prop_assert!(hausdorff_distance(&a, &a, &m).unwrap().is_zero());
        let ac = hausdorff_distance(&a, &c, &m).unwrap();
        let cb = hausdorff_distance(&c, &b, &m).unwrap();
        prop_assert!(ab <= ac + cb);
    }

    #[test]
    fn invertible_affine_maps_round_trip(seed: u64, dim in 1usize..4) {
        let mut r = rng::seeded(seed);
        let p = rng::polytope(&mut r, dim, 4, 8);
        let perm = rng::permutation(&mut r, dim);
        let f = AffineMap::coordinate_permutation(&perm).unwrap();
        let back = apply_affine(&f.inverse().unwrap(), &apply_affine(&f, &p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn affine_agreement_at_vertices_extends(seed: u64, dim in 1usize..4, t in 1i64..8) {
        let mut r = rng::seeded(seed);
        let p = rng::polytope(&mut r, dim, 3, 8);
        let f = contraction(&mut r, dim, dim);
        let g = blend(&f, &contraction(&mut r, dim, dim), &q(t, 8));
        let (eps, worst) = affine_proximity(&f, &g, &p, 100, &mut r).unwrap();
        prop_assert!(worst <= eps);
    }

    #[test]
    fn generated_spaces_are_metrics(seed: u64, n in 1usize..7) {
        let x = space(seed, n);
        let m = x.matrix().to_vec();
        prop_assert!(validate_metric(x.labels().to_vec(), m, true).is_ok());
    }

    #[test]
    fn katetov_combinations_and_extensions(seed: u64, n in 2usize..6, a in 0i64..=8) {
        let x = space(seed, n);
        let alpha = q(a, 8);
        let f = KatetovFunction::try_from(PointFunction::distance_to(&x, 0).unwrap()).unwrap();
        let g = KatetovFunction::try_from(PointFunction::distance_to(&x, n - 1).unwrap()).unwrap();
        let h = convex_combine_katetov(&f, &g, &alpha).unwrap();
        prop_assert!(is_katetov(&PointFunction::new(&x, "h", h.values().to_vec()).unwrap()));
        let (ext, _) = saturation_pool(&x, &mut rng::seeded(seed), 2).unwrap();
        prop_assert!(validate_metric(ext.labels().to_vec(), ext.matrix().to_vec(), false).is_ok());
    }

    #[test]
    fn normalizing_preserves_isometry(seed: u64, n in 2usize..6, shuffle: u64) {
        let x = space(seed, n);
        let order = rng::permutation(&mut rng::seeded(shuffle), n);
        let labels = (0..n).map(|i| format!("y{i}")).collect();
        let y = x.reindexed(&order, labels).unwrap();
        let w = brute_force_isometry(&x, &y).unwrap().expect("relabeling is an isometry");
        let wn = brute_force_isometry(&normalize_diameter(&x), &normalize_diameter(&y)).unwrap();
        prop_assert_eq!(wn.map(|w| w.mapping), Some(w.mapping));
    }

    #[test]
    fn stages_embed_lipschitz_and_grow(seed: u64, n in 1usize..6) {
        let x = space(seed, n);
        let d = Enumeration::full(&x);
        let f = dxd(&x, &d).unwrap();
        let stage = build_stage(&x, &d, &f, n, n).unwrap();
        let m = HilbertMetric::new(n);
        for (i, l) in d.labels().iter().enumerate() {
            let p = stage.embed_point(l).unwrap();
            prop_assert_eq!(&p, &stage.poly().vertices()[i]);
            for (j, l2) in d.labels().iter().enumerate() {
                prop_assert_eq!(&p.coords()[j], x.dist(i, j));
                let q = stage.embed_point(l2).unwrap();
                prop_assert!(m.distance(&p, &q).unwrap() <= *x.dist(i, j));
            }
        }
        if n > 1 {
            let small = build_stage(&x, &d, &f, n - 1, n).unwrap();
            for v in small.poly().vertices() {
                prop_assert!(stage.poly().contains(v).unwrap());
            }
        }
    }

    #[test]
    fn cones_add_one_isolated_apex(seed: u64, dim in 1usize..4, n in 2usize..7) {
        let mut r = rng::seeded(seed);
        let p = rng::polytope(&mut r, dim, n, 8);
        let s = rng::hull_point(&mut r, p.vertices(), 6);
        let c = cone(&p, &s, "v1").unwrap();
        prop_assert_eq!(extreme_points(c.poly()).len(), extreme_points(&p).len() + 1);
        let apex = c.apex_point("v1").unwrap();
        prop_assert!(apex.coords()[dim].is_one());
        prop_assert!(p.labels().iter().all(|l| c.poly().vertex(l).unwrap().coords()[dim].is_zero()));
        let y = rng::hull_point(&mut r, c.poly().vertices(), 6);
        prop_assert_eq!(recombine(&c, &decompose(&c, &y).unwrap()).unwrap(), y);
    }

    #[test]
    fn double_cone_swap_is_an_involution(seed: u64, dim in 1usize..3) {
        let mut r = rng::seeded(seed);
        let p = rng::polytope(&mut r, dim, 3, 8);
        let s1 = rng::hull_point(&mut r, p.vertices(), 5);
        let s2 = rng::hull_point(&mut r, p.vertices(), 5);
        let c12 = iterated_cone(&p, &[(s1, "v1".into()), (s2, "v2".into())]).unwrap();
        let c21 = swap_cone(&c12).unwrap();
        for _ in 0..8 {
            let y = rng::hull_point(&mut r, c12.poly().vertices(), 6);
            let z = double_cone_swap(&c12, &y).unwrap();
            prop_assert_eq!(double_cone_swap(&c21, &z).unwrap(), y);
        }
        let sub = subcone(&c12, &["v1"]).unwrap();
        prop_assert!(subcone_is_face(&c12, &sub).unwrap());
    }

    #[test]
    fn scheme_windows_contain_distances(seed: u64, n in 2usize..5, depth in 0usize..30) {
        let x = dyadic_space(seed, n);
        let d = Enumeration::full(&x);
        let s = build_scheme(&x, &d, &[q(1, 2), q(1, 4), q(1, 8)], depth).unwrap();
        prop_assert_eq!(s.len(), depth);
        for t in &s.triples {
            prop_assert!(t.x != t.y);
            prop_assert!(t.window.contains(x.dist_by_label(&t.x, &t.y).unwrap()));
            prop_assert!(t.window.lo() <= t.window.hi());
        }
    }

    #[test]
    fn phi_decodes_soundly(seed: u64, n in 2usize..5, depth in 1usize..=4) {
        let x = dyadic_space(seed, n);
        let d = Enumeration::full(&x);
        let phi = standard_phi(&x, &d, None, &PhiParams::new(vec![q(1, 2), q(1, 4), q(1, 8)], depth)).unwrap();
        prop_assert_eq!(phi.dim(), n + 2 * depth + phi.markers.len());
        for m in &phi.markers.markers {
            let (l1, l2) = apex_labels(m.triple);
            let c1 = phi.blowup.cone.apex_point(&l1).unwrap();
            let c2 = phi.blowup.cone.apex_point(&l2).unwrap();
            prop_assert!(m.q.is_positive() && m.q < Rational::one());
            prop_assert_eq!(&c1.lerp(c2, &m.q).unwrap(), &m.point);
            prop_assert!(!in_convex_hull(&m.point, phi.stage().poly().lifted(m.point.dim() - n).vertices()).unwrap());
        }
        let s = detect_structure(&phi, DetectMode::Strict).unwrap();
        prop_assert_eq!(s.partition(), ground_truth(&phi));
        let nb = default_neighborhood(&phi, &s).unwrap();
        for e in decode_all(&phi, &s, &nb).unwrap() {
            let coded = phi.scheme().occurrences(&e.pair[0], &e.pair[1]) > 0;
            prop_assert_eq!(e.interval.is_determined(), coded);
            if coded {
                prop_assert!(e.contains);
                let truth = x.dist_by_label(&e.pair[0], &e.pair[1]).unwrap();
                prop_assert!(e.interval.contains(truth));
            }
        }
    }
}

#[test]
fn lifted_stage_keeps_vertex_order() {
    let x = dyadic_space(7, 3);
    let d = Enumeration::full(&x);
    let stage = build_stage(&x, &d, &dxd(&x, &d).unwrap(), 3, 3).unwrap();
    let lifted = stage.poly().lifted(2);
    for (v, w) in stage.poly().vertices().iter().zip(lifted.vertices()) {
        assert_eq!(&w.coords()[..3], v.coords());
        assert!(w.coords()[3..].iter().all(Rational::is_zero));
    }
}
