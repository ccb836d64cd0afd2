use std::f64::consts::PI;

use proptest::prelude::*;
use trinoid_core::moduli::{
    classify, fh_attach_hemisphere, irreducibility_form, irreducibility_product, irreducible_exists,
    irreducible_exists_reduced, reduce_angles,
};
use trinoid_core::{eigenvalues_2x2, project_h3, AngleTriple, Complex64, Mat2C, ModuliStatus, Target, Tolerances};

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn sl2() -> impl Strategy<Value = Mat2C> {
    [complex(), complex(), complex(), complex()]
        .prop_filter_map("invertible", |e| Mat2C::from_array(e).normalize_det().filter(|m| m.norm() < 1e3))
}

fn su2() -> impl Strategy<Value = Mat2C> {
    (complex(), complex()).prop_filter_map("nonzero", |(a, b)| {
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        (r > 1e-3).then(|| {
            let (a, b) = (a / r, b / r);
            Mat2C::new(a, -b.conj(), b, a.conj())
        })
    })
}

fn angles() -> impl Strategy<Value = AngleTriple> {
    [0.001..4.0 * PI, 0.001..4.0 * PI, 0.001..4.0 * PI].prop_filter_map("valid", |b| AngleTriple::from_array(b).ok())
}

/// Integer triples with odd sum and strict triangle inequality.
fn second_family() -> impl Strategy<Value = AngleTriple> {
    [1i64..40, 1i64..40, 1i64..40].prop_filter_map("second family", |n| {
        let sum: i64 = n.iter().sum();
        let ok = sum % 2 == 1 && n.iter().all(|&x| 2 * x < sum);
        ok.then(|| AngleTriple::from_pi_multiples(n[0] as f64, n[1] as f64, n[2] as f64).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn eigenvalues_reproduce_trace_and_det(m in sl2()) {
        let (l1, l2) = eigenvalues_2x2(&m);
        prop_assert!((l1 + l2 - m.trace()).norm() < 1e-9 * (1.0 + m.norm()));
        prop_assert!((l1 * l2 - m.det()).norm() < 1e-9 * (1.0 + m.norm().powi(2)));
    }

    #[test]
    fn projection_ignores_right_su2_factors(f in sl2(), u in su2()) {
        let p = project_h3(&f, 1e-9).unwrap();
        let q = project_h3(&(f * u), 1e-9).unwrap();
        prop_assert!((p.minkowski_norm() - 1.0).abs() < 1e-6 * p.minkowski[0].powi(2));
        prop_assert!(p.ball_norm() < 1.0);
        prop_assert!(p.ball_dist(&q) < 1e-9 * f.norm().powi(2));
    }

    #[test]
    fn isometries_preserve_distance(f in sl2(), g in sl2(), h in sl2()) {
        let (p, q) = (project_h3(&f, 1e-9).unwrap(), project_h3(&g, 1e-9).unwrap());
        let (hp, hq) = (project_h3(&(h * f), 1e-8).unwrap(), project_h3(&(h * g), 1e-8).unwrap());
        let d = p.distance(&q);
        prop_assume!(d < 8.0);
        prop_assert!((d - hp.distance(&hq)).abs() < 1e-6 * (1.0 + d));
    }

    #[test]
    fn irreducibility_criteria_agree(a in angles()) {
        let f = irreducibility_form(&a);
        let s = reduce_angles(&a).iter().sum::<f64>();
        prop_assume!((f - 1.0).abs() > 1e-9 && (s - PI).abs() > 1e-9);
        prop_assert_eq!(irreducible_exists(&a), irreducible_exists_reduced(&a));
        prop_assert!((f - 1.0 - 4.0 * irreducibility_product(a.radians())).abs() < 1e-10);
    }

    #[test]
    fn classification_is_permutation_invariant(a in angles(), k in 0usize..6) {
        let b = a.radians();
        let p = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]][k];
        let q = AngleTriple::from_array(p.map(|i| b[i])).unwrap();
        let tol = Tolerances::default();
        for target in [Target::H3, Target::S2] {
            prop_assert_eq!(classify(&a, target, &tol).status, classify(&q, target, &tol).status);
        }
    }

    #[test]
    fn hemisphere_keeps_second_family(a in second_family(), e in 0usize..3) {
        let tol = Tolerances::default();
        let (i, j) = [(0, 1), (0, 2), (1, 2)][e];
        prop_assert_eq!(classify(&a, Target::S2, &tol).status, ModuliStatus::ReducibleC2);
        let b = fh_attach_hemisphere(&a, i, j).unwrap();
        prop_assert_eq!(classify(&b, Target::S2, &tol).status, ModuliStatus::ReducibleC2);
    }
}
