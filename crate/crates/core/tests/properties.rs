use proptest::prelude::*;
use qem_core::construct::expanding_upper_bound;
use qem_core::{
    a_coeff, boundary_check, construct_expanding, construct_steady, kappa0_from_consistency,
    residuals, s_star_compact, Branch, BundleSpec, Case, FanoFactor, GenPoly, RationalPoly, Sign,
};

fn steady_spec() -> BundleSpec {
    let f = vec![
        FanoFactor::new(1, 2, 1),
        FanoFactor::new(2, 3, 1),
        FanoFactor::new(2, 3, 1),
    ];
    BundleSpec::new(f, Case::Steady).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn a_coeff_satisfies_consistency(p in 1u32..12, q in -6i32..=6, e in 1e-3f64..1e3, minus in any::<bool>()) {
        prop_assume!(q != 0);
        let chi = if minus { Sign::Minus } else { Sign::Plus };
        for case in [Case::Steady, Case::Shrinking] {
            let a = a_coeff(p, q, e, case, chi).unwrap();
            let eps = case.epsilon();
            let q2 = f64::from(q) * f64::from(q);
            let back = (8.0 * a * f64::from(p) - eps * q2) / (8.0 * a * a);
            prop_assert!(rel(back, e) < 1e-12, "{case:?}: {back} vs {e}");
        }
    }

    #[test]
    fn kappa0_satisfies_consistency(n1 in 0u32..6, e in 1e-3f64..1e3) {
        for case in [Case::Steady, Case::Shrinking] {
            let k = kappa0_from_consistency(n1, e, case, Branch::Plus).unwrap();
            prop_assert!(k > 0.0);
            let back = 0.5 * k * (4.0 * (f64::from(n1) + 1.0) - case.epsilon() * k);
            prop_assert!(rel(back, e) < 1e-12);
        }
    }

    #[test]
    fn symmetric_ends_give_fixed_length(n in 0u32..8, k in 1e-6f64..1e3) {
        let s = s_star_compact(k, n, n);
        prop_assert!(rel(s, 4.0 * (f64::from(n) + 1.0)) < 1e-12);
    }

    #[test]
    fn asymmetric_ends_give_positive_length(n1 in 0u32..8, nr in 0u32..8, k in 1e-6f64..1e3) {
        prop_assert!(s_star_compact(k, n1, nr) > 0.0);
    }

    #[test]
    fn steady_profiles_are_smooth_and_solve_the_equations(e in 0.1f64..100.0) {
        let p = construct_steady(&steady_spec(), 2.0, e).unwrap();
        prop_assert!(boundary_check(&p).passed(1e-11));
        let rep = residuals(&p, 64).unwrap();
        prop_assert!(rep.max_rel < 1e-9, "{}", rep.max_rel);
        prop_assert!(rep.mu_spread < 1e-9);
    }

    #[test]
    fn steady_profiles_any_dimension_parameter(m in 1.05f64..12.0) {
        let p = construct_steady(&steady_spec(), m, 8.0).unwrap();
        prop_assert!(boundary_check(&p).passed(1e-11));
        prop_assert!(residuals(&p, 64).unwrap().max_rel < 1e-9);
    }

    #[test]
    fn expanding_window_profiles_solve_the_equations(frac in 0.05f64..0.95, minus in any::<bool>()) {
        let f = vec![FanoFactor::new(0, 1, 1), FanoFactor::new(2, 3, 1), FanoFactor::new(2, 3, 1)];
        let sp = BundleSpec::new(f, Case::Expanding).unwrap();
        let e = frac * expanding_upper_bound(&sp);
        let branch = if minus { Branch::Minus } else { Branch::Plus };
        let p = construct_expanding(&sp, 2.0, e, branch).unwrap();
        prop_assert!(boundary_check(&p).passed(1e-11));
        prop_assert!(residuals(&p, 64).unwrap().max_rel < 1e-9);
    }

    #[test]
    fn genpoly_product_evaluates_pointwise(
        a in prop::collection::vec(-4.0f64..4.0, 1..6),
        b in prop::collection::vec(-4.0f64..4.0, 1..6),
        sa in 0.0f64..2.0,
        s in 0.0f64..5.0,
    ) {
        let k0 = 0.75;
        let pa = GenPoly::new(sa, a.clone(), k0);
        let pb = GenPoly::new(0.0, b.clone(), k0);
        let prod = pa.mul(&pb).unwrap();
        let scale = pa.abs_eval_u(s + k0) * pb.abs_eval_u(s + k0);
        prop_assert!((prod.eval(s) - pa.eval(s) * pb.eval(s)).abs() <= 1e-14 * scale.max(1.0));
    }

    #[test]
    fn antiderivative_differentiates_back(c in prop::collection::vec(-3.0f64..3.0, 1..6), sigma in 0.1f64..3.0, s in 0.1f64..4.0) {
        let k0 = 0.5;
        let p = GenPoly::new(sigma, c, k0);
        let f = p.antiderivative_from(0.0).unwrap();
        prop_assert_eq!(f.eval(0.0), 0.0);
        let h = 1e-4;
        let fd = (f.eval(s + h) - f.eval(s - h)) / (2.0 * h);
        let scale = p.abs_eval_u(s + k0).max(1.0);
        prop_assert!((fd - p.eval(s)).abs() < 1e-6 * scale);
    }

    #[test]
    fn rational_integral_is_additive(
        c in prop::collection::vec(-20i64..20, 1..6),
        x0 in -5i64..5, x1 in -5i64..5, x2 in -5i64..5,
    ) {
        let poly = RationalPoly::from_ratios(&c.iter().map(|&v| (v, 7)).collect::<Vec<_>>());
        let r = |v: i64| RationalPoly::from_ratios(&[(v, 3)]).coeffs().first().cloned().unwrap_or_default();
        let (a, b, d) = (r(x0), r(x1), r(x2));
        prop_assert_eq!(poly.integrate(&a, &b) + poly.integrate(&b, &d), poly.integrate(&a, &d));
    }
}
