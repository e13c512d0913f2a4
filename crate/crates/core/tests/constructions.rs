use qem_core::construct::{closing_detail, solve_shrinking};
use qem_core::verify::{
    arc_length_check, asymptotics_report, completeness_diagnostic, sensitivity, Completeness,
    GrowthLaw,
};
use qem_core::{
    boundary_check, closing_integral, construct_expanding, construct_shrinking, construct_steady,
    residuals, t_of_s, Branch, BundleSpec, Case, ChiVector, ErrorKind, FanoFactor, MetricProfile,
};

fn spec(n: &[u32], p: &[u32], q: &[i32], case: Case) -> BundleSpec {
    let f = n
        .iter()
        .zip(p)
        .zip(q)
        .map(|((&n, &p), &q)| FanoFactor::new(n, p, q))
        .collect();
    BundleSpec::new(f, case).unwrap()
}

fn steady(e_star: f64) -> MetricProfile {
    construct_steady(
        &spec(&[1, 2, 2], &[2, 3, 3], &[1, 1, 1], Case::Steady),
        2.0,
        e_star,
    )
    .unwrap()
}

fn expanding(branch: Branch) -> MetricProfile {
    construct_expanding(
        &spec(&[0, 2, 2], &[1, 3, 3], &[1, 1, 1], Case::Expanding),
        2.0,
        1.5,
        branch,
    )
    .unwrap()
}

fn shrinking(m: f64) -> MetricProfile {
    let chi = ChiVector::from_ints(&[1, 1, -1, -1]).unwrap();
    construct_shrinking(&BundleSpec::cp2_cp2_example(), m, &chi, 1e-13).unwrap()
}

fn all_profiles() -> Vec<MetricProfile> {
    vec![
        steady(8.0),
        expanding(Branch::Plus),
        expanding(Branch::Minus),
        shrinking(2.0),
        shrinking(10.0),
    ]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn consistency_constant_shared_by_every_factor() {
    for p in all_profiles() {
        let eps = p.epsilon();
        for (a, f) in p.a().iter().zip(p.spec().factors()) {
            let q2 = f64::from(f.q) * f64::from(f.q);
            let e = (8.0 * a * f64::from(f.p) - eps * q2) / (8.0 * a * a);
            assert!(
                rel(e, p.e_star()) < 1e-12,
                "{:?}: {e} vs {}",
                p.case(),
                p.e_star()
            );
        }
    }
}

#[test]
fn metric_functions_positive_on_dense_grids() {
    for p in all_profiles() {
        let top = if p.is_compact() {
            p.s_star()
        } else {
            1e3 * p.kappa0()
        };
        for k in 1..2000 {
            let s = top * f64::from(k) / 2000.0;
            assert!(p.phi(s) > 0.0);
            assert!(p.alpha(s) > 0.0, "{:?} alpha({s})", p.case());
            for i in 1..p.spec().r() {
                if p.is_compact() && i + 1 == p.spec().r() {
                    continue;
                }
                assert!(p.beta(i, s) > 0.0, "{:?} beta_{}({s})", p.case(), i + 1);
            }
        }
    }
}

#[test]
fn blow_down_derivatives_exact() {
    for p in all_profiles() {
        let [b0, b1, _] = p.beta_jet(0, 0.0);
        assert_eq!(b0, 0.0);
        assert!((b1 - 1.0).abs() < 1e-15);
        if p.is_compact() {
            let r = p.spec().r() - 1;
            let [b, db, _] = p.beta_jet(r, p.s_star());
            assert!(b.abs() < 1e-13);
            assert!((db + 1.0).abs() < 1e-13);
        }
    }
}

#[test]
fn j_invariance_holds_pointwise() {
    for p in all_profiles() {
        let rep = residuals(&p, 512).unwrap();
        assert!(rep.j_defect < 1e-12, "{:?}: {}", p.case(), rep.j_defect);
    }
}

#[test]
fn residual_grid_is_interior() {
    for p in all_profiles() {
        let rep = residuals(&p, 64).unwrap();
        assert!(rep.grid.iter().all(|&s| s > 0.0 && s < p.s_star()));
    }
    assert!(residuals(&steady(8.0), 15).is_err());
}

#[test]
fn perturbed_factor_is_detected() {
    let p = steady(8.0);
    let mut params = p.params();
    let q = p.spec().factors()[1].q;
    params.shapes[1] =
        qem_core::profile::FactorShape::from_a(params.shapes[1].a * 1.01, q, params.kappa0);
    let bad = MetricProfile::from_parts(params).unwrap();
    assert!(residuals(&bad, 512).unwrap().max_rel > 1e-3);
}

/// `κ₀` enters the moment-map equations only through `s + κ₀`, so a shifted
/// `κ₀` is caught at the boundary rather than by the residuals.
#[test]
fn every_single_parameter_perturbation_is_detected() {
    for p in [steady(8.0), expanding(Branch::Plus), shrinking(2.0)] {
        for sens in sensitivity(&p, 256, 0.01).unwrap() {
            let seen = sens.max_rel > 1e-4 || sens.boundary > 1e-4;
            assert!(seen, "{:?} {}: {sens:?}", p.case(), sens.parameter);
            if sens.parameter != "kappa0" {
                assert!(
                    sens.max_rel > 1e-4,
                    "{:?} {}: {sens:?}",
                    p.case(),
                    sens.parameter
                );
            }
        }
    }
}

#[test]
fn arc_length_equations_hold() {
    for p in [steady(8.0), expanding(Branch::Minus), shrinking(2.0)] {
        let rep = arc_length_check(&p, 16).unwrap();
        assert!(
            rep.max_rel.iter().all(|&r| r < 1e-6),
            "{:?}: {:?}",
            p.case(),
            rep.max_rel
        );
    }
}

#[test]
fn steady_arc_length_grows_linearly() {
    let p = steady(8.0);
    let k: f64 = 8.0 / 11.0;
    let slope = (t_of_s(&p, 2e4).unwrap() - t_of_s(&p, 1e4).unwrap()) / 1e4;
    assert!(rel(slope, 1.0 / k.sqrt()) < 1e-3, "{slope}");
    match completeness_diagnostic(&p).unwrap() {
        Completeness::Divergent(fit) => {
            assert_eq!(fit.law, GrowthLaw::Linear);
            assert!(rel(fit.slope, 1.0 / k.sqrt()) < 1e-2);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn expanding_arc_length_grows_logarithmically() {
    let p = expanding(Branch::Plus);
    let k: f64 = 1.0 / (2.0 * (2.0 * 4.0 + 2.0 + 1.0));
    let gap = t_of_s(&p, 1e4).unwrap() - t_of_s(&p, 1e3).unwrap();
    assert!(rel(gap, 10f64.ln() / k.sqrt()) < 1e-2, "{gap}");
    match completeness_diagnostic(&p).unwrap() {
        Completeness::Divergent(fit) => assert_eq!(fit.law, GrowthLaw::Logarithmic),
        other => panic!("{other:?}"),
    }
}

#[test]
fn compact_profiles_have_no_completeness_verdict() {
    let err = completeness_diagnostic(&shrinking(2.0)).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Input);
    assert!(asymptotics_report(&shrinking(2.0)).is_err());
}

#[test]
fn asymptotic_constants() {
    let rep = asymptotics_report(&steady(8.0)).unwrap();
    assert!(rep.relative_error < 1e-3, "{rep:?}");
    let rep = asymptotics_report(&expanding(Branch::Minus)).unwrap();
    assert!(rep.relative_error < 5e-3, "{rep:?}");
}

#[test]
fn steady_homothety() {
    let base = steady(8.0);
    for lambda in [0.5, 3.0, 10.0] {
        let scaled = steady(8.0 * lambda);
        for i in 1..3 {
            assert!(rel(scaled.beta(i, 0.0), lambda * base.beta(i, 0.0)) < 1e-12);
        }
        for s in [0.1, 1.0, 7.0, 300.0] {
            assert!(rel(scaled.alpha(lambda * s), lambda * base.alpha(s)) < 1e-11);
        }
    }
}

#[test]
fn shrinking_closes_in_unnormalized_form() {
    for m in [1.5, 2.0, 3.0, 10.0] {
        let p = shrinking(m);
        let (g, scale) = p.closing_residual().unwrap();
        assert!(g.abs() < 1e-10 * scale, "m={m}: {g} vs {scale}");
        let b = boundary_check(&p);
        assert!(b.passed(1e-11), "{b:?}");
    }
}

#[test]
fn wrong_sign_vector_is_refused() {
    let chi = ChiVector::from_ints(&[1, 1, 1, -1]).unwrap();
    let err = solve_shrinking(&BundleSpec::cp2_cp2_example(), 2.0, &chi, 1e-13).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Hypothesis);
}

/// With no interior volume the closing integrand is `½u² − E*` on
/// `[κ₀, κ₀+4]` and `E* = κ₀²/2 + 2κ₀`, so the integral is `32/3` for every
/// `E*` and there is no root.
#[test]
fn point_ends_closing_is_constant() {
    let sp = spec(&[0, 0], &[1, 1], &[1, 1], Case::Shrinking);
    let chi = ChiVector::from_ints(&[1, -1]).unwrap();
    for e in [1e-3, 0.5, 7.0, 1e3] {
        let v = closing_integral(&sp, 2.0, e, &chi).unwrap();
        assert!(rel(v, 32.0 / 3.0) < 1e-12, "{e}: {v}");
    }
    assert!(solve_shrinking(&sp, 2.0, &chi, 1e-13).is_err());
}

#[test]
fn closing_scale_dominates_value() {
    let chi = ChiVector::from_ints(&[1, 1, -1, -1]).unwrap();
    for e in [1e-2, 1.0, 1e2, 1e4] {
        let c = closing_detail(&BundleSpec::cp2_cp2_example(), 3.0, e, &chi).unwrap();
        assert!(c.scale >= c.value.abs());
        assert!(c.s_star > 0.0 && c.kappa0 > 0.0);
    }
}

#[test]
fn arc_length_increases_up_to_the_far_end() {
    let chi = ChiVector::from_ints(&[1, 1, -1, -1]).unwrap();
    for (m, tol) in [(1.5, 1e-9), (2.0, 1e-12), (10.0, 1e-13)] {
        let p = construct_shrinking(&BundleSpec::cp2_cp2_example(), m, &chi, tol).unwrap();
        let mut prev = 0.0;
        for s in qem_core::verify::chebyshev(0.0, p.s_star(), 200) {
            let t = t_of_s(&p, s).unwrap();
            assert!(t > prev, "m={m} s={s}");
            prev = t;
        }
        let total = t_of_s(&p, p.s_star()).unwrap();
        assert!(total > prev);
        assert!(p.alpha_closed_below_end(0.0) == Some(0.0));
    }
    assert!(steady(8.0).alpha_closed_below_end(1.0).is_none());
}
