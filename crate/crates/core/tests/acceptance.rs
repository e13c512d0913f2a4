//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qem_core::construct::{closing_detail, solve_shrinking};
use qem_core::genpoly::RationalPoly;
use qem_core::verify::{completeness_diagnostic, oracle_equivalence};
use qem_core::{
    boundary_check, closing_integral, construct_expanding, construct_steady, futaki_integral,
    inv_integral, residuals, s_star_compact, Branch, BundleSpec, Case, ChiVector, FanoFactor,
    MetricProfile,
};
use rand::{Rng, SeedableRng};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

/// Unwraps or ends the criterion with a FAIL line naming the error.
macro_rules! attempt {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return outcome(false, format!("{}: {err}", stringify!($e))),
        }
    };
}

const PROFILE_COUNT: usize = 7;

fn missing_profiles(profiles: &[(String, MetricProfile)]) -> Option<Outcome> {
    (profiles.len() < PROFILE_COUNT).then(|| {
        outcome(
            false,
            format!(
                "only {} of {PROFILE_COUNT} profiles constructed",
                profiles.len()
            ),
        )
    })
}

fn spec(n: &[u32], p: &[u32], q: &[i32], case: Case) -> BundleSpec {
    let f = n
        .iter()
        .zip(p)
        .zip(q)
        .map(|((&n, &p), &q)| FanoFactor::new(n, p, q))
        .collect();
    BundleSpec::new(f, case).expect("valid bundle")
}

fn worked_chi() -> ChiVector {
    ChiVector::from_ints(&[1, 1, -1, -1]).unwrap()
}

fn steady_profile() -> qem_core::Result<MetricProfile> {
    construct_steady(
        &spec(&[1, 2, 2], &[2, 3, 3], &[1, 1, 1], Case::Steady),
        2.0,
        8.0,
    )
}

fn expanding_profile(branch: Branch) -> qem_core::Result<MetricProfile> {
    construct_expanding(
        &spec(&[0, 2, 2], &[1, 3, 3], &[1, 1, 1], Case::Expanding),
        2.0,
        1.5,
        branch,
    )
}

struct Shrinkers {
    profiles: Vec<(f64, MetricProfile, f64, Duration)>,
    failures: Vec<String>,
}

fn shrinkers() -> Shrinkers {
    let sp = BundleSpec::cp2_cp2_example();
    let mut profiles = Vec::new();
    let mut failures = Vec::new();
    for m in [1.5, 2.0, 3.0, 10.0] {
        let start = Instant::now();
        match solve_shrinking(&sp, m, &worked_chi(), 1e-13) {
            Ok(sol) => profiles.push((m, sol.profile, sol.closing.relative(), start.elapsed())),
            Err(e) => failures.push(format!("m={m}: {e}")),
        }
    }
    Shrinkers { profiles, failures }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let sp = BundleSpec::cp2_cp2_example();
    let futaki = futaki_integral(&sp).value;
    let inv = attempt!(inv_integral(&sp, &worked_chi())).value;
    let elapsed = start.elapsed();
    let want_f = RationalPoly::from_ratios(&[(39, 5)]).coeffs()[0].clone();
    let want_i = -want_f.clone();
    outcome(
        futaki == want_f && inv == want_i && elapsed < Duration::from_secs(1),
        format!("futaki = {futaki}, inv = {inv}, {elapsed:?}"),
    )
}

fn criterion_2(sh: &Shrinkers) -> Outcome {
    let mut ok = sh.failures.is_empty();
    let mut parts = sh.failures.clone();
    for (m, prof, closing_rel, elapsed) in &sh.profiles {
        let start = Instant::now();
        let rep = attempt!(residuals(prof, 512));
        let total = *elapsed + start.elapsed();
        let pass = prof.e_star() > 0.0
            && closing_rel.abs() < 1e-10
            && rep.max_rel < 1e-8
            && total < Duration::from_secs(10);
        ok &= pass;
        parts.push(format!(
            "m={m}: E*={:.12}, closing/scale={closing_rel:.1e}, max_rel={:.1e}, {total:.2?}",
            prof.e_star(),
            rep.max_rel
        ));
    }
    outcome(ok, parts.join("; "))
}

/// Every profile that could be built; construction failures are reported
/// by the criteria that own them.
fn all_profiles(sh: &Shrinkers) -> Vec<(String, MetricProfile)> {
    let mut v = Vec::new();
    let built = [
        ("steady", steady_profile()),
        ("expanding+", expanding_profile(Branch::Plus)),
        ("expanding-", expanding_profile(Branch::Minus)),
    ];
    for (name, p) in built {
        if let Ok(p) = p {
            v.push((String::from(name), p));
        }
    }
    for (m, p, _, _) in &sh.profiles {
        v.push((format!("shrinking m={m}"), p.clone()));
    }
    v
}

fn criterion_3(profiles: &[(String, MetricProfile)]) -> Outcome {
    if let Some(o) = missing_profiles(profiles) {
        return o;
    }
    let mut worst: f64 = 0.0;
    let mut worst_at = String::new();
    for (name, p) in profiles {
        let b = boundary_check(p);
        if b.max_error >= worst {
            worst = b.max_error;
            worst_at = name.clone();
        }
    }
    outcome(
        worst < 1e-11,
        format!("max scaled boundary error {worst:.1e} ({worst_at})"),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for n in 0..4u32 {
        for _ in 0..20 {
            let k: f64 = rng.gen_range(f64::EPSILON..=10.0);
            let target = 4.0 * (f64::from(n) + 1.0);
            worst = worst.max((s_star_compact(k, n, n) - target).abs() / target);
        }
    }
    outcome(worst < 1e-13, format!("max relative deviation {worst:.1e}"))
}

fn criterion_5() -> Outcome {
    let p = attempt!(steady_profile());
    let rep = attempt!(residuals(&p, 512));
    let betas_positive = (1..3).all(|i| p.beta(i, 0.0) > 0.0);
    let k = 8.0 / (2.0 * 5.0 + 2.0 - 1.0);
    let a = p.alpha(1e4);
    let rel = (a - k).abs() / k;
    outcome(
        rep.max_rel < 1e-9 && betas_positive && rel < 1e-3,
        format!(
            "max_rel={:.1e}, beta_i(0)>0: {betas_positive}, alpha(1e4)={a:.12} vs K={k:.12}",
            rep.max_rel
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let k = 1.0 / (2.0 * (2.0 * 4.0 + 2.0 + 1.0));
    for branch in [Branch::Plus, Branch::Minus] {
        let p = attempt!(expanding_profile(branch));
        let rep = attempt!(residuals(&p, 512));
        let ratio = p.alpha(1e4) / 1e8;
        let rel = (ratio - k).abs() / k;
        let divergent = attempt!(completeness_diagnostic(&p)).is_divergent();
        let pass = rep.max_rel < 1e-9 && rel < 5e-3 && divergent;
        ok &= pass;
        parts.push(format!(
            "{}: max_rel={:.1e}, alpha/s^2 at 1e4 off by {rel:.1e}, divergent={divergent}",
            branch.name(),
            rep.max_rel
        ));
    }
    let steady_divergent =
        attempt!(completeness_diagnostic(&attempt!(steady_profile()))).is_divergent();
    ok &= steady_divergent;
    parts.push(format!("steady divergent={steady_divergent}"));
    outcome(ok, parts.join("; "))
}

fn criterion_7() -> Outcome {
    let sp = BundleSpec::cp2_cp2_example();
    let chi = worked_chi();
    let s = chi.parity_sign(&sp);
    let lo = attempt!(closing_integral(&sp, 2.0, 1e-3, &chi));
    let hi = attempt!(closing_integral(&sp, 2.0, 1e6, &chi));
    let inv_sign = i32::from(attempt!(inv_integral(&sp, &chi)).sign);
    let lo_ok = lo.signum() as i32 == s && s == 1;
    let hi_ok = hi.signum() as i32 == s * inv_sign && s * inv_sign == -1;
    let scale = attempt!(closing_detail(&sp, 2.0, 1e6, &chi)).scale;
    outcome(
        lo_ok && hi_ok,
        format!("F(1e-3)={lo:.3e} (S={s}), F(1e6)/scale={:.3e}", hi / scale),
    )
}

fn criterion_8(profiles: &[(String, MetricProfile)]) -> Outcome {
    if let Some(o) = missing_profiles(profiles) {
        return o;
    }
    let mut worst: f64 = 0.0;
    let mut worst_raw: f64 = 0.0;
    let mut worst_at = String::new();
    for (name, p) in profiles {
        let rep = attempt!(residuals(p, 512));
        worst_raw = worst_raw.max(rep.mu_spread_raw);
        if rep.mu_spread >= worst {
            worst = rep.mu_spread;
            worst_at = name.clone();
        }
    }
    outcome(
        worst < 1e-9,
        format!(
            "max |mu - kappa1^2 E*| per summand scale = {worst:.1e} ({worst_at}); relative to kappa1^2 E* alone {worst_raw:.1e}"
        ),
    )
}

fn criterion_9(profiles: &[(String, MetricProfile)]) -> Outcome {
    if let Some(o) = missing_profiles(profiles) {
        return o;
    }
    let mut worst: f64 = 0.0;
    let mut worst_at = String::new();
    for (name, p) in profiles {
        let rep = attempt!(oracle_equivalence(p, 32));
        if rep.max_rel >= worst {
            worst = rep.max_rel;
            worst_at = name.clone();
        }
    }
    outcome(
        worst < 1e-8,
        format!("max closed-form/quadrature deviation {worst:.1e} ({worst_at})"),
    )
}

fn main() -> ExitCode {
    let sh = shrinkers();
    let profiles = all_profiles(&sh);
    let results = [
        ("1 futaki and admissibility integrals", criterion_1()),
        ("2 shrinking existence", criterion_2(&sh)),
        ("3 boundary conditions", criterion_3(&profiles)),
        ("4 s* identity", criterion_4()),
        ("5 steady construction", criterion_5()),
        ("6 expanding construction", criterion_6()),
        ("7 sign-change bracket", criterion_7()),
        ("8 integrability constant", criterion_8(&profiles)),
        ("9 oracle equivalence", criterion_9(&profiles)),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        if !o.passed {
            failed += 1;
        }
        println!("{tag} criterion {name}: {}", o.detail);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
