//! Consistency conditions and the three constructions.
//!
//! With `u = s + κ₀` every `β_i` is `A_i u² − q_i²/(4A_i)`, `φ = κ₁u`, and
//! α is the explicit quotient `∫₀^s V u^(m−2)(E* + (ε/2)u²) / (V u^(m−1))`.
//! The constants `κ₀` and `A_i` follow from the shared value `E*`.

use alloc::format;
use alloc::vec::Vec;

use crate::bundle::{validate_bundle, BundleSpec, Case, ChiVector, ExpandingRegime, Sign};
use crate::error::{check_m, Error, Result};
use crate::genpoly::{Antiderivative, GenPoly};
use crate::invariants::inv_integral;
use crate::math::sqrt;
use crate::profile::{alpha_integrand, volume_poly, FactorShape, MetricProfile, ProfileParams};
use crate::root::{bisect, decade_scan, Root};

/// Choice of root for `κ₀` in the expanding case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

/// `κ₀` solving `E* = (κ₀/2)(4(n₁+1) − εκ₀)`.
///
/// The branch only matters for the expanding case; the shrinking case
/// takes the positive root.
pub fn kappa0_from_consistency(n1: u32, e_star: f64, case: Case, branch: Branch) -> Result<f64> {
    if !e_star.is_finite() {
        return Err(Error::NonFinite("E*"));
    }
    let a = f64::from(n1) + 1.0;
    match case {
        Case::Steady => {
            if e_star <= 0.0 {
                return Err(Error::EStarWindow {
                    e_star,
                    reason: "steady case needs E* > 0",
                });
            }
            Ok(e_star / (2.0 * a))
        }
        Case::Expanding => {
            let disc = a * a - 0.5 * e_star;
            if disc < 0.0 {
                return Err(Error::NegativeDiscriminant {
                    factor: None,
                    discriminant: disc,
                });
            }
            let root = sqrt(disc);
            match branch {
                Branch::Plus => Ok(2.0 * (a + root)),
                Branch::Minus => {
                    if e_star <= 0.0 {
                        return Err(Error::EStarWindow {
                            e_star,
                            reason: "minus branch needs E* > 0",
                        });
                    }
                    Ok(e_star / (a + root))
                }
            }
        }
        Case::Shrinking => {
            if e_star <= 0.0 {
                return Err(Error::EStarWindow {
                    e_star,
                    reason: "shrinking case needs E* > 0",
                });
            }
            Ok(2.0 * e_star / (2.0 * a + sqrt(4.0 * a * a + 2.0 * e_star)))
        }
    }
}

/// `A` solving `E* = (8Ap − εq²)/(8A²)` for one factor.
///
/// Steady: `p/E*`. Expanding: the positive root. Shrinking: the root
/// selected by `chi`, negative for `Sign::Minus`.
pub fn a_coeff(p: u32, q: i32, e_star: f64, case: Case, chi: Sign) -> Result<f64> {
    if e_star == 0.0 || !e_star.is_finite() {
        return Err(Error::EStarWindow {
            e_star,
            reason: "E* must be finite and non-zero",
        });
    }
    let p = f64::from(p);
    let q2 = f64::from(q) * f64::from(q);
    match case {
        Case::Steady => Ok(p / e_star),
        Case::Expanding => {
            let disc = p * p - 0.5 * e_star * q2;
            if disc < 0.0 {
                return Err(Error::NegativeDiscriminant {
                    factor: None,
                    discriminant: disc,
                });
            }
            if e_star > 0.0 {
                Ok((p + sqrt(disc)) / (2.0 * e_star))
            } else {
                Ok(q2 / (4.0 * (p + sqrt(disc))))
            }
        }
        Case::Shrinking => {
            let disc = p * p + 0.5 * e_star * q2;
            if disc < 0.0 {
                return Err(Error::NegativeDiscriminant {
                    factor: None,
                    discriminant: disc,
                });
            }
            match chi {
                Sign::Plus => Ok((p + sqrt(disc)) / (2.0 * e_star)),
                Sign::Minus => Ok(-q2 / (4.0 * (p + sqrt(disc)))),
            }
        }
    }
}

/// Right endpoint `s*` of the compact moment interval.
pub fn s_star_compact(kappa0: f64, n1: u32, nr: u32) -> f64 {
    let a = f64::from(n1) + 1.0;
    let b = f64::from(nr) + 1.0;
    sqrt(kappa0 * (4.0 * a + kappa0) + 4.0 * b * b) - kappa0 + 2.0 * b
}

/// `V = ∏ β_i^(n_i)` from coefficients `A_i`.
pub fn build_v(spec: &BundleSpec, a: &[f64], kappa0: f64) -> GenPoly {
    let shapes: Vec<FactorShape> = a
        .iter()
        .zip(spec.factors())
        .map(|(&ai, f)| FactorShape::from_a(ai, f.q, kappa0))
        .collect();
    volume_poly(spec, &shapes, kappa0)
}

/// The α numerator `∫₀^s V u^(m−2)(E* + (ε/2)u²)` in closed form.
pub fn build_alpha(v: &GenPoly, m: f64, epsilon: f64, e_star: f64) -> Result<Antiderivative> {
    check_m(m)?;
    alpha_integrand(v, m, epsilon, e_star).antiderivative_from(0.0)
}

fn require(spec: &BundleSpec, m: f64, case: Case) -> Result<()> {
    let report = validate_bundle(spec, m)?;
    if report.admissible(case) {
        Ok(())
    } else {
        Err(Error::Hypothesis(report.failure_summary(case.name())))
    }
}

fn check_betas(profile: &MetricProfile, points: &[f64]) -> Result<()> {
    for i in 0..profile.shapes().len() {
        let collapsing = (i == 0 && profile.shapes()[i].offset == 0.0)
            || (i + 1 == profile.shapes().len() && profile.is_compact());
        for &s in points {
            let at_end = s == 0.0 || (profile.is_compact() && s == profile.s_star());
            if collapsing && at_end {
                continue;
            }
            if !(profile.beta(i, s) > 0.0) {
                return Err(Error::BetaNotPositive { index: i, s });
            }
        }
    }
    Ok(())
}

/// Interior sample points used for positivity checks.
fn positivity_grid(profile: &MetricProfile) -> Vec<f64> {
    let n = 256;
    if profile.is_compact() {
        let s_star = profile.s_star();
        (1..n).map(|k| s_star * k as f64 / n as f64).collect()
    } else {
        let top = 50.0 * profile.kappa0().max(1.0);
        let mut v: Vec<f64> = (1..=n).map(|k| top * k as f64 / n as f64).collect();
        v.extend((1..=12).map(|k| top * crate::math::powi(10.0, k)));
        v
    }
}

fn check_alpha(profile: &MetricProfile) -> Result<()> {
    for s in positivity_grid(profile) {
        let a = profile.alpha(s);
        if !a.is_finite() {
            return Err(Error::NonFinite("alpha"));
        }
        if a <= 0.0 {
            return Err(Error::AlphaNotPositive { s });
        }
    }
    Ok(())
}

fn finish(profile: MetricProfile) -> Result<MetricProfile> {
    let mut ends = alloc::vec![0.0];
    if profile.is_compact() {
        ends.push(profile.s_star());
    }
    check_betas(&profile, &ends)?;
    check_alpha(&profile)?;
    Ok(profile)
}

/// Steady construction (`ε = 0`) for a given `E* > 0`.
pub fn construct_steady(spec: &BundleSpec, m: f64, e_star: f64) -> Result<MetricProfile> {
    check_m(m)?;
    require(spec, m, Case::Steady)?;
    let kappa0 = kappa0_from_consistency(spec.first().n, e_star, Case::Steady, Branch::Plus)?;
    let mut shapes = Vec::with_capacity(spec.r());
    shapes.push(FactorShape::collapsing_at_start(kappa0));
    for (i, f) in spec.factors().iter().enumerate().skip(1) {
        let a =
            a_coeff(f.p, f.q, e_star, Case::Steady, Sign::Plus).map_err(|e| e.at_factor(i + 1))?;
        shapes.push(FactorShape::from_a(a, f.q, kappa0));
    }
    let profile = MetricProfile::from_parts(ProfileParams {
        spec: spec.with_case(Case::Steady),
        case: Case::Steady,
        m,
        e_star,
        kappa0,
        kappa1: 1.0,
        shapes,
        chi: None,
        s_star: f64::INFINITY,
    })?;
    finish(profile)
}

/// Largest admissible `E*` (exclusive) for the expanding construction.
pub fn expanding_upper_bound(spec: &BundleSpec) -> f64 {
    let a = f64::from(spec.first().n) + 1.0;
    let mut upper = 2.0 * a * a;
    let mut opposite = false;
    for f in spec.factors().iter().skip(1) {
        let ratio = f64::from(f.p) / f64::from(f.abs_q());
        if a * f64::from(f.abs_q()) > f64::from(f.p) {
            opposite = true;
        }
        upper = upper.min(2.0 * ratio * ratio);
    }
    if opposite {
        let min_ratio = spec
            .factors()
            .iter()
            .skip(1)
            .map(|f| f64::from(f.p) / f64::from(f.abs_q()))
            .fold(f64::INFINITY, f64::min);
        upper = upper.min(2.0 * a * a * min_ratio * min_ratio);
    }
    upper
}

/// Expanding construction (`ε = +1`).
pub fn construct_expanding(
    spec: &BundleSpec,
    m: f64,
    e_star: f64,
    branch: Branch,
) -> Result<MetricProfile> {
    check_m(m)?;
    let report = validate_bundle(spec, m)?;
    if !report.admissible(Case::Expanding) {
        return Err(Error::Hypothesis(report.failure_summary("expanding")));
    }
    if !e_star.is_finite() {
        return Err(Error::NonFinite("E*"));
    }
    let regime = report.expanding_regime;
    let a1 = f64::from(spec.first().n) + 1.0;
    if e_star == 0.0 {
        return Err(Error::EStarWindow {
            e_star,
            reason: "E* = 0 is excluded",
        });
    }
    if e_star >= 2.0 * a1 * a1 {
        return Err(Error::EStarWindow {
            e_star,
            reason: "E* must be below 2(n_1+1)^2",
        });
    }
    if e_star >= expanding_upper_bound(spec) {
        return Err(Error::EStarWindow {
            e_star,
            reason: "E* above the admissible window",
        });
    }
    if e_star < 0.0 && (regime != ExpandingRegime::Opposite || branch == Branch::Minus) {
        return Err(Error::EStarWindow {
            e_star,
            reason: "E* < 0 needs a factor with (n_1+1)|q_i| > p_i and the plus branch",
        });
    }
    if branch == Branch::Minus && regime != ExpandingRegime::Strict {
        return Err(Error::EStarWindow {
            e_star,
            reason: "minus branch needs (n_1+1)|q_i| < p_i for all i",
        });
    }
    let kappa0 = kappa0_from_consistency(spec.first().n, e_star, Case::Expanding, branch)?;
    let mut shapes = Vec::with_capacity(spec.r());
    shapes.push(FactorShape::collapsing_at_start(kappa0));
    for (i, f) in spec.factors().iter().enumerate().skip(1) {
        let a = a_coeff(f.p, f.q, e_star, Case::Expanding, Sign::Plus)
            .map_err(|e| e.at_factor(i + 1))?;
        shapes.push(FactorShape::from_a(a, f.q, kappa0));
    }
    let profile = MetricProfile::from_parts(ProfileParams {
        spec: spec.with_case(Case::Expanding),
        case: Case::Expanding,
        m,
        e_star,
        kappa0,
        kappa1: 1.0,
        shapes,
        chi: None,
        s_star: f64::INFINITY,
    })?;
    finish(profile)
}

/// Endpoint data of the compact construction at a trial `E*`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShrinkingSetup {
    pub e_star: f64,
    pub kappa0: f64,
    pub s_star: f64,
    pub shapes: Vec<FactorShape>,
}

/// `κ₀`, `s*` and the β shapes for a trial `E*`; the end factors are
/// pinned so that they vanish exactly at `s = 0` and `s = s*`.
pub fn shrinking_setup(spec: &BundleSpec, e_star: f64, chi: &ChiVector) -> Result<ShrinkingSetup> {
    if chi.len() != spec.r() {
        return Err(Error::InvalidChi(format!(
            "expected {} signs, got {}",
            spec.r(),
            chi.len()
        )));
    }
    let kappa0 = kappa0_from_consistency(spec.first().n, e_star, Case::Shrinking, Branch::Plus)?;
    let s_star = s_star_compact(kappa0, spec.first().n, spec.last().n);
    let r = spec.r();
    let mut shapes = Vec::with_capacity(r);
    shapes.push(FactorShape::collapsing_at_start(kappa0));
    for i in 1..r - 1 {
        let f = spec.factors()[i];
        let a = a_coeff(f.p, f.q, e_star, Case::Shrinking, chi.signs()[i])
            .map_err(|e| e.at_factor(i + 1))?;
        shapes.push(FactorShape::from_a(a, f.q, kappa0));
    }
    shapes.push(FactorShape::collapsing_at_end(kappa0, s_star));
    Ok(ShrinkingSetup {
        e_star,
        kappa0,
        s_star,
        shapes,
    })
}

/// Value of the closing integral together with the scale it is judged
/// against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Closing {
    pub e_star: f64,
    /// `∫₀^{s*} ∏(u² − ρ_i²)^(n_i) u^(m−2)(u²/2 − E*) ds`.
    pub value: f64,
    /// The same integral with `|·|` on the volume factor and `E* + u²/2`.
    pub scale: f64,
    pub kappa0: f64,
    pub s_star: f64,
}

impl Closing {
    pub fn relative(&self) -> f64 {
        self.value / self.scale
    }
}

/// Closing integral with its scale.
pub fn closing_detail(spec: &BundleSpec, m: f64, e_star: f64, chi: &ChiVector) -> Result<Closing> {
    check_m(m)?;
    let setup = shrinking_setup(spec, e_star, chi)?;
    let k0 = setup.kappa0;
    let monic = setup
        .shapes
        .iter()
        .zip(spec.factors())
        .fold(GenPoly::constant(1.0, k0), |acc, (sh, f)| {
            let q = GenPoly::even_quadratic(1.0, sh.root, k0);
            acc.mul(&q.pow(f.n)).expect("same shift")
        })
        .mul(&GenPoly::power(m - 2.0, k0))?;
    let oriented = monic.mul(&GenPoly::new(0.0, alloc::vec![-e_star, 0.0, 0.5], k0))?;
    let positive = monic.mul(&GenPoly::new(0.0, alloc::vec![e_star, 0.0, 0.5], k0))?;
    let value = oriented.antiderivative_from(0.0)?.eval(setup.s_star);
    let scale = positive.antiderivative_from(0.0)?.eval(setup.s_star).abs();
    if !value.is_finite() || !scale.is_finite() {
        return Err(Error::NonFinite("closing integral"));
    }
    Ok(Closing {
        e_star,
        value,
        scale,
        kappa0: k0,
        s_star: setup.s_star,
    })
}

/// The closing integral `∫₀^{s*} ∏(u² − ρ_i²)^(n_i) u^(m−2)(u²/2 − E*) ds`
/// whose zero selects `E*` in the shrinking case.
///
/// This orientation makes its sign agree with the transformed function
/// `F(E*)` (it equals `2^(2N+m)·F(E*)` with `N = Σ n_i`).
pub fn closing_integral(spec: &BundleSpec, m: f64, e_star: f64, chi: &ChiVector) -> Result<f64> {
    closing_detail(spec, m, e_star, chi).map(|c| c.value)
}

/// Everything produced while solving for the shrinking `E*`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShrinkingSolution {
    pub profile: MetricProfile,
    pub root: Root,
    pub closing: Closing,
    /// `(E*, closing)` at each decade tried.
    pub scan: Vec<(f64, f64)>,
}

/// First decade of the `E*` scan.
pub const SCAN_START: f64 = 1e-6;
const SCAN_DECADES: usize = 320;
const MAX_BISECTIONS: usize = 400;

/// Solves the closing condition for `E*` and builds the compact metric.
///
/// `tol` is the relative width the bisection bracket is shrunk to.
pub fn solve_shrinking(
    spec: &BundleSpec,
    m: f64,
    chi: &ChiVector,
    tol: f64,
) -> Result<ShrinkingSolution> {
    check_m(m)?;
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::NonFinite("tolerance"));
    }
    require(spec, m, Case::Shrinking)?;
    let chi = chi.clone().for_spec(spec)?;
    let inv = inv_integral(spec, &chi)?;
    if inv.sign >= 0 {
        return Err(Error::Hypothesis(format!(
            "admissibility integral is {} for chi {chi}; a negative value is required",
            inv.value
        )));
    }
    let f = |e: f64| closing_integral(spec, m, e, &chi);
    let (bracket, scan) = decade_scan(f, SCAN_START, SCAN_DECADES)?;
    let bracket = match bracket {
        Some(b) => b,
        None => {
            let (lo, f_lo) = scan.first().copied().unwrap_or((SCAN_START, 0.0));
            let (hi, f_hi) = scan.last().copied().unwrap_or((SCAN_START, 0.0));
            return Err(Error::NoSignChange {
                lo,
                hi,
                sign_lo: crate::root::sign(f_lo),
                sign_hi: crate::root::sign(f_hi),
            });
        }
    };
    let root = bisect(
        |e| closing_integral(spec, m, e, &chi),
        bracket,
        tol,
        MAX_BISECTIONS,
    )?;
    let closing = closing_detail(spec, m, root.x, &chi)?;
    let setup = shrinking_setup(spec, root.x, &chi)?;
    let profile = MetricProfile::from_parts(ProfileParams {
        spec: spec.with_case(Case::Shrinking),
        case: Case::Shrinking,
        m,
        e_star: root.x,
        kappa0: setup.kappa0,
        kappa1: 1.0,
        shapes: setup.shapes,
        chi: Some(chi),
        s_star: setup.s_star,
    })?;
    let profile = finish(profile)?;
    Ok(ShrinkingSolution {
        profile,
        root,
        closing,
        scan,
    })
}

/// Shrinking construction; see [`solve_shrinking`].
pub fn construct_shrinking(
    spec: &BundleSpec,
    m: f64,
    chi: &ChiVector,
    tol: f64,
) -> Result<MetricProfile> {
    solve_shrinking(spec, m, chi, tol).map(|s| s.profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::FanoFactor;

    fn spec(n: &[u32], p: &[u32], q: &[i32], case: Case) -> BundleSpec {
        let f = n
            .iter()
            .zip(p)
            .zip(q)
            .map(|((&n, &p), &q)| FanoFactor::new(n, p, q))
            .collect();
        BundleSpec::new(f, case).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn kappa0_examples() {
        assert!(close(
            kappa0_from_consistency(0, 6.0, Case::Shrinking, Branch::Plus).unwrap(),
            2.0,
            1e-15
        ));
        assert!(close(
            kappa0_from_consistency(0, 1.5, Case::Expanding, Branch::Plus).unwrap(),
            3.0,
            1e-15
        ));
        assert!(close(
            kappa0_from_consistency(0, 1.5, Case::Expanding, Branch::Minus).unwrap(),
            1.0,
            1e-15
        ));
        assert!(close(
            kappa0_from_consistency(1, 8.0, Case::Steady, Branch::Plus).unwrap(),
            2.0,
            1e-15
        ));
        assert!(kappa0_from_consistency(0, 2.5, Case::Expanding, Branch::Plus).is_err());
        assert!(kappa0_from_consistency(0, -1.0, Case::Shrinking, Branch::Plus).is_err());
    }

    #[test]
    fn kappa0_satisfies_consistency() {
        for (case, br) in [
            (Case::Expanding, Branch::Plus),
            (Case::Expanding, Branch::Minus),
            (Case::Shrinking, Branch::Plus),
        ] {
            for n1 in 0..4u32 {
                for e in [1e-8, 0.3, 1.7] {
                    let k = kappa0_from_consistency(n1, e, case, br).unwrap();
                    let back = 0.5 * k * (4.0 * (f64::from(n1) + 1.0) - case.epsilon() * k);
                    assert!(close(back, e, 1e-13), "{case:?} {br:?} {n1} {e}: {back}");
                }
            }
        }
    }

    #[test]
    fn a_coeff_examples() {
        assert!(close(
            a_coeff(3, 1, 8.0, Case::Steady, Sign::Plus).unwrap(),
            0.375,
            1e-15
        ));
        assert!(close(
            a_coeff(3, 1, 1.5, Case::Expanding, Sign::Plus).unwrap(),
            1.957427107756338,
            1e-14
        ));
        assert!(close(
            a_coeff(3, 1, 6.0, Case::Shrinking, Sign::Plus).unwrap(),
            0.5386751345948129,
            1e-14
        ));
        assert!(close(
            a_coeff(3, 1, 6.0, Case::Shrinking, Sign::Minus).unwrap(),
            -0.03867513459481288,
            1e-13
        ));
        assert!(matches!(
            a_coeff(1, 1, 3.0, Case::Expanding, Sign::Plus),
            Err(Error::NegativeDiscriminant { .. })
        ));
    }

    #[test]
    fn a_coeff_roots_satisfy_consistency() {
        for case in [Case::Steady, Case::Expanding, Case::Shrinking] {
            for chi in [Sign::Plus, Sign::Minus] {
                for (p, q) in [(3u32, 1i32), (5, -2), (7, 3)] {
                    for e in [0.01, 0.9, 1.9] {
                        let a = a_coeff(p, q, e, case, chi).unwrap();
                        let eps = case.epsilon();
                        let back =
                            (8.0 * a * f64::from(p) - eps * f64::from(q * q)) / (8.0 * a * a);
                        assert!(close(back, e, 1e-12), "{case:?} {p} {q} {e}");
                    }
                }
            }
        }
    }

    #[test]
    fn s_star_example() {
        assert!(close(s_star_compact(2.0, 0, 1), 28f64.sqrt() + 2.0, 1e-15));
    }

    #[test]
    fn steady_beta_at_origin() {
        let sp = spec(&[0, 2, 1], &[1, 3, 3], &[1, 1, 1], Case::Steady);
        let prof = construct_steady(&sp, 2.0, 4.0).unwrap();
        assert!(close(prof.a()[1], 0.75, 1e-15));
        // κ₀ = 2, β₂(0) = A κ₀² − 1/(4A)
        assert!(close(prof.beta(1, 0.0), 0.75 * 4.0 - 1.0 / 3.0, 1e-15));
        assert_eq!(prof.beta(0, 0.0), 0.0);
    }

    #[test]
    fn expanding_window_is_enforced() {
        let sp = spec(&[0, 2, 2], &[1, 3, 3], &[1, 1, 1], Case::Expanding);
        assert!(construct_expanding(&sp, 2.0, 1.5, Branch::Plus).is_ok());
        assert!(construct_expanding(&sp, 2.0, 1.5, Branch::Minus).is_ok());
        assert!(matches!(
            construct_expanding(&sp, 2.0, 2.0, Branch::Plus),
            Err(Error::EStarWindow { .. })
        ));
        assert!(matches!(
            construct_expanding(&sp, 2.0, -0.5, Branch::Plus),
            Err(Error::EStarWindow { .. })
        ));
        let boundary = spec(&[0, 2, 2], &[1, 3, 1], &[1, 1, 1], Case::Expanding);
        assert!(matches!(
            construct_expanding(&boundary, 2.0, 0.5, Branch::Minus),
            Err(Error::EStarWindow { .. })
        ));
        assert!(construct_expanding(&boundary, 2.0, 0.5, Branch::Plus).is_ok());
    }

    #[test]
    fn closing_sign_flips_across_root() {
        let sp = BundleSpec::cp2_cp2_example();
        let chi = ChiVector::from_ints(&[1, 1, -1, -1]).unwrap();
        assert!(closing_integral(&sp, 2.0, 1e-3, &chi).unwrap() > 0.0);
        assert!(closing_integral(&sp, 2.0, 1e6, &chi).unwrap() < 0.0);
    }

    #[test]
    fn closing_rejects_wrong_length_chi() {
        let sp = BundleSpec::cp2_cp2_example();
        let chi = ChiVector::from_ints(&[1, -1]).unwrap();
        assert!(matches!(
            closing_integral(&sp, 2.0, 1.0, &chi),
            Err(Error::InvalidChi(_))
        ));
    }

    /// Roots from a 40-digit bisection of the closing integral by
    /// independent quadrature.
    #[test]
    fn shrinking_roots_match_high_precision() {
        let sp = BundleSpec::cp2_cp2_example();
        let chi = ChiVector::from_ints(&[1, 1, -1, -1]).unwrap();
        let want = [
            (1.5, 104.247_340_039_280_59),
            (2.0, 122.886_368_044_363_94),
            (3.0, 164.957_072_385_153_87),
            (10.0, 639.496_448_377_881),
        ];
        for (m, root) in want {
            let sol = solve_shrinking(&sp, m, &chi, 1e-13).unwrap();
            assert!(close(sol.root.x, root, 1e-12), "m={m}: {}", sol.root.x);
            assert!(sol.closing.relative().abs() < 1e-10);
        }
    }
}
