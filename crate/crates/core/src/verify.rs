//! Independent checks that a [`MetricProfile`] solves the reduced
//! quasi-Einstein system.
//!
//! The four moment-map equations are substituted pointwise with exact
//! derivatives. Every residual is divided by the largest summand of its
//! equation at that point, so the reported numbers are scale free.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{cos, exp, ln, sqrt};
use crate::profile::{FactorShape, MetricProfile, ProfileParams};
use crate::quad::{integrate, QuadOptions};

/// Smallest grid accepted by [`residuals`].
pub const MIN_GRID: usize = 16;

fn quad_opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-13,
        max_intervals: 4000,
    }
}

/// Chebyshev–Gauss nodes on `[lo, hi]`, ascending.
pub fn chebyshev(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    (0..n)
        .rev()
        .map(|k| c + h * cos(core::f64::consts::PI * (2 * k + 1) as f64 / (2 * n) as f64))
        .collect()
}

/// `n` log-spaced points on `(lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (ln(lo), ln(hi));
    (1..=n)
        .map(|k| exp(a + (b - a) * k as f64 / n as f64))
        .collect()
}

/// Interior sample points for the residual suite.
///
/// Compact: Chebyshev on `[δ, s*−δ]`, `δ = 10⁻⁴s*`. Non-compact: half the
/// points Chebyshev on `[δ, 10κ₀]`, the rest log-spaced out to `10⁴κ₀`.
pub fn residual_grid(profile: &MetricProfile, n: usize) -> Vec<f64> {
    if profile.is_compact() {
        let s_star = profile.s_star();
        let d = 1e-4 * s_star;
        chebyshev(d, s_star - d, n)
    } else {
        let top = 10.0 * profile.kappa0();
        let head = n / 2;
        let mut g = chebyshev(1e-4 * top, top, head);
        g.extend(log_spaced(top, 1e3 * top, n - head));
        g
    }
}

/// Residuals of one equation across the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationResiduals {
    pub label: String,
    pub absolute: Vec<f64>,
    pub relative: Vec<f64>,
    pub max_rel: f64,
}

impl EquationResiduals {
    fn new(label: String) -> Self {
        EquationResiduals {
            label,
            absolute: Vec::new(),
            relative: Vec::new(),
            max_rel: 0.0,
        }
    }

    fn push(&mut self, (residual, scale): (f64, f64)) {
        let rel = if scale > 0.0 {
            (residual / scale).abs()
        } else {
            residual.abs()
        };
        self.absolute.push(residual);
        self.relative.push(rel);
        self.max_rel = if rel.is_nan() {
            f64::NAN
        } else {
            self.max_rel.max(rel)
        };
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub grid: Vec<f64>,
    /// `radial`, `fiber`, `base_1..base_r`, `integrability`, in that order.
    pub equations: Vec<EquationResiduals>,
    /// Largest `max_rel` over all equations.
    pub max_rel: f64,
    /// μ recovered at each grid point from the integrability equation.
    pub mu: Vec<f64>,
    /// `κ₁²E*`.
    pub mu_expected: f64,
    /// `max |μ(s) − κ₁²E*|` over the larger of `|κ₁²E*|` and the largest
    /// summand of the integrability equation at `s`.
    pub mu_spread: f64,
    /// `max |μ(s) − κ₁²E*| / |κ₁²E*|`; limited by `ε·(largest summand)/|μ|`
    /// where the summands grow with `s`.
    pub mu_spread_raw: f64,
    /// Largest relative J-invariance defect
    /// `Σ n_i(β_i″/β_i − ½(β_i′/β_i)² + q_i²/(2β_i²))`.
    pub j_defect: f64,
}

impl ResidualReport {
    pub fn equation(&self, label: &str) -> Option<&EquationResiduals> {
        self.equations.iter().find(|e| e.label == label)
    }
}

struct Point {
    radial: (f64, f64),
    fiber: (f64, f64),
    base: Vec<(f64, f64)>,
    mu: f64,
    mu_scale: f64,
    j_defect: f64,
}

fn max_abs(terms: &[f64]) -> f64 {
    terms.iter().fold(0.0, |m, t| m.max(t.abs()))
}

fn point(profile: &MetricProfile, s: f64, jet: [f64; 3]) -> Result<Point> {
    let [a, a1, a2] = jet;
    if !(a > 0.0) {
        return Err(Error::AlphaNotPositive { s });
    }
    let eps2 = 0.5 * profile.epsilon();
    let m = profile.m();
    let phi = profile.phi(s);
    let dphi = profile.kappa1();
    let spec = profile.spec();
    let r = spec.r();
    let mut jets = Vec::with_capacity(r);
    for i in 0..r {
        let j = profile.beta_jet(i, s);
        if !(j[0] > 0.0) {
            return Err(Error::BetaNotPositive { index: i, s });
        }
        jets.push(j);
    }
    let ns: Vec<f64> = spec.factors().iter().map(|f| f64::from(f.n)).collect();
    let lv_parts: Vec<f64> = jets
        .iter()
        .zip(&ns)
        .map(|([b, b1, _], n)| n * b1 / b)
        .collect();

    let mut terms = Vec::with_capacity(2 * r + 4);
    terms.push(0.5 * a2);
    terms.extend(lv_parts.iter().map(|l| 0.5 * a1 * l));
    for ([b, b1, b2], n) in jets.iter().zip(&ns) {
        terms.push(a * n * b2 / b);
        terms.push(-0.5 * a * n * (b1 / b) * (b1 / b));
    }
    terms.push(m * a1 * dphi / (2.0 * phi));
    let radial = (
        terms.iter().sum::<f64>() - eps2,
        max_abs(&terms).max(eps2.abs()),
    );

    terms.clear();
    terms.push(0.5 * a2);
    terms.extend(lv_parts.iter().map(|l| 0.5 * a1 * l));
    for (([b, ..], n), f) in jets.iter().zip(&ns).zip(spec.factors()) {
        let q2 = f64::from(f.q) * f64::from(f.q);
        terms.push(-a * n * q2 / (2.0 * b * b));
    }
    terms.push(m * a1 * dphi / (2.0 * phi));
    let fiber = (
        terms.iter().sum::<f64>() - eps2,
        max_abs(&terms).max(eps2.abs()),
    );

    let mut base = Vec::with_capacity(r);
    for ([b, b1, b2], f) in jets.iter().zip(spec.factors()) {
        let q2 = f64::from(f.q) * f64::from(f.q);
        let l = b1 / b;
        terms.clear();
        terms.push(0.5 * a1 * l);
        terms.push(0.5 * a * b2 / b);
        terms.push(-0.5 * a * l * l);
        terms.extend(lv_parts.iter().map(|lv_j| 0.5 * a * l * lv_j));
        terms.push(-f64::from(f.p) / b);
        terms.push(q2 * a / (2.0 * b * b));
        terms.push(m * 0.5 * a * l * dphi / phi);
        base.push((
            terms.iter().sum::<f64>() - eps2,
            max_abs(&terms).max(eps2.abs()),
        ));
    }

    terms.clear();
    terms.push(phi * dphi * a1 / 2.0);
    terms.push(phi * dphi * a1 / 2.0);
    terms.extend(lv_parts.iter().map(|l| phi * dphi * l * a));
    terms.push((m - 1.0) * dphi * dphi * a);
    terms.push(-eps2 * phi * phi);
    let mu: f64 = terms.iter().sum();
    let mu_scale = max_abs(&terms).max(profile.mu().abs());

    let mut j_sum = 0.0;
    let mut j_scale = 0.0;
    for (([b, b1, b2], n), f) in jets.iter().zip(&ns).zip(spec.factors()) {
        let q2 = f64::from(f.q) * f64::from(f.q);
        let parts = [b2 / b, -0.5 * (b1 / b) * (b1 / b), 0.5 * q2 / (b * b)];
        j_sum += n * parts.iter().sum::<f64>();
        j_scale += n * max_abs(&parts);
    }
    let j_defect = if j_scale > 0.0 {
        (j_sum / j_scale).abs()
    } else {
        j_sum.abs()
    };

    Ok(Point {
        radial,
        fiber,
        base,
        mu,
        mu_scale,
        j_defect,
    })
}

fn labels(r: usize) -> Vec<String> {
    let mut v = alloc::vec![String::from("radial"), String::from("fiber")];
    v.extend((1..=r).map(|i| format!("base_{i}")));
    v.push(String::from("integrability"));
    v
}

fn assemble<J>(profile: &MetricProfile, grid: Vec<f64>, mut jet: J) -> Result<ResidualReport>
where
    J: FnMut(f64) -> Result<[f64; 3]>,
{
    let r = profile.spec().r();
    let mut eqs: Vec<EquationResiduals> =
        labels(r).into_iter().map(EquationResiduals::new).collect();
    let mu_expected = profile.mu();
    let mut mu = Vec::with_capacity(grid.len());
    let mut mu_spread: f64 = 0.0;
    let mut mu_spread_raw: f64 = 0.0;
    let mut j_defect: f64 = 0.0;
    for &s in &grid {
        let p = point(profile, s, jet(s)?)?;
        eqs[0].push(p.radial);
        eqs[1].push(p.fiber);
        for (i, b) in p.base.into_iter().enumerate() {
            eqs[2 + i].push(b);
        }
        eqs[2 + r].push((p.mu - mu_expected, p.mu_scale));
        let dev = (p.mu - mu_expected).abs();
        mu_spread = mu_spread.max(dev / p.mu_scale);
        mu_spread_raw = mu_spread_raw.max(if mu_expected != 0.0 {
            dev / mu_expected.abs()
        } else {
            dev
        });
        j_defect = j_defect.max(p.j_defect);
        mu.push(p.mu);
    }
    let max_rel = eqs.iter().fold(0.0f64, |m, e| {
        if e.max_rel.is_nan() {
            f64::NAN
        } else {
            m.max(e.max_rel)
        }
    });
    Ok(ResidualReport {
        grid,
        equations: eqs,
        max_rel,
        mu,
        mu_expected,
        mu_spread,
        mu_spread_raw,
        j_defect,
    })
}

/// Substitutes the profile into the radial, fiber, per-factor and
/// integrability equations on `grid_size` interior points.
pub fn residuals(profile: &MetricProfile, grid_size: usize) -> Result<ResidualReport> {
    if grid_size < MIN_GRID {
        return Err(Error::GridTooSmall {
            got: grid_size,
            min: MIN_GRID,
        });
    }
    let grid = residual_grid(profile, grid_size);
    residuals_on(profile, grid)
}

/// [`residuals`] on caller-supplied points.
pub fn residuals_on(profile: &MetricProfile, grid: Vec<f64>) -> Result<ResidualReport> {
    assemble(profile, grid, |s| Ok(profile.alpha_jet(s)))
}

/// The same suite with α taken from [`alpha_quadrature`] and its
/// derivatives from the first-order relation `α′ = (g − αW′)/W`.
pub fn residuals_with_quadrature(
    profile: &MetricProfile,
    grid: Vec<f64>,
) -> Result<ResidualReport> {
    assemble(profile, grid, |s| quadrature_jet(profile, s))
}

/// `α(s) = ∫₀^s g / W` with `g = V u^(m−2)(E* + (ε/2)u²)` evaluated from
/// the factored β's and integrated adaptively.
pub fn alpha_quadrature(profile: &MetricProfile, s: f64) -> Result<f64> {
    if s == 0.0 {
        return Ok(0.0);
    }
    let k0 = profile.kappa0();
    let m = profile.m();
    let eps = profile.epsilon();
    let e_star = profile.e_star();
    let g = |x: f64| {
        let u = x + k0;
        profile.volume(x) * crate::math::powf(u, m - 2.0) * (e_star + 0.5 * eps * u * u)
    };
    let res = integrate(g, 0.0, s, quad_opts())?;
    let u = s + k0;
    Ok(res.value / (profile.volume(s) * crate::math::powf(u, m - 1.0)))
}

fn quadrature_jet(profile: &MetricProfile, s: f64) -> Result<[f64; 3]> {
    let a = alpha_quadrature(profile, s)?;
    let u = s + profile.kappa0();
    let m = profile.m();
    let [l1, l2] = profile.log_volume_derivatives(s);
    let lw1 = l1 + (m - 1.0) / u;
    let lw2 = l2 - (m - 1.0) / (u * u);
    let h = profile.e_star() + 0.5 * profile.epsilon() * u * u;
    let h1 = profile.epsilon() * u;
    let a1 = h / u - a * lw1;
    let g1 = l1 * h / u + (m - 2.0) * h / (u * u) + h1 / u;
    let a2 = g1 - 2.0 * a1 * lw1 - a * (lw1 * lw1 + lw2);
    Ok([a, a1, a2])
}

/// Closed form against quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub points: Vec<f64>,
    pub closed: Vec<f64>,
    pub quadrature: Vec<f64>,
    pub max_rel: f64,
}

/// Points used for the closed-form/quadrature comparison.
pub fn oracle_points(profile: &MetricProfile, n: usize) -> Vec<f64> {
    if profile.is_compact() {
        chebyshev(0.0, profile.s_star(), n)
    } else {
        let top = 10.0 * profile.kappa0();
        let head = n / 2;
        let mut v = chebyshev(0.0, top, head);
        v.extend(log_spaced(top, 1e3 * top, n - head));
        v
    }
}

/// Compares α from the closed form and from quadrature at `n` points.
pub fn oracle_equivalence(profile: &MetricProfile, n: usize) -> Result<OracleReport> {
    let points = oracle_points(profile, n);
    let mut closed = Vec::with_capacity(n);
    let mut quadrature = Vec::with_capacity(n);
    let mut max_rel: f64 = 0.0;
    for &s in &points {
        let a = profile.alpha(s);
        let b = alpha_quadrature(profile, s)?;
        max_rel = max_rel.max((a - b).abs() / b.abs());
        closed.push(a);
        quadrature.push(b);
    }
    Ok(OracleReport {
        points,
        closed,
        quadrature,
        max_rel,
    })
}

fn check_domain(profile: &MetricProfile, s: f64) -> Result<()> {
    if !(s >= 0.0) || (profile.is_compact() && s > profile.s_star()) || !s.is_finite() {
        return Err(Error::OutOfDomain { s });
    }
    Ok(())
}

/// `∫₀^s dx/√α(x)` for any `α` vanishing linearly at 0, as
/// `∫₀^√s 2w/√α(w²) dw`.
pub fn arc_length_from_zero<F: Fn(f64) -> f64>(alpha: F, s: f64) -> Result<f64> {
    arc_length_split(alpha, s, f64::NAN)
}

/// As [`arc_length_from_zero`], with the quadrature split at `x = brk` so a
/// switch between series and closed form lies on a panel edge.
fn arc_length_split<F: Fn(f64) -> f64>(alpha: F, s: f64, brk: f64) -> Result<f64> {
    let f = |w: f64| 2.0 * w / sqrt(alpha(w * w));
    split_integral(f, sqrt(s), sqrt(brk))
}

/// `∫₀^top f`, split at `mid` when it lies inside.
fn split_integral<F: Fn(f64) -> f64>(f: F, top: f64, mid: f64) -> Result<f64> {
    if mid > 0.0 && mid < top {
        Ok(integrate(&f, 0.0, mid, quad_opts())?.value
            + integrate(&f, mid, top, quad_opts())?.value)
    } else {
        Ok(integrate(f, 0.0, top, quad_opts())?.value)
    }
}

fn t_from_start(profile: &MetricProfile, s: f64) -> Result<f64> {
    arc_length_split(|x| profile.alpha(x), s, profile.series_zones().0)
}

/// `∫_s^{s*} dx/√α` with `x = s* − w²`, on the exactly closed metric so a
/// closing defect within the root tolerance cannot make α negative near `s*`.
fn t_to_end(profile: &MetricProfile, s: f64) -> Result<f64> {
    let s_star = profile.s_star();
    let f = |w: f64| {
        let d = w * w;
        if d == 0.0 {
            return core::f64::consts::SQRT_2;
        }
        2.0 * w / sqrt(profile.alpha_closed_below_end(d).unwrap_or(f64::NAN))
    };
    let zone = profile.series_zones().1.unwrap_or(f64::NAN);
    split_integral(f, sqrt(s_star - s), sqrt(zone))
}

/// Arc length `t(s) = ∫₀^s dx/√α(x)` from the `V₁` end.
pub fn t_of_s(profile: &MetricProfile, s: f64) -> Result<f64> {
    check_domain(profile, s)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    if profile.is_compact() && s > 0.5 * profile.s_star() {
        let mid = 0.5 * profile.s_star();
        return Ok(t_from_start(profile, mid)? + t_to_end(profile, mid)? - t_to_end(profile, s)?);
    }
    t_from_start(profile, s)
}

/// One boundary quantity and its target.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryEntry {
    pub name: &'static str,
    pub value: f64,
    pub target: f64,
    /// `|value − target|`, divided by the maximum of α (or β) for the
    /// undifferentiated quantities.
    pub scaled_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryReport {
    pub entries: Vec<BoundaryEntry>,
    pub max_error: f64,
}

impl BoundaryReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_error < tol
    }
}

/// Smooth-closing conditions at `s = 0` and, when compact, at `s = s*`.
pub fn boundary_check(profile: &MetricProfile) -> BoundaryReport {
    let samples = if profile.is_compact() {
        chebyshev(0.0, profile.s_star(), 257)
    } else {
        chebyshev(0.0, 10.0 * profile.kappa0(), 257)
    };
    let r = profile.spec().r();
    let alpha_max = samples
        .iter()
        .fold(0.0f64, |m, &s| m.max(profile.alpha(s).abs()));
    let beta_max = |i: usize| {
        samples
            .iter()
            .fold(0.0f64, |m, &s| m.max(profile.beta(i, s).abs()))
    };
    let mut entries = Vec::new();
    let mut push = |name, value: f64, target: f64, scale: f64| {
        entries.push(BoundaryEntry {
            name,
            value,
            target,
            scaled_error: (value - target).abs() / scale,
        });
    };
    let [a0, a1, _] = profile.alpha_jet(0.0);
    let [b0, b1, _] = profile.beta_jet(0, 0.0);
    push("alpha(0)", a0, 0.0, alpha_max);
    push("alpha'(0)", a1, 2.0, 1.0);
    push("beta_1(0)", b0, 0.0, beta_max(0));
    push("beta_1'(0)", b1, 1.0, 1.0);
    if profile.is_compact() {
        let s_star = profile.s_star();
        let [a0, a1, _] = profile.alpha_jet(s_star);
        let [b0, b1, _] = profile.beta_jet(r - 1, s_star);
        push("alpha(s*)", a0, 0.0, alpha_max);
        push("alpha'(s*)", a1, -2.0, 1.0);
        push("beta_r(s*)", b0, 0.0, beta_max(r - 1));
        push("beta_r'(s*)", b1, -1.0, 1.0);
    }
    let max_error = entries.iter().fold(0.0f64, |m, e| m.max(e.scaled_error));
    BoundaryReport { entries, max_error }
}

/// Growth law fitted to `t(s)` on `[10², 10⁴]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthLaw {
    /// `t ≈ a + b·s`.
    Linear,
    /// `t ≈ a + b·log s`.
    Logarithmic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    pub law: GrowthLaw,
    pub intercept: f64,
    pub slope: f64,
    /// `max |t − fit| / max |t|`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Completeness {
    /// `t(s)` follows an unbounded law, so the end at infinity is at
    /// infinite distance.
    Divergent(Fit),
    /// Neither law fits to 1%.
    Inconclusive {
        linear: Fit,
        logarithmic: Fit,
        samples: Vec<(f64, f64)>,
    },
}

impl Completeness {
    pub fn is_divergent(&self) -> bool {
        matches!(self, Completeness::Divergent(_))
    }
}

fn fit(samples: &[(f64, f64)], law: GrowthLaw) -> Fit {
    let xs: Vec<f64> = samples
        .iter()
        .map(|&(s, _)| match law {
            GrowthLaw::Linear => s,
            GrowthLaw::Logarithmic => ln(s),
        })
        .collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = samples.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = xs
        .iter()
        .zip(samples)
        .map(|(x, p)| (x - mx) * (p.1 - my))
        .sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let t_max = samples.iter().fold(0.0f64, |m, p| m.max(p.1.abs()));
    let residual = xs.iter().zip(samples).fold(0.0f64, |m, (x, p)| {
        m.max((p.1 - intercept - slope * x).abs())
    }) / t_max;
    Fit {
        law,
        intercept,
        slope,
        residual,
    }
}

/// Decides completeness at infinity from the growth of `t(s)`.
pub fn completeness_diagnostic(profile: &MetricProfile) -> Result<Completeness> {
    if profile.is_compact() {
        return Err(Error::WrongCase {
            expected: "a non-compact",
        });
    }
    let mut samples = Vec::with_capacity(41);
    let mut t = t_of_s(profile, 1e2)?;
    let mut prev = 1e2;
    samples.push((prev, t));
    for s in log_spaced(1e2, 1e4, 40) {
        let f = |x: f64| 1.0 / sqrt(profile.alpha(x));
        t += integrate(f, prev, s, quad_opts())?.value;
        samples.push((s, t));
        prev = s;
    }
    let linear = fit(&samples, GrowthLaw::Linear);
    let logarithmic = fit(&samples, GrowthLaw::Logarithmic);
    let best = if linear.residual <= logarithmic.residual {
        &linear
    } else {
        &logarithmic
    };
    if best.residual < 0.01 && best.slope > 0.0 {
        Ok(Completeness::Divergent(best.clone()))
    } else {
        Ok(Completeness::Inconclusive {
            linear,
            logarithmic,
            samples,
        })
    }
}

/// Large-`s` behaviour of a non-compact profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Asymptotics {
    /// Predicted limit: `K` of `α → K` (steady) or of `α/s² → K`
    /// (expanding).
    pub predicted: f64,
    /// Observed `α` (steady) or `α/s²` (expanding) at `10³, 10⁴, 10⁵`.
    pub observed: [f64; 3],
    pub relative_error: f64,
    /// `(t, f, g_1..g_r)` on a log grid.
    pub table: Vec<(f64, f64, Vec<f64>)>,
}

/// Compares the constructed α against the predicted asymptote.
pub fn asymptotics_report(profile: &MetricProfile) -> Result<Asymptotics> {
    let n_total: f64 = profile
        .spec()
        .factors()
        .iter()
        .map(|f| f64::from(f.n))
        .sum();
    let m = profile.m();
    let (predicted, quadratic) = match profile.case() {
        crate::bundle::Case::Steady => (profile.e_star() / (2.0 * n_total + m - 1.0), false),
        crate::bundle::Case::Expanding => (1.0 / (2.0 * (2.0 * n_total + m + 1.0)), true),
        crate::bundle::Case::Shrinking => {
            return Err(Error::WrongCase {
                expected: "a non-compact",
            })
        }
    };
    let sample = |s: f64| {
        let a = profile.alpha(s);
        if quadratic {
            a / (s * s)
        } else {
            a
        }
    };
    let observed = [sample(1e3), sample(1e4), sample(1e5)];
    let relative_error = (observed[1] - predicted).abs() / predicted;
    let mut table = Vec::new();
    let mut t = 0.0;
    let mut prev = 0.0;
    let r = profile.spec().r();
    for s in log_spaced(1e-2 * profile.kappa0(), 1e4, 24) {
        t = if prev == 0.0 {
            t_of_s(profile, s)?
        } else {
            t + integrate(|x: f64| 1.0 / sqrt(profile.alpha(x)), prev, s, quad_opts())?.value
        };
        prev = s;
        table.push((t, profile.f(s), (0..r).map(|i| profile.g(i, s)).collect()));
    }
    Ok(Asymptotics {
        predicted,
        observed,
        relative_error,
        table,
    })
}

/// Residuals of the arc-length form of the equations.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcLengthReport {
    pub points: Vec<f64>,
    /// Largest relative residual of the radial, fiber and base equations.
    pub max_rel: [f64; 3],
}

/// `s(t₀ + δ)` from `s₀ = s(t₀)` by Newton on `∫_{s₀}^s dx/√α = δ`.
fn advance(profile: &MetricProfile, s0: f64, delta: f64) -> Result<f64> {
    let mut s = s0 + delta * sqrt(profile.alpha(s0));
    for _ in 0..60 {
        let t = integrate(|x: f64| 1.0 / sqrt(profile.alpha(x)), s0, s, quad_opts())?.value;
        let step = (t - delta) * sqrt(profile.alpha(s));
        s -= step;
        if step.abs() <= 1e-15 * s.abs() {
            break;
        }
    }
    Ok(s)
}

/// Checks the arc-length equations at `n` interior points. The metric
/// functions are sampled at `t₀ + kh` through the inverse of `t(s)` and
/// differentiated with five-point stencils, so this path shares nothing
/// with the moment-map derivatives but α itself.
pub fn arc_length_check(profile: &MetricProfile, n: usize) -> Result<ArcLengthReport> {
    let (lo, hi) = if profile.is_compact() {
        (0.1 * profile.s_star(), 0.9 * profile.s_star())
    } else {
        (0.1 * profile.kappa0(), 10.0 * profile.kappa0())
    };
    let points = chebyshev(lo, hi, n);
    let spec = profile.spec();
    let r = spec.r();
    let eps2 = 0.5 * profile.epsilon();
    let m = profile.m();
    let mut max_rel = [0.0f64; 3];
    for &s0 in &points {
        let room = if profile.is_compact() {
            s0.min(profile.s_star() - s0)
        } else {
            s0
        };
        let h = 2e-3 * room / sqrt(profile.alpha(s0));
        let mut ss = [0.0; 5];
        for (k, slot) in ss.iter_mut().enumerate() {
            let off = k as f64 - 2.0;
            *slot = if off == 0.0 {
                s0
            } else {
                advance(profile, s0, off * h)?
            };
        }
        let d = |vals: [f64; 5]| {
            let d1 = (-vals[4] + 8.0 * vals[3] - 8.0 * vals[1] + vals[0]) / (12.0 * h);
            let d2 = (-vals[4] + 16.0 * vals[3] - 30.0 * vals[2] + 16.0 * vals[1] - vals[0])
                / (12.0 * h * h);
            (vals[2], d1, d2)
        };
        let (f, fd, fdd) = d(ss.map(|s| profile.f(s)));
        let (v, vd, vdd) = d(ss.map(|s| profile.phi(s)));
        let gs: Vec<(f64, f64, f64)> = (0..r).map(|i| d(ss.map(|s| profile.g(i, s)))).collect();

        let mut terms = alloc::vec![fdd / f];
        for ((g, _, gdd), fac) in gs.iter().zip(spec.factors()) {
            terms.push(2.0 * f64::from(fac.n) * gdd / g);
        }
        terms.push(m * vdd / v);
        let res = terms.iter().sum::<f64>() - eps2;
        max_rel[0] = max_rel[0].max(res.abs() / max_abs(&terms).max(eps2.abs()));

        let mut terms = alloc::vec![fdd / f];
        for ((g, gd, _), fac) in gs.iter().zip(spec.factors()) {
            let n_i = f64::from(fac.n);
            let q2 = f64::from(fac.q) * f64::from(fac.q);
            terms.push(2.0 * n_i * fd * gd / (f * g));
            terms.push(-0.5 * n_i * q2 * f * f / (g * g * g * g));
        }
        terms.push(m * fd * vd / (f * v));
        let res = terms.iter().sum::<f64>() - eps2;
        max_rel[1] = max_rel[1].max(res.abs() / max_abs(&terms).max(eps2.abs()));

        for ((g, gd, gdd), fac) in gs.iter().zip(spec.factors()) {
            let q2 = f64::from(fac.q) * f64::from(fac.q);
            let mut terms = alloc::vec![gdd / g, -(gd / g) * (gd / g), fd * gd / (f * g)];
            for ((gj, gdj, _), fj) in gs.iter().zip(spec.factors()) {
                terms.push(2.0 * f64::from(fj.n) * gd * gdj / (g * gj));
            }
            terms.push(-f64::from(fac.p) / (g * g));
            terms.push(q2 * f * f / (2.0 * g * g * g * g));
            terms.push(m * gd * vd / (g * v));
            let res = terms.iter().sum::<f64>() - eps2;
            max_rel[2] = max_rel[2].max(res.abs() / max_abs(&terms).max(eps2.abs()));
        }
    }
    Ok(ArcLengthReport { points, max_rel })
}

/// Residual response to a single perturbed parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Sensitivity {
    pub parameter: String,
    /// `max_rel` of the perturbed residual suite; infinite when the
    /// perturbed profile leaves the positivity region on the grid.
    pub max_rel: f64,
    /// Boundary error of the perturbed profile.
    pub boundary: f64,
}

/// Scales each `A_i`, `κ₀` and `E*` in turn by `1 + rel` and reruns the
/// residual and boundary checks on the same grid.
pub fn sensitivity(
    profile: &MetricProfile,
    grid_size: usize,
    rel: f64,
) -> Result<Vec<Sensitivity>> {
    let base = profile.params();
    let grid = residual_grid(profile, grid_size);
    let mut out = Vec::new();
    let mut run = |label: String, params: ProfileParams| -> Result<()> {
        let p = MetricProfile::from_parts(params)?;
        let max_rel = match residuals_on(&p, grid.clone()) {
            Ok(rep) if !rep.max_rel.is_nan() => rep.max_rel,
            _ => f64::INFINITY,
        };
        out.push(Sensitivity {
            parameter: label,
            max_rel,
            boundary: boundary_check(&p).max_error,
        });
        Ok(())
    };
    let spec = base.spec.clone();
    for i in 0..spec.r() {
        let mut params = base.clone();
        let q = spec.factors()[i].q;
        params.shapes[i] = FactorShape::from_a(base.shapes[i].a * (1.0 + rel), q, base.kappa0);
        run(format!("A_{}", i + 1), params)?;
    }
    let mut params = base.clone();
    params.kappa0 = base.kappa0 * (1.0 + rel);
    params.shapes = base
        .shapes
        .iter()
        .zip(spec.factors())
        .map(|(sh, f)| FactorShape::from_a(sh.a, f.q, params.kappa0))
        .collect();
    run(String::from("kappa0"), params)?;
    let mut params = base.clone();
    params.e_star = base.e_star * (1.0 + rel);
    run(String::from("E*"), params)?;
    Ok(out)
}
