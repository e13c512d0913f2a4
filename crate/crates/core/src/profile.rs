//! The constructed metric `dt² + f²θ⊗θ + Σ g_i² h_i`, held in the
//! moment-map coordinate `s` through `α = f²`, `β_i = g_i²`, `φ = e^(−u/m)`.
//!
//! α is stored in closed form as `G(s) / (V(s)(s+κ₀)^(m−1))` with `G` an
//! explicit antiderivative. At a blow-down endpoint both `G` and `V`
//! vanish, so within a small zone around each endpoint α is evaluated
//! from a Taylor expansion of the quotient instead.

use alloc::vec::Vec;

use crate::bundle::{BundleSpec, Case, ChiVector};
use crate::error::{check_m, Error, Result};
use crate::genpoly::{Antiderivative, GenPoly, GenSum};
use crate::math::{ln, powf, sqrt};
use crate::series::Series;

const SERIES_ORDER: usize = 48;
const SERIES_ZONE: f64 = 0.25;

/// `β_i = A_i (u − ρ_i)(u + ρ_i)`, with `u − ρ_i` stored as `s + offset`
/// so that a blow-down root sits at an exactly representable `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorShape {
    pub a: f64,
    /// `ρ_i = |q_i| / (2|A_i|)`, the positive root in `u`.
    pub root: f64,
    /// `κ₀ − ρ_i`.
    pub offset: f64,
}

impl FactorShape {
    pub fn from_a(a: f64, q: i32, kappa0: f64) -> Self {
        let root = f64::from(q.unsigned_abs()) / (2.0 * a.abs());
        FactorShape {
            a,
            root,
            offset: kappa0 - root,
        }
    }

    /// Factor collapsing at `s = 0`: `A = 1/(2κ₀)`, `ρ = κ₀`.
    pub fn collapsing_at_start(kappa0: f64) -> Self {
        FactorShape {
            a: 1.0 / (2.0 * kappa0),
            root: kappa0,
            offset: 0.0,
        }
    }

    /// Factor collapsing at `s = s*`: `A = −1/(2(s*+κ₀))`, `ρ = s*+κ₀`.
    pub fn collapsing_at_end(kappa0: f64, s_star: f64) -> Self {
        let root = s_star + kappa0;
        FactorShape {
            a: -1.0 / (2.0 * root),
            root,
            offset: -s_star,
        }
    }

    pub fn beta(&self, s: f64) -> f64 {
        let x = s + self.offset;
        self.a * x * (x + 2.0 * self.root)
    }

    /// `[β, β′, β″]` at `s`.
    pub fn jet(&self, s: f64) -> [f64; 3] {
        let x = s + self.offset;
        [
            self.a * x * (x + 2.0 * self.root),
            2.0 * self.a * (x + self.root),
            2.0 * self.a,
        ]
    }

    /// `β` as a quadratic in `t = s − center`.
    fn series(&self, center: f64, order: usize) -> Series {
        let x = center + self.offset;
        let y = x + 2.0 * self.root;
        Series::from_coeffs(alloc::vec![self.a * x * y, self.a * (x + y), self.a], order)
    }

    /// The two real zeros of β in `s`.
    fn zeros(&self) -> [f64; 2] {
        [-self.offset, -self.offset - 2.0 * self.root]
    }

    /// The u-basis quadratic `A u² − Aρ²`.
    pub(crate) fn genpoly(&self, kappa0: f64) -> GenPoly {
        GenPoly::even_quadratic(self.a, self.root, kappa0)
    }
}

#[derive(Debug, Clone, PartialEq)]
struct EndSeries {
    center: f64,
    zone: f64,
    /// Regular part of α in `t = s − center`.
    regular: Series,
    /// Value of `G` at the center when it cannot be folded into the series
    /// (the volume vanishes there); contributes `c / W(s)`.
    singular: f64,
}

/// A fully determined candidate metric.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricProfile {
    spec: BundleSpec,
    case: Case,
    m: f64,
    epsilon: f64,
    e_star: f64,
    kappa0: f64,
    kappa1: f64,
    shapes: Vec<FactorShape>,
    chi: Option<ChiVector>,
    s_star: f64,
    volume: GenPoly,
    numerator: Antiderivative,
    /// `α′W²` and `α″W³` as expanded polynomials.
    slope: GenSum,
    curvature: GenSum,
    start: EndSeries,
    end: Option<EndSeries>,
}

/// The raw parameters a profile is assembled from.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileParams {
    pub spec: BundleSpec,
    pub case: Case,
    pub m: f64,
    pub e_star: f64,
    pub kappa0: f64,
    pub kappa1: f64,
    pub shapes: Vec<FactorShape>,
    pub chi: Option<ChiVector>,
    /// `f64::INFINITY` for the non-compact cases.
    pub s_star: f64,
}

/// `V(s) = ∏ β_i^(n_i)` as a u-basis generalized polynomial.
pub(crate) fn volume_poly(spec: &BundleSpec, shapes: &[FactorShape], kappa0: f64) -> GenPoly {
    shapes
        .iter()
        .zip(spec.factors())
        .fold(GenPoly::constant(1.0, kappa0), |acc, (sh, f)| {
            acc.mul(&sh.genpoly(kappa0).pow(f.n)).expect("same shift")
        })
}

/// `V(s)(s+κ₀)^(m−2)(E* + (ε/2)(s+κ₀)²)`.
pub(crate) fn alpha_integrand(volume: &GenPoly, m: f64, epsilon: f64, e_star: f64) -> GenPoly {
    let k0 = volume.kappa0();
    let weight = GenPoly::power(m - 2.0, k0);
    let source = GenPoly::new(0.0, alloc::vec![e_star, 0.0, 0.5 * epsilon], k0);
    volume
        .mul(&weight)
        .and_then(|p| p.mul(&source))
        .expect("same shift")
}

/// With `α = G/W`: `α′W² = gW − GW′` and `α″W³ = (α′W²)′W − 2W′(α′W²)`.
/// Expanding these symbolically cancels the leading orders exactly, which
/// the pointwise quotient rule loses to rounding once `α′` is small.
fn derivative_numerators(
    volume: &GenPoly,
    integrand: &GenPoly,
    numerator: &Antiderivative,
    m: f64,
) -> (GenSum, GenSum) {
    let w = volume
        .mul(&GenPoly::power(m - 1.0, volume.kappa0()))
        .expect("same shift");
    let w1 = GenSum::from_poly(w.derivative());
    let w = GenSum::from_poly(w);
    let g = GenSum::from_poly(integrand.clone());
    let slope = g.mul(&w).add(&numerator.as_sum().mul(&w1).scale(-1.0));
    let curvature = slope.derivative().mul(&w).add(&w1.mul(&slope).scale(-2.0));
    (slope, curvature)
}

impl MetricProfile {
    /// Builds a profile from raw parameters without imposing any
    /// consistency condition; used for externally supplied or perturbed
    /// metrics.
    pub fn from_parts(params: ProfileParams) -> Result<Self> {
        check_m(params.m)?;
        if params.shapes.len() != params.spec.r() {
            return Err(Error::InvalidFactor {
                index: params.shapes.len(),
                reason: "one shape per factor required",
            });
        }
        if !(params.kappa0 > 0.0) || !(params.kappa1 > 0.0) {
            return Err(Error::NonFinite("kappa"));
        }
        let epsilon = params.case.epsilon();
        let volume = volume_poly(&params.spec, &params.shapes, params.kappa0);
        let integrand = alpha_integrand(&volume, params.m, epsilon, params.e_star);
        let numerator = integrand.antiderivative_from(0.0)?;
        let (slope, curvature) = derivative_numerators(&volume, &integrand, &numerator, params.m);
        let mut profile = MetricProfile {
            spec: params.spec,
            case: params.case,
            m: params.m,
            epsilon,
            e_star: params.e_star,
            kappa0: params.kappa0,
            kappa1: params.kappa1,
            shapes: params.shapes,
            chi: params.chi,
            s_star: params.s_star,
            volume,
            numerator,
            slope,
            curvature,
            start: EndSeries {
                center: 0.0,
                zone: 0.0,
                regular: Series::zeros(1),
                singular: 0.0,
            },
            end: None,
        };
        profile.start = profile.end_series(0.0);
        if profile.s_star.is_finite() {
            profile.end = Some(profile.end_series(profile.s_star));
        }
        Ok(profile)
    }

    /// Convenience wrapper: shapes from the β coefficients `A_i`, pinning
    /// the blow-down roots when they match to rounding.
    #[allow(clippy::too_many_arguments)]
    pub fn from_coefficients(
        spec: BundleSpec,
        case: Case,
        m: f64,
        e_star: f64,
        kappa0: f64,
        a: &[f64],
        chi: Option<ChiVector>,
        s_star: f64,
    ) -> Result<Self> {
        let tol = 8.0 * f64::EPSILON;
        let r = spec.r();
        let shapes = a
            .iter()
            .zip(spec.factors())
            .enumerate()
            .map(|(i, (&ai, f))| {
                let sh = FactorShape::from_a(ai, f.q, kappa0);
                if i == 0 && (sh.root - kappa0).abs() <= tol * kappa0 && ai > 0.0 {
                    FactorShape {
                        root: kappa0,
                        offset: 0.0,
                        ..sh
                    }
                } else if i == r - 1
                    && s_star.is_finite()
                    && ai < 0.0
                    && (sh.root - (s_star + kappa0)).abs() <= tol * (s_star + kappa0)
                {
                    FactorShape {
                        root: s_star + kappa0,
                        offset: -s_star,
                        ..sh
                    }
                } else {
                    sh
                }
            })
            .collect();
        MetricProfile::from_parts(ProfileParams {
            spec,
            case,
            m,
            e_star,
            kappa0,
            kappa1: 1.0,
            shapes,
            chi,
            s_star,
        })
    }

    /// Copy with every field but the shapes, `E*` and `κ₀` kept; for
    /// sensitivity experiments.
    pub fn params(&self) -> ProfileParams {
        ProfileParams {
            spec: self.spec.clone(),
            case: self.case,
            m: self.m,
            e_star: self.e_star,
            kappa0: self.kappa0,
            kappa1: self.kappa1,
            shapes: self.shapes.clone(),
            chi: self.chi.clone(),
            s_star: self.s_star,
        }
    }

    fn end_series(&self, center: f64) -> EndSeries {
        let order = SERIES_ORDER;
        let u_c = center + self.kappa0;
        let mut volume = Series::zeros(order);
        volume.c[0] = 1.0;
        for (sh, f) in self.shapes.iter().zip(self.spec.factors()) {
            volume = volume.mul(&sh.series(center, order).pow(f.n));
        }
        let source = Series::from_coeffs(
            alloc::vec![
                self.e_star + 0.5 * self.epsilon * u_c * u_c,
                self.epsilon * u_c,
                0.5 * self.epsilon
            ],
            order,
        );
        let g = volume
            .mul(&Series::binomial(u_c, self.m - 2.0, order))
            .mul(&source);
        let mut big_g = g.integrate();
        let w = volume.mul(&Series::binomial(u_c, self.m - 1.0, order));
        let g_center = if center == 0.0 {
            0.0
        } else {
            self.numerator.eval(center)
        };
        let val = w.valuation().unwrap_or(0);
        let singular = if val == 0 {
            big_g.c[0] += g_center;
            0.0
        } else {
            g_center
        };
        let regular = big_g.shift_down(val).div(&w.shift_down(val));

        // Distance to the nearest singularity of the quotient.
        let mut radius = (center + self.kappa0).abs();
        for sh in &self.shapes {
            for z in sh.zeros() {
                let d = (z - center).abs();
                if d > 0.0 {
                    radius = radius.min(d);
                }
            }
        }
        let mut zone = SERIES_ZONE * radius;
        if self.s_star.is_finite() {
            zone = zone.min(0.5 * self.s_star);
        }
        EndSeries {
            center,
            zone,
            regular,
            singular,
        }
    }

    pub fn spec(&self) -> &BundleSpec {
        &self.spec
    }
    pub fn case(&self) -> Case {
        self.case
    }
    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn e_star(&self) -> f64 {
        self.e_star
    }
    pub fn kappa0(&self) -> f64 {
        self.kappa0
    }
    pub fn kappa1(&self) -> f64 {
        self.kappa1
    }
    pub fn shapes(&self) -> &[FactorShape] {
        &self.shapes
    }
    /// The β coefficients `A_i`.
    pub fn a(&self) -> Vec<f64> {
        self.shapes.iter().map(|s| s.a).collect()
    }
    pub fn chi(&self) -> Option<&ChiVector> {
        self.chi.as_ref()
    }
    /// Right end of the domain; infinite for the non-compact cases.
    pub fn s_star(&self) -> f64 {
        self.s_star
    }
    pub fn is_compact(&self) -> bool {
        self.s_star.is_finite()
    }
    /// `V` as a generalized polynomial.
    pub fn volume_poly(&self) -> &GenPoly {
        &self.volume
    }
    /// The closed-form antiderivative `G` with `α = G / (V u^(m−1))`.
    pub fn alpha_numerator(&self) -> &Antiderivative {
        &self.numerator
    }

    /// `μ/κ₁²` predicted by consistency.
    pub fn mu(&self) -> f64 {
        self.kappa1 * self.kappa1 * self.e_star
    }

    pub fn beta(&self, i: usize, s: f64) -> f64 {
        self.shapes[i].beta(s)
    }

    pub fn beta_jet(&self, i: usize, s: f64) -> [f64; 3] {
        self.shapes[i].jet(s)
    }

    pub fn phi(&self, s: f64) -> f64 {
        self.kappa1 * (s + self.kappa0)
    }

    /// The quasi-Einstein potential `u = −m log φ`.
    pub fn potential(&self, s: f64) -> f64 {
        -self.m * ln(self.phi(s))
    }

    /// `V(s) = ∏ β_i(s)^(n_i)` from the factored form.
    pub fn volume(&self, s: f64) -> f64 {
        self.shapes
            .iter()
            .zip(self.spec.factors())
            .map(|(sh, f)| crate::math::powi(sh.beta(s), f.n as i32))
            .product()
    }

    /// `[(log V)′, (log V)″]`.
    pub fn log_volume_derivatives(&self, s: f64) -> [f64; 2] {
        let mut l1 = 0.0;
        let mut l2 = 0.0;
        for (sh, f) in self.shapes.iter().zip(self.spec.factors()) {
            if f.n == 0 {
                continue;
            }
            let [b, b1, b2] = sh.jet(s);
            let n = f64::from(f.n);
            l1 += n * b1 / b;
            l2 += n * (b2 / b - (b1 / b) * (b1 / b));
        }
        [l1, l2]
    }

    /// `[W, (log W)′, (log W)″]` for `W = V u^(m−1)`.
    fn weight_jet(&self, s: f64) -> [f64; 3] {
        let u = s + self.kappa0;
        let [l1, l2] = self.log_volume_derivatives(s);
        let w = self.volume(s) * powf(u, self.m - 1.0);
        [w, l1 + (self.m - 1.0) / u, l2 - (self.m - 1.0) / (u * u)]
    }

    /// α and its first two derivatives from the closed form, with no
    /// endpoint series.
    pub fn alpha_jet_closed(&self, s: f64) -> [f64; 3] {
        let u = s + self.kappa0;
        let [w, lw1, lw2] = self.weight_jet(s);
        let [l1, _] = self.log_volume_derivatives(s);
        let h = self.e_star + 0.5 * self.epsilon * u * u;
        let h1 = self.epsilon * u;
        let a0 = self.numerator.eval(s) / w;
        let a1 = self.slope.eval(s) / w / w;
        let a2 = self.curvature.eval(s) / w / w / w;
        if a1.is_finite() && a2.is_finite() {
            return [a0, a1, a2];
        }
        let a1 = h / u - a0 * lw1;
        let g1_over_w = l1 * h / u + (self.m - 2.0) * h / (u * u) + h1 / u;
        let a2 = g1_over_w - 2.0 * a1 * lw1 - a0 * (lw1 * lw1 + lw2);
        [a0, a1, a2]
    }

    fn series_jet(&self, es: &EndSeries, s: f64) -> [f64; 3] {
        let [mut v, mut d1, mut d2] = es.regular.jet(s - es.center);
        if es.singular != 0.0 {
            let [w, lw1, lw2] = self.weight_jet(s);
            let y = es.singular / w;
            v += y;
            d1 -= y * lw1;
            d2 += y * (lw1 * lw1 - lw2);
        }
        [v, d1, d2]
    }

    /// `[α, α′, α″]` at `s`.
    pub fn alpha_jet(&self, s: f64) -> [f64; 3] {
        if (s - self.start.center).abs() <= self.start.zone {
            return self.series_jet(&self.start, s);
        }
        if let Some(end) = &self.end {
            if (s - end.center).abs() <= end.zone {
                return self.series_jet(end, s);
            }
        }
        self.alpha_jet_closed(s)
    }

    pub fn alpha(&self, s: f64) -> f64 {
        self.alpha_jet(s)[0]
    }

    /// `f = √α`.
    pub fn f(&self, s: f64) -> f64 {
        sqrt(self.alpha(s).max(0.0))
    }

    /// `g_i = √β_i`.
    pub fn g(&self, i: usize, s: f64) -> f64 {
        sqrt(self.beta(i, s).max(0.0))
    }

    /// Regular part of α at the far endpoint, i.e. α with the closing
    /// residual `G(s*)` removed. `None` for non-compact profiles.
    pub fn alpha_end_regular(&self) -> Option<[f64; 3]> {
        self.end.as_ref().map(|e| e.regular.jet(0.0))
    }

    /// α at `s* − d` for the exactly closed metric: inside the far series zone
    /// the defect `α(s*)` and any `G(s*)/W` term are dropped, and `d` enters
    /// the series without rounding through `s`. `None` for non-compact
    /// profiles.
    pub fn alpha_closed_below_end(&self, d: f64) -> Option<f64> {
        let end = self.end.as_ref()?;
        Some(if d <= end.zone {
            end.regular.jet(-d)[0] - end.regular.jet(0.0)[0]
        } else {
            self.alpha(self.s_star - d)
        })
    }

    /// `G(s*)`, the unnormalized closing residual, and its rounding scale.
    pub fn closing_residual(&self) -> Option<(f64, f64)> {
        self.s_star.is_finite().then(|| {
            (
                self.numerator.eval(self.s_star),
                self.numerator.rounding_scale(self.s_star),
            )
        })
    }

    /// Half-width of the series zone around `s = 0` and, when compact,
    /// around `s = s*`.
    pub fn series_zones(&self) -> (f64, Option<f64>) {
        (self.start.zone, self.end.as_ref().map(|e| e.zone))
    }
}
