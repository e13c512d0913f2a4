//! Exact obstruction integrals and the limits of the transformed closing
//! function `F(E*)`.
//!
//! All polynomial integrals run over `[−(n₁+1), n_r+1]` (or its shifted
//! image) with rational endpoints, so they are evaluated exactly.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::bundle::{enumerate_chi, BundleSpec, Case, ChiVector, Sign};
use crate::construct::{a_coeff, kappa0_from_consistency, Branch};
use crate::error::{check_m, Result};
use crate::genpoly::{ratio, rational_sign, rational_to_f64, GenPoly, RationalPoly};
use crate::math::{floor, powf, sqrt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObstructionKind {
    Inv,
    Futaki,
    LimitZero,
    LimitInfinityScaled,
}

/// Exact value and sign of one obstruction integral.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstructionResult {
    pub value: BigRational,
    /// Exact sign of `value`.
    pub sign: i8,
    pub chi: Option<ChiVector>,
    pub kind: ObstructionKind,
}

impl ObstructionResult {
    fn new(value: BigRational, chi: Option<ChiVector>, kind: ObstructionKind) -> Self {
        let sign = rational_sign(&value);
        ObstructionResult {
            value,
            sign,
            chi,
            kind,
        }
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.value)
    }
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn bounds(spec: &BundleSpec) -> (BigRational, BigRational) {
    (
        big(-(i64::from(spec.first().n) + 1)),
        big(i64::from(spec.last().n) + 1),
    )
}

/// `∫_{−(n₁+1)}^{n_r+1} ∏ (χ_i x + p_i/|q_i|)^(n_i) x dx`.
pub fn inv_integral(spec: &BundleSpec, chi: &ChiVector) -> Result<ObstructionResult> {
    let chi = chi.clone().for_spec(spec)?;
    let integrand =
        spec.factors()
            .iter()
            .zip(chi.signs())
            .fold(RationalPoly::x(), |acc, (f, s)| {
                let lin = RationalPoly::linear(
                    ratio(i64::from(f.p), i64::from(f.abs_q())),
                    big(i64::from(s.value())),
                );
                acc.mul(&lin.pow(f.n))
            });
    let (lo, hi) = bounds(spec);
    Ok(ObstructionResult::new(
        integrand.integrate(&lo, &hi),
        Some(chi),
        ObstructionKind::Inv,
    ))
}

/// `∫_{−(n₁+1)}^{n_r+1} ∏ (p_i/q_i − x)^(n_i) x dx`; zero in the
/// Kähler–Einstein situation.
pub fn futaki_integral(spec: &BundleSpec) -> ObstructionResult {
    let integrand = spec.factors().iter().fold(RationalPoly::x(), |acc, f| {
        let lin = RationalPoly::linear(ratio(i64::from(f.p), i64::from(f.q)), big(-1));
        acc.mul(&lin.pow(f.n))
    });
    let (lo, hi) = bounds(spec);
    ObstructionResult::new(integrand.integrate(&lo, &hi), None, ObstructionKind::Futaki)
}

/// The polynomial `P(y) = ∏_{χ=+1} y^(2n_i) ∏_{χ=−1} (4p_i²/q_i² − y²)^(n_i)`
/// in `y = x + n₁ + 1`.
fn limit_zero_poly(spec: &BundleSpec, chi: &ChiVector) -> RationalPoly {
    spec.factors()
        .iter()
        .zip(chi.signs())
        .fold(RationalPoly::one(), |acc, (f, s)| {
            let factor = match s {
                Sign::Plus => RationalPoly::x().pow(2),
                Sign::Minus => {
                    let c = ratio(
                        4 * i64::from(f.p) * i64::from(f.p),
                        i64::from(f.q) * i64::from(f.q),
                    );
                    RationalPoly::new(alloc::vec![c, BigRational::zero(), big(-1)])
                }
            };
            acc.mul(&factor.pow(f.n))
        })
}

/// Value of the `E* → 0` limit of `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitZero {
    pub value: f64,
    /// Present when `m` is an integer.
    pub exact: Option<BigRational>,
    pub sign: i8,
}

/// `S·∫₀^{2(n_r+1)} P(y) y^m dy`, the `E* → 0` limit of `F(E*)`, with
/// `S = (−1)^(Σ_{χ_i=−1} n_i)`.
pub fn limit_zero_integral(spec: &BundleSpec, m: f64, chi: &ChiVector) -> Result<LimitZero> {
    check_m(m)?;
    let chi = chi.clone().for_spec(spec)?;
    let s = chi.parity_sign(spec);
    let poly = limit_zero_poly(spec, &chi);
    let top = 2 * (i64::from(spec.last().n) + 1);
    if floor(m) == m && m <= 64.0 {
        let shifted = poly.mul(&RationalPoly::x().pow(m as u32));
        let exact = shifted.integrate(&BigRational::zero(), &big(top)) * big(i64::from(s));
        let sign = rational_sign(&exact);
        return Ok(LimitZero {
            value: rational_to_f64(&exact),
            exact: Some(exact),
            sign,
        });
    }
    let top = top as f64;
    let value = f64::from(s)
        * poly
            .to_f64_coeffs()
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let e = k as f64 + m + 1.0;
                c * powf(top, e) / e
            })
            .sum::<f64>();
    Ok(LimitZero {
        value,
        exact: None,
        sign: crate::root::sign(value),
    })
}

/// `S·Inv(χ)`: the rational core of the scaled `E* → ∞` limit of `F`.
pub fn limit_infinity_scaled(spec: &BundleSpec, chi: &ChiVector) -> Result<ObstructionResult> {
    let inv = inv_integral(spec, chi)?;
    let s = inv.chi.as_ref().map_or(1, |c| c.parity_sign(spec));
    Ok(ObstructionResult::new(
        inv.value * big(i64::from(s)),
        inv.chi,
        ObstructionKind::LimitInfinityScaled,
    ))
}

/// Every sign vector with a strictly negative admissibility integral.
pub fn find_admissible_chi(spec: &BundleSpec) -> Vec<ChiVector> {
    enumerate_chi(spec)
        .into_iter()
        .filter(|chi| inv_integral(spec, chi).map(|r| r.sign < 0).unwrap_or(false))
        .collect()
}

/// The closing function after `x = (s+κ₀)/2 − R`, `R = √((n₁+1)² + E*/2)`:
///
/// `F(E*) = ∫_{−(n₁+1)}^{x₁} ∏((x+R)² − ρ_i²/4)^(n_i) (x+R)^(m−2) ((x+R)² − E*/2) dx`
///
/// with `x₁ = b + √(b² + E*/2) − R`, `b = n_r + 1`. Built independently of
/// the s-coordinate construction; the two agree through
/// `closing = 2^(2N+m)·F`.
pub fn transformed_closing(spec: &BundleSpec, m: f64, e_star: f64, chi: &ChiVector) -> Result<f64> {
    check_m(m)?;
    let chi = chi.clone().for_spec(spec)?;
    let a = f64::from(spec.first().n) + 1.0;
    let b = f64::from(spec.last().n) + 1.0;
    let big_r = sqrt(a * a + 0.5 * e_star);
    let x_hi = b + sqrt(b * b + 0.5 * e_star) - big_r;
    let r = spec.r();
    let mut integrand = GenPoly::constant(1.0, big_r);
    for (i, (f, s)) in spec.factors().iter().zip(chi.signs()).enumerate() {
        let half_root = if i == 0 {
            0.5 * kappa0_from_consistency(spec.first().n, e_star, Case::Shrinking, Branch::Plus)?
        } else if i == r - 1 {
            b + sqrt(b * b + 0.5 * e_star)
        } else {
            let coeff =
                a_coeff(f.p, f.q, e_star, Case::Shrinking, *s).map_err(|e| e.at_factor(i + 1))?;
            f64::from(f.abs_q()) / (4.0 * coeff.abs())
        };
        let quad = GenPoly::even_quadratic(1.0, half_root, big_r);
        integrand = integrand.mul(&quad.pow(f.n))?;
    }
    integrand = integrand
        .mul(&GenPoly::power(m - 2.0, big_r))?
        .mul(&GenPoly::new(
            0.0,
            alloc::vec![-0.5 * e_star, 0.0, 1.0],
            big_r,
        ))?;
    Ok(integrand.antiderivative_from(-a)?.eval(x_hi))
}

/// Total `N = Σ n_i`.
#[cfg(test)]
fn total_n(spec: &BundleSpec) -> u32 {
    spec.factors().iter().map(|f| f.n).sum()
}
