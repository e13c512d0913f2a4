//! Generalized polynomials `Σ c_k u^(k+σ)` in the shifted variable
//! `u = s + κ₀`, and exact polynomials over the rationals.
//!
//! The float type carries every closed form the constructions need: the
//! volume polynomial `V`, the integrand of the α formula and its
//! antiderivative. The rational type is reserved for sign-critical
//! obstruction integrals.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::math::{floor, powf, powi};

/// `Σ_k c_k (s+κ₀)^(k+σ)`.
///
/// Coefficients are held in double-double precision and evaluation runs a
/// double-double Horner scheme at the exact `u = s + κ₀`, so expanded
/// products keep their accuracy through heavy cancellation. A non-negative
/// integer `σ` is folded into the coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct GenPoly {
    sigma: f64,
    coeffs: Vec<Dd>,
    kappa0: f64,
}

const MAX_FOLD: f64 = 64.0;

impl GenPoly {
    pub fn new(sigma: f64, coeffs: Vec<f64>, kappa0: f64) -> Self {
        GenPoly::from_dd(sigma, coeffs.into_iter().map(Dd::new).collect(), kappa0)
    }

    fn from_dd(sigma: f64, mut coeffs: Vec<Dd>, kappa0: f64) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let mut sigma = sigma;
        if sigma > 0.0 && sigma <= MAX_FOLD && floor(sigma) == sigma && !coeffs.is_empty() {
            let shift = sigma as usize;
            let mut folded = vec![Dd::ZERO; shift];
            folded.extend(coeffs);
            coeffs = folded;
            sigma = 0.0;
        }
        GenPoly {
            sigma,
            coeffs,
            kappa0,
        }
    }

    pub fn zero(kappa0: f64) -> Self {
        GenPoly {
            sigma: 0.0,
            coeffs: Vec::new(),
            kappa0,
        }
    }

    pub fn constant(c: f64, kappa0: f64) -> Self {
        GenPoly::new(0.0, vec![c], kappa0)
    }

    /// `u^σ`.
    pub fn power(sigma: f64, kappa0: f64) -> Self {
        GenPoly::new(sigma, vec![1.0], kappa0)
    }

    /// `a(u² − r²)` with the constant term formed exactly.
    pub fn even_quadratic(a: f64, r: f64, kappa0: f64) -> Self {
        let c0 = Dd::prod(r, r).mul_f64(a).neg();
        GenPoly::from_dd(0.0, vec![c0, Dd::ZERO, Dd::new(a)], kappa0)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Coefficients rounded to double.
    pub fn coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64()).collect()
    }

    pub fn kappa0(&self) -> f64 {
        self.kappa0
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest integer index `k` carrying a coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn check_shift(&self, other: &GenPoly) -> Result<()> {
        if self.kappa0 != other.kappa0 {
            return Err(Error::KappaMismatch {
                left: self.kappa0,
                right: other.kappa0,
            });
        }
        Ok(())
    }

    fn eval_dd(&self, u: Dd) -> Dd {
        let horner = self
            .coeffs
            .iter()
            .rev()
            .fold(Dd::ZERO, |acc, &c| acc.mul(u).add(c));
        if self.sigma == 0.0 {
            return horner;
        }
        // u^σ to first order in lo/hi; the power itself carries one rounding.
        let p = powf(u.hi, self.sigma);
        let factor = Dd::sum(p, p * self.sigma * (u.lo / u.hi));
        horner.mul(factor)
    }

    /// Evaluates at `u` directly.
    pub fn eval_u(&self, u: f64) -> f64 {
        self.eval_dd(Dd::new(u)).to_f64()
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.eval_dd(Dd::sum(s, self.kappa0)).to_f64()
    }

    /// `Σ |c_k| u^(k+σ)`, the magnitude the terms of an evaluation cancel from.
    pub fn abs_eval_u(&self, u: f64) -> f64 {
        let u = u.abs();
        let horner = self
            .coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * u + c.to_f64().abs());
        if self.sigma == 0.0 {
            horner
        } else {
            horner * powf(u, self.sigma)
        }
    }

    /// Cauchy product; offsets add.
    pub fn mul(&self, other: &GenPoly) -> Result<GenPoly> {
        self.check_shift(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(GenPoly {
                sigma: self.sigma + other.sigma,
                coeffs: Vec::new(),
                kappa0: self.kappa0,
            });
        }
        let mut c = vec![Dd::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].add(a.mul(b));
            }
        }
        Ok(GenPoly::from_dd(self.sigma + other.sigma, c, self.kappa0))
    }

    /// Sum of two generalized polynomials with the same offset.
    pub fn add(&self, other: &GenPoly) -> Result<GenPoly> {
        self.check_shift(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.sigma != other.sigma {
            return Err(Error::SigmaMismatch {
                left: self.sigma,
                right: other.sigma,
            });
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or_default();
                a.add(other.coeffs.get(k).copied().unwrap_or_default())
            })
            .collect();
        Ok(GenPoly::from_dd(self.sigma, c, self.kappa0))
    }

    pub fn scale(&self, factor: f64) -> GenPoly {
        GenPoly::from_dd(
            self.sigma,
            self.coeffs.iter().map(|c| c.mul_f64(factor)).collect(),
            self.kappa0,
        )
    }

    pub fn pow(&self, n: u32) -> GenPoly {
        let mut acc = GenPoly::new(0.0, vec![1.0], self.kappa0);
        for _ in 0..n {
            acc = acc.mul(self).expect("same shift");
        }
        acc
    }

    /// `c_k u^(k+σ) ↦ c_k (k+σ) u^(k+σ−1)`.
    pub fn derivative(&self) -> GenPoly {
        let mut c: Vec<Dd> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.mul_f64(k as f64 + self.sigma))
            .collect();
        let mut sigma = self.sigma - 1.0;
        if self.sigma == 0.0 && !c.is_empty() {
            c.remove(0);
            sigma = 0.0;
        }
        GenPoly::from_dd(sigma, c, self.kappa0)
    }

    /// The antiderivative `F` with `F(s_lo) = 0`.
    pub fn antiderivative_from(&self, s_lo: f64) -> Result<Antiderivative> {
        let mut c = Vec::with_capacity(self.coeffs.len());
        for (k, &ck) in self.coeffs.iter().enumerate() {
            let e = k as f64 + self.sigma + 1.0;
            if e == 0.0 {
                if ck.is_zero() {
                    c.push(Dd::ZERO);
                    continue;
                }
                return Err(Error::LogarithmicTerm { degree: k });
            }
            c.push(ck.div_f64(e));
        }
        let poly = GenPoly::from_dd(self.sigma + 1.0, c, self.kappa0);
        let constant = poly.eval_dd(Dd::sum(s_lo, self.kappa0)).neg();
        Ok(Antiderivative { poly, constant })
    }
}

impl fmt::Display for GenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            f.write_str("0")?;
        }
        let mut first = true;
        for (k, c) in self.coeffs().into_iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if self.sigma == 0.0 {
                write!(f, "{c}·u^{k}")?;
            } else {
                write!(f, "{c}·u^({k}{:+})", self.sigma)?;
            }
        }
        write!(f, ", u = s+{}", self.kappa0)
    }
}

/// A generalized polynomial plus the constant fixing its base point.
#[derive(Debug, Clone, PartialEq)]
pub struct Antiderivative {
    poly: GenPoly,
    constant: Dd,
}

impl Antiderivative {
    pub fn poly(&self) -> &GenPoly {
        &self.poly
    }

    pub fn constant(&self) -> f64 {
        self.constant.to_f64()
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.poly
            .eval_dd(Dd::sum(s, self.poly.kappa0))
            .add(self.constant)
            .to_f64()
    }

    /// Magnitude the terms of [`Antiderivative::eval`] cancel from at `s`.
    pub fn rounding_scale(&self, s: f64) -> f64 {
        self.poly.abs_eval_u(s + self.poly.kappa0()) + self.constant.to_f64().abs()
    }

    pub(crate) fn as_sum(&self) -> GenSum {
        let c = GenPoly::from_dd(0.0, vec![self.constant], self.poly.kappa0);
        GenSum::from_poly(self.poly.clone()).add(&GenSum::from_poly(c))
    }

    /// Definite integral of the underlying integrand over `[a, b]`.
    pub fn definite(&self, a: f64, b: f64) -> f64 {
        let k0 = self.poly.kappa0;
        self.poly
            .eval_dd(Dd::sum(b, k0))
            .sub(self.poly.eval_dd(Dd::sum(a, k0)))
            .to_f64()
    }
}

/// A finite sum of generalized polynomials with distinct exponents `σ`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct GenSum {
    terms: Vec<GenPoly>,
}

impl GenSum {
    pub fn from_poly(p: GenPoly) -> Self {
        let mut s = GenSum { terms: Vec::new() };
        s.push(p);
        s
    }

    fn push(&mut self, p: GenPoly) {
        if p.is_zero() {
            return;
        }
        if let Some(t) = self.terms.iter_mut().find(|t| t.sigma == p.sigma) {
            *t = t.add(&p).expect("same shift");
        } else {
            self.terms.push(p);
        }
    }

    pub fn add(&self, other: &GenSum) -> GenSum {
        let mut s = self.clone();
        for t in &other.terms {
            s.push(t.clone());
        }
        s
    }

    pub fn scale(&self, factor: f64) -> GenSum {
        GenSum {
            terms: self.terms.iter().map(|t| t.scale(factor)).collect(),
        }
    }

    pub fn mul(&self, other: &GenSum) -> GenSum {
        let mut s = GenSum { terms: Vec::new() };
        for a in &self.terms {
            for b in &other.terms {
                s.push(a.mul(b).expect("same shift"));
            }
        }
        s
    }

    pub fn derivative(&self) -> GenSum {
        let mut s = GenSum { terms: Vec::new() };
        for t in &self.terms {
            s.push(t.derivative());
        }
        s
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.terms
            .iter()
            .fold(Dd::ZERO, |acc, t| acc.add(t.eval_dd(Dd::sum(s, t.kappa0))))
            .to_f64()
    }
}

/// Exact polynomial `Σ c_k x^k` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

fn trim_rational(mut c: Vec<BigRational>) -> Vec<BigRational> {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

impl RationalPoly {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        RationalPoly {
            coeffs: trim_rational(coeffs),
        }
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RationalPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        RationalPoly::new(vec![c])
    }

    /// `x`.
    pub fn x() -> Self {
        RationalPoly::new(vec![BigRational::zero(), BigRational::one()])
    }

    /// `a + b·x`.
    pub fn linear(a: BigRational, b: BigRational) -> Self {
        RationalPoly::new(vec![a, b])
    }

    /// Convenience constructor from integer numerator/denominator pairs.
    pub fn from_ratios(c: &[(i64, i64)]) -> Self {
        RationalPoly::new(c.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &RationalPoly) -> RationalPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        let c = (0..len)
            .map(|k| self.coeffs.get(k).unwrap_or(&zero) + other.coeffs.get(k).unwrap_or(&zero))
            .collect();
        RationalPoly::new(c)
    }

    pub fn mul(&self, other: &RationalPoly) -> RationalPoly {
        if self.is_zero() || other.is_zero() {
            return RationalPoly::zero();
        }
        let mut c = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RationalPoly::new(c)
    }

    pub fn scale(&self, factor: &BigRational) -> RationalPoly {
        RationalPoly::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn pow(&self, n: u32) -> RationalPoly {
        (0..n).fold(RationalPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> RationalPoly {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(BigRational::zero());
        for (k, ck) in self.coeffs.iter().enumerate() {
            c.push(ck / BigRational::from_integer(BigInt::from(k + 1)));
        }
        RationalPoly::new(c)
    }

    /// Exact `∫_lo^hi p(x) dx`.
    pub fn integrate(&self, lo: &BigRational, hi: &BigRational) -> BigRational {
        let anti = self.antiderivative();
        anti.eval(hi) - anti.eval(lo)
    }

    /// Float image of the coefficients.
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }
}

pub(crate) fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Nearest-ish double for a big rational (exact for moderately sized parts).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Fall back to scaling by powers of two when the parts overflow.
    let num_bits = r.numer().bits() as i64;
    let den_bits = r.denom().bits() as i64;
    let shift = num_bits - den_bits;
    let scaled = if shift > 0 {
        BigRational::new(r.numer().clone(), r.denom().clone() << (shift as usize))
    } else {
        BigRational::new(r.numer().clone() << ((-shift) as usize), r.denom().clone())
    };
    scaled.to_f64().unwrap_or(f64::NAN) * powi(2.0, shift as i32)
}

/// `-1`, `0` or `+1`.
pub fn rational_sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}
