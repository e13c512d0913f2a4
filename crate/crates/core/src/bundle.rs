//! Discrete bundle data: the Fano Kähler–Einstein factors, the Euler class
//! of the circle bundle, and the sign vectors χ used by the compact
//! shrinking construction.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{check_m, Error, Result};

/// Which of the three quasi-Einstein regimes is being constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    Steady,
    Expanding,
    Shrinking,
}

impl Case {
    /// The constant ε in `Ric + Hess u − du⊗du/m + (ε/2) g = 0`, normalized
    /// to remove homothety.
    pub fn epsilon(self) -> f64 {
        match self {
            Case::Steady => 0.0,
            Case::Expanding => 1.0,
            Case::Shrinking => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Case::Steady => "steady",
            Case::Expanding => "expanding",
            Case::Shrinking => "shrinking",
        }
    }

    pub fn is_compact(self) -> bool {
        self == Case::Shrinking
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One base factor `V_i`: complex dimension `n`, first Chern class `p·a`,
/// and Euler-class coefficient `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FanoFactor {
    pub n: u32,
    pub p: u32,
    pub q: i32,
}

impl FanoFactor {
    pub const fn new(n: u32, p: u32, q: i32) -> Self {
        FanoFactor { n, p, q }
    }

    pub fn abs_q(&self) -> u32 {
        self.q.unsigned_abs()
    }

    /// `p / |q|` as a float.
    pub fn ratio(&self) -> f64 {
        f64::from(self.p) / f64::from(self.abs_q())
    }
}

/// Ordered list of factors together with the intended regime.
///
/// Construction only checks structure (nonzero `q`, positive `p`,
/// zero-dimensional factors only at the ends). Theorem hypotheses are
/// reported by [`validate_bundle`], never enforced here.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BundleSpec {
    factors: Vec<FanoFactor>,
    case: Case,
}

impl BundleSpec {
    pub fn new(factors: Vec<FanoFactor>, case: Case) -> Result<Self> {
        let r = factors.len();
        if r < 2 {
            return Err(Error::TooFewFactors(r));
        }
        for (index, f) in factors.iter().enumerate() {
            if f.q == 0 {
                return Err(Error::InvalidFactor {
                    index,
                    reason: "q must be nonzero",
                });
            }
            if f.p == 0 {
                return Err(Error::InvalidFactor {
                    index,
                    reason: "p must be positive",
                });
            }
            if f.n == 0 && index != 0 && index != r - 1 {
                return Err(Error::InvalidFactor {
                    index,
                    reason: "zero-dimensional factors are only allowed at the ends",
                });
            }
        }
        Ok(BundleSpec { factors, case })
    }

    /// The worked example over CP² × CP²: `n = (0,2,2,0)`, `p = (1,3,3,1)`,
    /// `q = (1,1,−2,1)`.
    pub fn cp2_cp2_example() -> Self {
        BundleSpec {
            factors: alloc::vec![
                FanoFactor::new(0, 1, 1),
                FanoFactor::new(2, 3, 1),
                FanoFactor::new(2, 3, -2),
                FanoFactor::new(0, 1, 1),
            ],
            case: Case::Shrinking,
        }
    }

    pub fn factors(&self) -> &[FanoFactor] {
        &self.factors
    }

    pub fn case(&self) -> Case {
        self.case
    }

    pub fn with_case(&self, case: Case) -> Self {
        BundleSpec {
            factors: self.factors.clone(),
            case,
        }
    }

    pub fn r(&self) -> usize {
        self.factors.len()
    }

    pub fn first(&self) -> &FanoFactor {
        &self.factors[0]
    }

    pub fn last(&self) -> &FanoFactor {
        &self.factors[self.factors.len() - 1]
    }

    /// `Σ n_i`.
    pub fn total_dim(&self) -> u32 {
        self.factors.iter().map(|f| f.n).sum()
    }

    /// Real dimension of the total space, `2Σn_i + 2`.
    pub fn real_dim(&self) -> u32 {
        2 * self.total_dim() + 2
    }
}

/// A sign ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.value())
    }

    pub fn from_i32(v: i32) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// Sign vector χ with `χ₁ = +1` and `χ_r = −1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChiVector(Vec<Sign>);

impl ChiVector {
    pub fn new(signs: Vec<Sign>) -> Result<Self> {
        if signs.len() < 2 {
            return Err(Error::InvalidChi(format!(
                "need at least two entries, got {}",
                signs.len()
            )));
        }
        if signs[0] != Sign::Plus || signs[signs.len() - 1] != Sign::Minus {
            return Err(Error::InvalidChi(String::from(
                "ends must be fixed as chi_1 = +1, chi_r = -1",
            )));
        }
        Ok(ChiVector(signs))
    }

    pub fn from_ints(values: &[i32]) -> Result<Self> {
        let signs = values
            .iter()
            .map(|&v| {
                Sign::from_i32(v)
                    .ok_or_else(|| Error::InvalidChi(format!("entry {v} is not +1 or -1")))
            })
            .collect::<Result<Vec<_>>>()?;
        ChiVector::new(signs)
    }

    /// Checks the length against a bundle.
    pub fn for_spec(self, spec: &BundleSpec) -> Result<Self> {
        if self.0.len() != spec.r() {
            return Err(Error::InvalidChi(format!(
                "length {} does not match r = {}",
                self.0.len(),
                spec.r()
            )));
        }
        Ok(self)
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn to_ints(&self) -> Vec<i32> {
        self.0.iter().map(|s| s.value()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `S = (−1)^(Σ_{χ_i = −1} n_i)`.
    pub fn parity_sign(&self, spec: &BundleSpec) -> i32 {
        let odd: u32 = self
            .0
            .iter()
            .zip(spec.factors())
            .filter(|(s, _)| **s == Sign::Minus)
            .map(|(_, f)| f.n)
            .sum();
        if odd.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for ChiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if *s == Sign::Plus { "+1" } else { "-1" })?;
        }
        f.write_str(")")
    }
}

/// All `2^(r−2)` sign vectors with fixed ends, `+` before `−`
/// lexicographically.
pub fn enumerate_chi(spec: &BundleSpec) -> Vec<ChiVector> {
    let r = spec.r();
    let free = r - 2;
    let count = 1usize << free;
    (0..count)
        .map(|mask| {
            let mut signs = Vec::with_capacity(r);
            signs.push(Sign::Plus);
            for j in 0..free {
                let bit = (mask >> (free - 1 - j)) & 1;
                signs.push(if bit == 1 { Sign::Minus } else { Sign::Plus });
            }
            signs.push(Sign::Minus);
            ChiVector(signs)
        })
        .collect()
}

/// One line of a [`ValidationReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Which side of `(n₁+1)|q_i| ≤ p_i` the expanding construction sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpandingRegime {
    /// `(n₁+1)|q_i| < p_i` for every `i ≥ 2`; both κ₀ branches exist.
    Strict,
    /// `≤` everywhere with equality somewhere; only the plus branch.
    Boundary,
    /// Some factor has `(n₁+1)|q_i| > p_i`; plus branch with a narrowed window.
    Opposite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub m: f64,
    pub case: Case,
    pub checks: Vec<Check>,
    /// `r ≥ 3`, `|q₁| = 1` and `p₁ = n₁ + 1`.
    pub normalized: bool,
    /// `(n₁+1)|q_i| < p_i` for all `2 ≤ i ≤ r`.
    pub steady: bool,
    pub expanding_regime: ExpandingRegime,
    /// End normalization at `V_r` plus both strict end inequalities.
    pub shrinking: bool,
}

impl ValidationReport {
    pub fn admissible(&self, case: Case) -> bool {
        self.normalized
            && match case {
                Case::Steady => self.steady,
                Case::Expanding => true,
                Case::Shrinking => self.shrinking,
            }
    }

    /// Admissibility for the case the bundle was declared with.
    pub fn is_admissible(&self) -> bool {
        self.admissible(self.case)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub(crate) fn failure_summary(&self, prefix: &str) -> String {
        let mut out = String::new();
        for c in self
            .checks
            .iter()
            .filter(|c| !c.passed && (c.name.starts_with(prefix) || !c.name.contains(':')))
        {
            if !out.is_empty() {
                out.push_str("; ");
            }
            out.push_str(&c.name);
            out.push_str(" (");
            out.push_str(&c.detail);
            out.push(')');
        }
        out
    }
}

/// Checks every theorem hypothesis and reports each one.
pub fn validate_bundle(spec: &BundleSpec, m: f64) -> Result<ValidationReport> {
    check_m(m)?;
    let fs = spec.factors();
    let r = fs.len();
    let first = fs[0];
    let last = fs[r - 1];
    let mut checks = Vec::new();
    let mut push = |name: String, passed: bool, detail: String| {
        checks.push(Check {
            name,
            passed,
            detail,
        })
    };

    push(String::from("r >= 3"), r >= 3, format!("r = {r}"));
    push(
        String::from("|q_1| = 1"),
        first.abs_q() == 1,
        format!("q_1 = {}", first.q),
    );
    push(
        String::from("p_1 = n_1 + 1"),
        first.p == first.n + 1,
        format!("p_1 = {}, n_1 = {}", first.p, first.n),
    );
    let normalized = r >= 3 && first.abs_q() == 1 && first.p == first.n + 1;

    let n1 = u64::from(first.n) + 1;
    let mut steady = true;
    let mut any_equal = false;
    let mut any_opposite = false;
    for (i, f) in fs.iter().enumerate().skip(1) {
        let lhs = n1 * u64::from(f.abs_q());
        let p = u64::from(f.p);
        let strict = lhs < p;
        steady &= strict;
        any_equal |= lhs == p;
        any_opposite |= lhs > p;
        push(
            format!("steady: (n_1+1)|q_{}| < p_{}", i + 1, i + 1),
            strict,
            format!("{lhs} vs {p}"),
        );
        push(
            format!("expanding: (n_1+1)|q_{}| <= p_{}", i + 1, i + 1),
            lhs <= p,
            format!("{lhs} vs {p} (violation selects the narrowed window)"),
        );
    }
    let expanding_regime = if any_opposite {
        ExpandingRegime::Opposite
    } else if any_equal {
        ExpandingRegime::Boundary
    } else {
        ExpandingRegime::Strict
    };

    let nr = u64::from(last.n) + 1;
    let mut shrinking = last.abs_q() == 1 && last.p == last.n + 1;
    push(
        String::from("shrinking: |q_r| = 1"),
        last.abs_q() == 1,
        format!("q_r = {}", last.q),
    );
    push(
        String::from("shrinking: p_r = n_r + 1"),
        last.p == last.n + 1,
        format!("p_r = {}, n_r = {}", last.p, last.n),
    );
    for (i, f) in fs.iter().enumerate().take(r - 1).skip(1) {
        let q = u64::from(f.abs_q());
        let p = u64::from(f.p);
        let a = n1 * q < p;
        let b = nr * q < p;
        shrinking &= a && b;
        push(
            format!("shrinking: |q_{}|(n_1+1) < p_{}", i + 1, i + 1),
            a,
            format!("{} vs {p}", n1 * q),
        );
        push(
            format!("shrinking: |q_{}|(n_r+1) < p_{}", i + 1, i + 1),
            b,
            format!("{} vs {p}", nr * q),
        );
    }

    Ok(ValidationReport {
        m,
        case: spec.case(),
        checks,
        normalized,
        steady,
        expanding_regime,
        shrinking,
    })
}
