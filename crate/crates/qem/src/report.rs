//! JSON forms of the core reports. Rationals are `"num/den"` strings.

use qem_core::bundle::{Check, ExpandingRegime};
use qem_core::construct::Closing;
use qem_core::verify::{
    Asymptotics, BoundaryReport, Completeness, Fit, GrowthLaw, OracleReport, ResidualReport,
};
use qem_core::{MetricProfile, ObstructionKind, ObstructionResult, ValidationReport};
use serde::Serialize;

pub fn rational_string(r: &ObstructionResult) -> String {
    format!("{}/{}", r.value.numer(), r.value.denom())
}

#[derive(Debug, Serialize)]
pub struct CheckDoc {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl From<&Check> for CheckDoc {
    fn from(c: &Check) -> Self {
        CheckDoc {
            name: c.name.clone(),
            passed: c.passed,
            detail: c.detail.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ValidationDoc {
    pub case: &'static str,
    pub m: f64,
    pub admissible: bool,
    pub normalized: bool,
    pub steady: bool,
    pub expanding_regime: &'static str,
    pub shrinking: bool,
    pub checks: Vec<CheckDoc>,
}

impl From<&ValidationReport> for ValidationDoc {
    fn from(r: &ValidationReport) -> Self {
        ValidationDoc {
            case: r.case.name(),
            m: r.m,
            admissible: r.is_admissible(),
            normalized: r.normalized,
            steady: r.steady,
            expanding_regime: match r.expanding_regime {
                ExpandingRegime::Strict => "strict",
                ExpandingRegime::Boundary => "boundary",
                ExpandingRegime::Opposite => "opposite",
            },
            shrinking: r.shrinking,
            checks: r.checks.iter().map(CheckDoc::from).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ObstructionDoc {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<Vec<i32>>,
    pub value: String,
    pub decimal: f64,
    pub sign: i8,
}

pub fn kind_name(k: ObstructionKind) -> &'static str {
    match k {
        ObstructionKind::Inv => "inv",
        ObstructionKind::Futaki => "futaki",
        ObstructionKind::LimitZero => "limit_zero",
        ObstructionKind::LimitInfinityScaled => "limit_infinity_scaled",
    }
}

impl From<&ObstructionResult> for ObstructionDoc {
    fn from(r: &ObstructionResult) -> Self {
        ObstructionDoc {
            kind: kind_name(r.kind),
            chi: r.chi.as_ref().map(|c| c.to_ints()),
            value: rational_string(r),
            decimal: r.to_f64(),
            sign: r.sign,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BoundaryEntryDoc {
    pub name: &'static str,
    pub value: f64,
    pub target: f64,
    pub scaled_error: f64,
}

#[derive(Debug, Serialize)]
pub struct BoundaryDoc {
    pub max_error: f64,
    pub entries: Vec<BoundaryEntryDoc>,
}

impl From<&BoundaryReport> for BoundaryDoc {
    fn from(b: &BoundaryReport) -> Self {
        BoundaryDoc {
            max_error: b.max_error,
            entries: b
                .entries
                .iter()
                .map(|e| BoundaryEntryDoc {
                    name: e.name,
                    value: e.value,
                    target: e.target,
                    scaled_error: e.scaled_error,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ClosingDoc {
    pub value: f64,
    pub scale: f64,
    pub relative: f64,
}

impl From<&Closing> for ClosingDoc {
    fn from(c: &Closing) -> Self {
        ClosingDoc {
            value: c.value,
            scale: c.scale,
            relative: c.relative(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ProfileDoc {
    pub case: &'static str,
    pub m: f64,
    pub epsilon: f64,
    pub e_star: f64,
    pub kappa0: f64,
    pub kappa1: f64,
    #[serde(rename = "A")]
    pub a: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<Vec<i32>>,
    /// `null` for the non-compact cases.
    pub s_star: Option<f64>,
    pub mu: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closing: Option<ClosingDoc>,
    pub boundary: BoundaryDoc,
}

impl ProfileDoc {
    pub fn new(p: &MetricProfile, closing: Option<&Closing>) -> Self {
        ProfileDoc {
            case: p.case().name(),
            m: p.m(),
            epsilon: p.epsilon(),
            e_star: p.e_star(),
            kappa0: p.kappa0(),
            kappa1: p.kappa1(),
            a: p.a(),
            chi: p.chi().map(|c| c.to_ints()),
            s_star: p.is_compact().then(|| p.s_star()),
            mu: p.mu(),
            closing: closing.map(ClosingDoc::from),
            boundary: BoundaryDoc::from(&qem_core::boundary_check(p)),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct EquationDoc {
    pub label: String,
    pub max_rel: f64,
    pub absolute: Vec<f64>,
    pub relative: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct ResidualDoc {
    pub max_rel: f64,
    pub mu_expected: f64,
    pub mu_spread: f64,
    pub mu_spread_raw: f64,
    pub j_defect: f64,
    pub grid: Vec<f64>,
    pub mu: Vec<f64>,
    pub equations: Vec<EquationDoc>,
}

impl From<&ResidualReport> for ResidualDoc {
    fn from(r: &ResidualReport) -> Self {
        ResidualDoc {
            max_rel: r.max_rel,
            mu_expected: r.mu_expected,
            mu_spread: r.mu_spread,
            mu_spread_raw: r.mu_spread_raw,
            j_defect: r.j_defect,
            grid: r.grid.clone(),
            mu: r.mu.clone(),
            equations: r
                .equations
                .iter()
                .map(|e| EquationDoc {
                    label: e.label.clone(),
                    max_rel: e.max_rel,
                    absolute: e.absolute.clone(),
                    relative: e.relative.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OracleDoc {
    pub max_rel: f64,
    pub points: Vec<f64>,
    pub closed: Vec<f64>,
    pub quadrature: Vec<f64>,
}

impl From<&OracleReport> for OracleDoc {
    fn from(o: &OracleReport) -> Self {
        OracleDoc {
            max_rel: o.max_rel,
            points: o.points.clone(),
            closed: o.closed.clone(),
            quadrature: o.quadrature.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FitDoc {
    pub law: &'static str,
    pub intercept: f64,
    pub slope: f64,
    pub residual: f64,
}

impl From<&Fit> for FitDoc {
    fn from(f: &Fit) -> Self {
        let law = match f.law {
            GrowthLaw::Linear => "linear",
            GrowthLaw::Logarithmic => "logarithmic",
        };
        FitDoc {
            law,
            intercept: f.intercept,
            slope: f.slope,
            residual: f.residual,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CompletenessDoc {
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitDoc>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<FitDoc>,
}

impl From<&Completeness> for CompletenessDoc {
    fn from(c: &Completeness) -> Self {
        match c {
            Completeness::Divergent(fit) => CompletenessDoc {
                verdict: "divergent",
                fit: Some(FitDoc::from(fit)),
                candidates: Vec::new(),
            },
            Completeness::Inconclusive {
                linear,
                logarithmic,
                ..
            } => CompletenessDoc {
                verdict: "inconclusive",
                fit: None,
                candidates: vec![FitDoc::from(linear), FitDoc::from(logarithmic)],
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AsymptoticsDoc {
    pub predicted: f64,
    pub observed: [f64; 3],
    pub relative_error: f64,
}

impl From<&Asymptotics> for AsymptoticsDoc {
    fn from(a: &Asymptotics) -> Self {
        AsymptoticsDoc {
            predicted: a.predicted,
            observed: a.observed,
            relative_error: a.relative_error,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyDoc {
    pub profile: ProfileDoc,
    pub residuals: ResidualDoc,
    pub oracle: OracleDoc,
    pub arc_length_max_rel: [f64; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub completeness: Option<CompletenessDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymptotics: Option<AsymptoticsDoc>,
}
