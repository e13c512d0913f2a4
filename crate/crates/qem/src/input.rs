//! The bundle document read by every command.
//!
//! ```json
//! { "case": "shrinking", "m": 2.0,
//!   "factors": [{"n": 0, "p": 1, "q": 1}, {"n": 2, "p": 3, "q": 1}, ...],
//!   "chi": [1, 1, -1, -1] }
//! ```
//!
//! `chi` is optional. Unknown keys are rejected.

use std::fs;
use std::path::Path;

use qem_core::{BundleSpec, Case, ChiVector, FanoFactor};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseDoc {
    Steady,
    Expanding,
    Shrinking,
}

impl From<CaseDoc> for Case {
    fn from(c: CaseDoc) -> Case {
        match c {
            CaseDoc::Steady => Case::Steady,
            CaseDoc::Expanding => Case::Expanding,
            CaseDoc::Shrinking => Case::Shrinking,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDoc {
    pub n: u32,
    pub p: u32,
    pub q: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDoc {
    pub case: CaseDoc,
    pub m: f64,
    pub factors: Vec<FactorDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<Vec<i32>>,
}

/// A parsed and structurally valid bundle.
#[derive(Debug, Clone)]
pub struct Bundle {
    pub spec: BundleSpec,
    pub m: f64,
    pub chi: Option<ChiVector>,
}

impl BundleDoc {
    pub fn into_bundle(self) -> CliResult<Bundle> {
        let factors = self
            .factors
            .iter()
            .map(|f| FanoFactor::new(f.n, f.p, f.q))
            .collect();
        let spec = BundleSpec::new(factors, self.case.into())?;
        let chi = self
            .chi
            .as_deref()
            .map(|c| ChiVector::from_ints(c).and_then(|c| c.for_spec(&spec)))
            .transpose()?;
        Ok(Bundle {
            spec,
            m: self.m,
            chi,
        })
    }

    /// The worked `CP² × CP²` example with its admissible sign vector.
    pub fn worked_example() -> Self {
        BundleDoc {
            case: CaseDoc::Shrinking,
            m: 2.0,
            factors: vec![
                FactorDoc { n: 0, p: 1, q: 1 },
                FactorDoc { n: 2, p: 3, q: 1 },
                FactorDoc { n: 2, p: 3, q: -2 },
                FactorDoc { n: 0, p: 1, q: 1 },
            ],
            chi: Some(vec![1, 1, -1, -1]),
        }
    }
}

pub fn parse_bundle(text: &str) -> CliResult<Bundle> {
    let doc: BundleDoc =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("bundle JSON: {e}")))?;
    doc.into_bundle()
}

pub fn read_bundle(path: &Path) -> CliResult<Bundle> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_bundle(&text)
}

/// `1,1,-1,-1` or `+,+,-,-`.
pub fn parse_chi(text: &str) -> CliResult<ChiVector> {
    let values = text
        .split(',')
        .map(|t| match t.trim() {
            "+" | "+1" | "1" => Ok(1),
            "-" | "-1" => Ok(-1),
            other => Err(CliError::Input(format!(
                "--chi entry {other:?} is not a sign"
            ))),
        })
        .collect::<CliResult<Vec<i32>>>()?;
    Ok(ChiVector::from_ints(&values)?)
}
