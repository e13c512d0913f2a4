//! The six subcommands. Each returns its artifact; writing it out is the
//! caller's job.

use std::path::PathBuf;

use qem_core::construct::{closing_detail, expanding_upper_bound, solve_shrinking, Closing};
use qem_core::verify::{
    arc_length_check, asymptotics_report, completeness_diagnostic, oracle_equivalence,
};
use qem_core::{
    construct_expanding, construct_steady, enumerate_chi, find_admissible_chi, futaki_integral,
    inv_integral, residuals, validate_bundle, Branch, Case, ChiVector, Error, MetricProfile,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::input::{read_bundle, Bundle, BundleDoc};
use crate::report::{
    AsymptoticsDoc, CompletenessDoc, ObstructionDoc, OracleDoc, ProfileDoc, ResidualDoc,
    ValidationDoc, VerifyDoc,
};
use crate::table::{lines, num, profile_csv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BranchArg {
    Plus,
    Minus,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Branch {
        match b {
            BranchArg::Plus => Branch::Plus,
            BranchArg::Minus => Branch::Minus,
        }
    }
}

/// Everything a command reads besides the bundle itself.
#[derive(Debug, Clone, Serialize)]
pub struct Config {
    pub input: Option<PathBuf>,
    pub tol: f64,
    pub grid: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub chi: Option<Vec<i32>>,
    pub e_star: Option<f64>,
    pub branch: Option<BranchArg>,
}

pub const MIN_GRID: usize = 16;
/// Endpoints of the `E*` sweep.
pub const SWEEP_RANGE: (f64, f64) = (1e-3, 1e6);
const ORACLE_POINTS: usize = 32;
const ARC_LENGTH_POINTS: usize = 16;

impl Config {
    pub fn validate(&self) -> CliResult<()> {
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(CliError::Input(format!(
                "--tol must be positive, got {}",
                self.tol
            )));
        }
        if self.grid < MIN_GRID {
            return Err(CliError::Input(format!(
                "--grid must be at least {MIN_GRID}, got {}",
                self.grid
            )));
        }
        Ok(())
    }
}

/// A command's product.
#[derive(Debug)]
pub enum Artifact {
    Json(Value),
    /// A table plus the run metadata for its sidecar file.
    Csv {
        table: String,
        meta: Value,
    },
}

fn load(config: &Config) -> CliResult<Bundle> {
    let path = config
        .input
        .as_deref()
        .ok_or_else(|| CliError::Input(String::from("--input is required")))?;
    let mut bundle = read_bundle(path)?;
    if let Some(chi) = &config.chi {
        bundle.chi = Some(ChiVector::from_ints(chi)?.for_spec(&bundle.spec)?);
    }
    Ok(bundle)
}

fn json_only(config: &Config, command: &str) -> CliResult<()> {
    match config.format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Input(format!("{command} has no CSV form"))),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn meta(command: &str, config: &Config, extra: Value) -> Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "config": to_value(config),
        "result": extra,
    })
}

pub fn check(config: &Config) -> CliResult<Artifact> {
    json_only(config, "check")?;
    let b = load(config)?;
    let report = validate_bundle(&b.spec, b.m)?;
    Ok(Artifact::Json(to_value(&ValidationDoc::from(&report))))
}

#[derive(Debug, Serialize)]
struct InvRow {
    #[serde(flatten)]
    result: ObstructionDoc,
    parity: i32,
    admissible: bool,
}

pub fn invariant(config: &Config) -> CliResult<Artifact> {
    let b = load(config)?;
    let futaki = ObstructionDoc::from(&futaki_integral(&b.spec));
    let rows = enumerate_chi(&b.spec)
        .par_iter()
        .map(|chi| {
            let inv = inv_integral(&b.spec, chi)?;
            Ok(InvRow {
                admissible: inv.sign < 0,
                parity: chi.parity_sign(&b.spec),
                result: ObstructionDoc::from(&inv),
            })
        })
        .collect::<CliResult<Vec<InvRow>>>()?;
    match config.format {
        Format::Json => Ok(Artifact::Json(json!({ "futaki": futaki, "inv": rows }))),
        Format::Csv => {
            let chi_cell = |c: &Option<Vec<i32>>| {
                c.as_ref()
                    .map(|v| v.iter().map(i32::to_string).collect::<Vec<_>>().join(";"))
                    .unwrap_or_default()
            };
            let mut out = vec![format!(
                "futaki,,{},{},{},,",
                futaki.value,
                num(futaki.decimal),
                futaki.sign
            )];
            for r in &rows {
                out.push(format!(
                    "inv,{},{},{},{},{},{}",
                    chi_cell(&r.result.chi),
                    r.result.value,
                    num(r.result.decimal),
                    r.result.sign,
                    r.parity,
                    r.admissible
                ));
            }
            let table = lines(
                String::from("kind,chi,value,decimal,sign,parity,admissible"),
                out,
            );
            let admissible = rows.iter().filter(|r| r.admissible).count();
            Ok(Artifact::Csv {
                table,
                meta: meta(
                    "invariant",
                    config,
                    json!({ "admissible_count": admissible }),
                ),
            })
        }
    }
}

fn shrinking_chi(b: &Bundle) -> CliResult<ChiVector> {
    if let Some(chi) = &b.chi {
        return Ok(chi.clone());
    }
    find_admissible_chi(&b.spec)
        .into_iter()
        .next()
        .ok_or_else(|| {
            Error::Hypothesis(String::from(
                "no sign vector makes the admissibility integral negative",
            ))
            .into()
        })
}

/// `4(n₁+1)`, which puts `κ₀` at 2.
pub fn default_steady_e_star(b: &Bundle) -> f64 {
    4.0 * (f64::from(b.spec.first().n) + 1.0)
}

/// Three quarters of the way into the admissible window.
pub fn default_expanding_e_star(b: &Bundle) -> f64 {
    0.75 * expanding_upper_bound(&b.spec)
}

fn build(config: &Config, b: &Bundle) -> CliResult<(MetricProfile, Option<Closing>)> {
    match b.spec.case() {
        Case::Steady => {
            let e = config.e_star.unwrap_or_else(|| default_steady_e_star(b));
            Ok((construct_steady(&b.spec, b.m, e)?, None))
        }
        Case::Expanding => {
            let e = config.e_star.unwrap_or_else(|| default_expanding_e_star(b));
            let branch = config.branch.unwrap_or(BranchArg::Plus).into();
            Ok((construct_expanding(&b.spec, b.m, e, branch)?, None))
        }
        Case::Shrinking => {
            if config.e_star.is_some() {
                return Err(CliError::Input(String::from(
                    "--e-star does not apply to a shrinking bundle: E* is fixed by the closing condition",
                )));
            }
            let sol = solve_shrinking(&b.spec, b.m, &shrinking_chi(b)?, config.tol)?;
            Ok((sol.profile, Some(sol.closing)))
        }
    }
}

pub fn construct(config: &Config) -> CliResult<Artifact> {
    let b = load(config)?;
    let (profile, closing) = build(config, &b)?;
    let summary = ProfileDoc::new(&profile, closing.as_ref());
    match config.format {
        Format::Json => Ok(Artifact::Json(to_value(&summary))),
        Format::Csv => Ok(Artifact::Csv {
            table: profile_csv(&profile, config.grid)?,
            meta: meta("construct", config, to_value(&summary)),
        }),
    }
}

pub fn verify(config: &Config) -> CliResult<Artifact> {
    json_only(config, "verify")?;
    let b = load(config)?;
    let (profile, closing) = build(config, &b)?;
    let res = residuals(&profile, config.grid)?;
    let oracle = oracle_equivalence(&profile, ORACLE_POINTS)?;
    let arc = arc_length_check(&profile, ARC_LENGTH_POINTS)?;
    let (completeness, asymptotics) = if profile.is_compact() {
        (None, None)
    } else {
        (
            Some(CompletenessDoc::from(&completeness_diagnostic(&profile)?)),
            Some(AsymptoticsDoc::from(&asymptotics_report(&profile)?)),
        )
    };
    let doc = VerifyDoc {
        profile: ProfileDoc::new(&profile, closing.as_ref()),
        residuals: ResidualDoc::from(&res),
        oracle: OracleDoc::from(&oracle),
        arc_length_max_rel: arc.max_rel,
        completeness,
        asymptotics,
    };
    Ok(Artifact::Json(to_value(&doc)))
}

pub fn sweep_grid(n: usize) -> Vec<f64> {
    let (lo, hi) = SWEEP_RANGE;
    let step = (hi / lo).ln() / (n - 1) as f64;
    (0..n).map(|k| lo * (step * k as f64).exp()).collect()
}

pub fn sweep(config: &Config) -> CliResult<Artifact> {
    let b = load(config)?;
    if b.spec.case() != Case::Shrinking {
        return Err(CliError::Input(String::from(
            "sweep needs a shrinking bundle",
        )));
    }
    let chi = shrinking_chi(&b)?;
    let rows = sweep_grid(config.grid)
        .into_par_iter()
        .map(|e| Ok(closing_detail(&b.spec, b.m, e, &chi)?))
        .collect::<CliResult<Vec<Closing>>>()?;
    let sign_changes = rows
        .windows(2)
        .filter(|w| (w[0].value > 0.0) != (w[1].value > 0.0))
        .count();
    let summary = json!({ "chi": chi.to_ints(), "m": b.m, "sign_changes": sign_changes });
    match config.format {
        Format::Json => {
            let points: Vec<Value> = rows
                .iter()
                .map(|c| json!({ "e_star": c.e_star, "closing": c.value, "scale": c.scale }))
                .collect();
            Ok(Artifact::Json(
                json!({ "summary": summary, "points": points }),
            ))
        }
        Format::Csv => {
            let body = rows
                .iter()
                .map(|c| format!("{},{},{}", num(c.e_star), num(c.value), num(c.scale)))
                .collect();
            Ok(Artifact::Csv {
                table: lines(String::from("e_star,closing,scale"), body),
                meta: meta("sweep", config, summary),
            })
        }
    }
}

/// The worked `CP² × CP²` pipeline: both exact integrals, then the root.
pub fn example(config: &Config) -> CliResult<Artifact> {
    json_only(config, "example")?;
    let b = BundleDoc::worked_example().into_bundle()?;
    let chi = b
        .chi
        .clone()
        .ok_or_else(|| CliError::Input(String::from("worked example lacks chi")))?;
    let futaki = futaki_integral(&b.spec);
    let inv = inv_integral(&b.spec, &chi)?;
    let sol = solve_shrinking(&b.spec, b.m, &chi, config.tol)?;
    let res = residuals(&sol.profile, config.grid)?;
    Ok(Artifact::Json(json!({
        "futaki": ObstructionDoc::from(&futaki),
        "inv": ObstructionDoc::from(&inv),
        "m": b.m,
        "e_star": sol.profile.e_star(),
        "closing": crate::report::ClosingDoc::from(&sol.closing),
        "residual_max_rel": res.max_rel,
        "boundary_max_error": qem_core::boundary_check(&sol.profile).max_error,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_grid_spans_range() {
        let g = sweep_grid(19);
        assert!((g[0] - 1e-3).abs() < 1e-18);
        assert!((g[18] / 1e6 - 1.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
