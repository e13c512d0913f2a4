//! `qem`: build and check quasi-Einstein metrics from a bundle JSON file.

mod commands;
mod error;
mod input;
mod report;
mod table;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Artifact, BranchArg, Config, Format};
use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "qem",
    version,
    about = "Quasi-Einstein metrics on circle bundles over Fano products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every hypothesis on the bundle and report each one.
    Check(Opts),
    /// Futaki and admissibility integrals over all sign vectors, exactly.
    Invariant(Opts),
    /// Construct the metric; CSV gives the profile table.
    Construct(Opts),
    /// Construct, then run residual, oracle, arc-length and completeness checks.
    Verify(Opts),
    /// Closing integral over a log grid of E* (shrinking only).
    Sweep(Opts),
    /// The CP² × CP² worked example end to end.
    Example(Opts),
}

#[derive(Debug, Args)]
struct Opts {
    /// Bundle JSON file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Relative bisection bracket width.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Sample points for residuals, profile tables and sweeps.
    #[arg(long, default_value_t = 512)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; stdout when absent. CSV output gets a `.meta.json` sidecar.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Comma-separated signs, e.g. `1,1,-1,-1`.
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<String>,
    /// Override E* (steady and expanding).
    #[arg(long = "e-star", allow_hyphen_values = true)]
    e_star: Option<f64>,
    /// κ₀ branch for the expanding construction.
    #[arg(long, value_enum)]
    branch: Option<BranchArg>,
}

impl Opts {
    fn config(&self) -> CliResult<Config> {
        let chi = self
            .chi
            .as_deref()
            .map(input::parse_chi)
            .transpose()?
            .map(|c| c.to_ints());
        let config = Config {
            input: self.input.clone(),
            tol: self.tol,
            grid: self.grid,
            format: self.format,
            output: self.output.clone(),
            chi,
            e_star: self.e_star,
            branch: self.branch,
        };
        config.validate()?;
        Ok(config)
    }
}

fn init_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("QEM_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            CliError::Input(format!(
                "QEM_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Input(format!("QEM_THREADS: {e}")))
}

fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("meta.json")
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn emit(artifact: Artifact, output: Option<&Path>) -> CliResult<()> {
    let (body, meta) = match artifact {
        Artifact::Json(v) => (pretty(&v), None),
        Artifact::Csv { table, meta } => (table, Some(meta)),
    };
    match output {
        Some(path) => {
            write_file(path, &body)?;
            if let Some(meta) = meta {
                write_file(&sidecar(path), &pretty(&meta))?;
            }
            Ok(())
        }
        None => io::stdout()
            .lock()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s
}

fn run(cli: Cli) -> CliResult<()> {
    init_threads()?;
    let (opts, f): (&Opts, fn(&Config) -> CliResult<Artifact>) = match &cli.command {
        Command::Check(o) => (o, commands::check),
        Command::Invariant(o) => (o, commands::invariant),
        Command::Construct(o) => (o, commands::construct),
        Command::Verify(o) => (o, commands::verify),
        Command::Sweep(o) => (o, commands::sweep),
        Command::Example(o) => (o, commands::example),
    };
    let config = opts.config()?;
    let artifact = f(&config)?;
    emit(artifact, config.output.as_deref())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
