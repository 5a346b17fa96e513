//! Batch front end of the `poro2g` binary.
//!
//! Exit codes: 0 success, 1 validation failure, 2 configuration or I/O
//! error, 3 solver failure.

pub mod commands;
pub mod config;
pub mod output;
pub mod suite;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::halfspace::Track;
use config::{OutputFormat, SweepParameter};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("solver failure: {0}")]
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Config(_) => 2,
            CliError::Solver(_) => 3,
        }
    }
}

/// Parameter errors are the caller's fault; everything else the solver's.
impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::InvalidParameter { .. } => CliError::Config(e.to_string()),
            other => CliError::Solver(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "poro2g",
    version,
    about = "Second-gradient two-constituent poromechanics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the half-space problem and write the profile and a summary.
    Solve(CommonArgs),
    /// Solve once per value of one parameter, in parallel.
    Sweep(SweepArgs),
    /// Run the invariant suite and write a report.
    Validate(CommonArgs),
    /// Print L, x0, delta_rho_s and C2 of the closed form.
    ClosedForm(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Scenario file (TOML, or JSON by extension).
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = "auto", value_parser = parse_track)]
    pub track: Track,
    /// Output directory; defaults to `output.dir` of the scenario.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// `key=value` edits of the scenario, e.g. `material.c_s=1e-3`.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Swept parameter; defaults to the `[sweep]` block.
    #[arg(long, value_enum)]
    pub param: Option<SweepParameter>,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub values: Option<Vec<f64>>,
}

fn parse_track(s: &str) -> Result<Track, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Validate(a) => commands::validate(a),
        Command::ClosedForm(a) => commands::closed_form(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("poro2g: {e}");
            e.exit_code()
        }
    }
}
