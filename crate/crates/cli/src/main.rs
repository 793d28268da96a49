//! `hhaus`: runs the verification suites from JSON configurations.
//!
//! Exit status is 0 on success, 1 when a numerical step fails or a check does
//! not pass, and 2 when the command line or the configuration cannot be parsed.

mod commands;
mod config;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use commands::{Check, Overrides};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numeric(#[from] hyperbolic_hausdorff::Error),
    #[error("output error: {0}")]
    Output(String),
    #[error("{0}: {1} of {2} checks failed")]
    Failed(&'static str, usize, usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "hhaus", version, about = "Hausdorff operators on the hyperbolic plane: evaluation and verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON configuration; the built-in default for the subcommand when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; CSV for `eval`, JSON for the reports by default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Overrides the seed of the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the kernel quadrature node count.
    #[arg(long, global = true)]
    nodes: Option<usize>,
}

#[derive(Clone, Copy, Debug, Subcommand)]
enum Command {
    /// Tabulates f and H f over a grid of points.
    Eval,
    /// Checks ‖H f‖_p ≤ ‖Φ‖₁ ‖f‖_p over a kernel × function × p matrix.
    Norm,
    /// Checks atoms, their rotations and the images of atomic decompositions.
    VerifyAtoms,
    /// Compares doubling ratios with Monte Carlo estimates.
    Doubling,
    /// Checks the Weil formula and unimodularity of SL(2,ℝ).
    Weil,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Norm => "norm",
            Command::VerifyAtoms => "verify-atoms",
            Command::Doubling => "doubling",
            Command::Weil => "weil",
        }
    }

    fn default_config(self) -> &'static str {
        match self {
            Command::Eval => config::DEFAULT_EVAL,
            Command::Norm => config::DEFAULT_NORM,
            Command::VerifyAtoms => config::DEFAULT_VERIFY_ATOMS,
            Command::Doubling => config::DEFAULT_DOUBLING,
            Command::Weil => config::DEFAULT_WEIL,
        }
    }
}

#[derive(Serialize)]
struct Report<'a, R> {
    command: &'a str,
    passed: usize,
    failed: usize,
    rows: &'a [R],
}

fn render<R: Serialize>(command: &str, rows: &[R], failed: usize, format: Format) -> Result<Vec<u8>, CliError> {
    let out = |e: &dyn std::fmt::Display| CliError::Output(e.to_string());
    match format {
        Format::Json => {
            let report = Report {
                command,
                passed: rows.len() - failed,
                failed,
                rows,
            };
            let mut bytes = serde_json::to_vec_pretty(&report).map_err(|e| out(&e))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| out(&e))?;
            }
            w.into_inner().map_err(|e| out(&e))
        }
    }
}

fn failures(rows: &[Check]) -> usize {
    rows.iter().filter(|r| !r.pass).count()
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let text = match &cli.config {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?,
        None => cli.command.default_config().to_owned(),
    };
    let ov = Overrides {
        seed: cli.seed,
        nodes: cli.nodes,
    };
    let name = cli.command.name();
    let report_format = cli.format.unwrap_or(Format::Json);
    let (bytes, failed, total) = match cli.command {
        Command::Eval => {
            let rows = commands::eval(&config::parse(&text)?, ov)?;
            (render(name, &rows, 0, cli.format.unwrap_or(Format::Csv))?, 0, rows.len())
        }
        Command::Norm => {
            let rows = commands::norm(&config::parse(&text)?, ov)?;
            let failed = rows.iter().filter(|r| !r.pass).count();
            (render(name, &rows, failed, report_format)?, failed, rows.len())
        }
        Command::VerifyAtoms | Command::Doubling | Command::Weil => {
            let rows = match cli.command {
                Command::VerifyAtoms => commands::verify_atoms(&config::parse(&text)?, ov)?,
                Command::Doubling => commands::doubling(&config::parse(&text)?, ov)?,
                _ => commands::weil(&config::parse(&text)?, ov)?,
            };
            let failed = failures(&rows);
            (render(name, &rows, failed, report_format)?, failed, rows.len())
        }
    };
    match &cli.out {
        Some(path) => fs::write(path, &bytes).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?,
        None => io::stdout()
            .lock()
            .write_all(&bytes)
            .map_err(|e| CliError::Output(e.to_string()))?,
    }
    if failed > 0 {
        return Err(CliError::Failed(name, failed, total));
    }
    eprintln!("{name}: {total} rows written");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hhaus: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
