//! `kmat`: batch driver for K-matrix verification, classification and
//! order-by-order solving.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 when the
//! run cannot be set up (bad address, config or input). No report is
//! written on exit 2.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Command;
use config::ConfigFile;
use report::{RunReport, JSON_NAME, TEXT_NAME};

#[derive(Parser)]
#[command(
    name = "kmat",
    version,
    about = "Rational K-matrices for sl(n): verify, classify, solve"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reflection-equation residuals and family identities at seeded points.
    Verify(RunArgs),
    /// Involution, residual symmetry algebra and twist class.
    Classify(RunArgs),
    /// Per-order nullspace table of the perturbative solver.
    Solve(RunArgs),
    /// Crossing parameter of Yang's R-matrix; the target is `sl(n)`.
    Crossing(RunArgs),
    /// Re-renders a stored report.json as key-value text.
    Report(ReportArgs),
}

#[derive(Args)]
struct RunArgs {
    /// K-family address, e.g. `diag:sl(3):2,1:xi=0.7` (for `crossing`: `sl(n)`).
    target: Option<String>,
    /// Key-value config file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    order: Option<usize>,
    /// Directory for report.txt and report.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// A report.json file or a directory holding one.
    path: Option<PathBuf>,
    /// Directory holding report.json, when no path is given.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn into_config(self, cmd: Command) -> Result<ConfigFile, String> {
        let base = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let mut flags = ConfigFile {
            tolerance: self.tol,
            seed: self.seed,
            spectral_samples: self.samples,
            order: self.order,
            output_dir: self.out,
            ..ConfigFile::default()
        };
        match cmd {
            Command::Crossing => flags.algebra = self.target,
            _ => flags.k_family = self.target,
        }
        Ok(base.overlay(flags))
    }
}

fn run(cmd: Command, args: RunArgs) -> Result<ExitCode, String> {
    let cfg = args.into_config(cmd)?;
    let report = commands::run(cmd, &cfg)?;
    report.write(&commands::output_dir(&cfg))?;
    print!("{}", report.to_text());
    if report.all_pass {
        Ok(ExitCode::SUCCESS)
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        eprintln!("kmat: failed checks: {}", failed.join(", "));
        Ok(ExitCode::from(1))
    }
}

fn rerender(args: ReportArgs) -> Result<ExitCode, String> {
    let path = args
        .path
        .or(args.out)
        .unwrap_or_else(|| PathBuf::from(commands::DEFAULT_OUT));
    let json = if path.is_dir() {
        path.join(JSON_NAME)
    } else {
        path
    };
    let text = std::fs::read_to_string(&json)
        .map_err(|e| format!("cannot read {}: {e}", json.display()))?;
    let report = RunReport::from_json(&text)?;
    let rendered = report.to_text();
    let dir = json
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(std::path::Path::new("."));
    std::fs::write(dir.join(TEXT_NAME), &rendered)
        .map_err(|e| format!("cannot write {TEXT_NAME}: {e}"))?;
    print!("{rendered}");
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Cmd::Verify(a) => run(Command::Verify, a),
        Cmd::Classify(a) => run(Command::Classify, a),
        Cmd::Solve(a) => run(Command::Solve, a),
        Cmd::Crossing(a) => run(Command::Crossing, a),
        Cmd::Report(a) => rerender(a),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("kmat: error: {e}");
        ExitCode::from(2)
    })
}
