mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::CliError;

/// Multiplier kernels, Schrödinger evolution and verification probes on the Heisenberg group.
#[derive(Parser, Debug)]
#[command(name = "heisen", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (`key = value` lines under `[section]` headers).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "heisen-out")]
    out: PathBuf,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the identity suites and write verify_report.json.
    Verify,
    /// Kernel profile, coefficient dump and L² norm of `[kernel] symbol`.
    Kernel,
    /// Evolve `[evolve] initial` under the fractional Schrödinger flow.
    Evolve,
    /// Run the probe named by `[probe] name`.
    Probe,
    /// Normal form of an enveloping-algebra expression.
    Algebra { expr: Option<String> },
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    match &cli.command {
        Command::Verify => commands::verify(&cfg, &cli.out),
        Command::Kernel => commands::kernel(&cfg, &cli.out),
        Command::Evolve => commands::evolve_cmd(&cfg, &cli.out),
        Command::Probe => commands::probe(&cfg, &cli.out),
        Command::Algebra { expr } => commands::algebra(&cfg, expr.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("heisen: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
