//! `kpair`: command-line driver for Futaki invariants, centers of mass,
//! Chow weights and balancing.
//!
//! Exit codes: 0 success, 2 invalid input, 3 verification or convergence
//! failure.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgMatches, CommandFactory, FromArgMatches, Parser, Subcommand};

use commands::{
    BalanceArgs, ChowArgs, CliError, CliResult, FutakiArgs, SweepCommand, VerifyArgs,
};
use output::{Format, Report};

#[derive(Debug, Parser)]
#[command(name = "kpair", version, about = "Futaki invariants, Chow weights and balanced embeddings for pairs")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// `key = value` file of defaults; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact Futaki invariant of the deformation to the normal cone of P^n.
    Futaki(FutakiArgs),
    /// Run an invariant suite and report pass/fail.
    Verify(VerifyArgs),
    /// Iterate the balancing map on a model pair.
    Balance(BalanceArgs),
    /// Parameter sweeps.
    Sweep {
        #[command(subcommand)]
        what: SweepCommand,
    },
    /// Center of mass and Chow weight of a cycle file.
    Chow(ChowArgs),
}

fn clap_exit(e: clap::Error) -> ExitCode {
    let code = e.exit_code();
    let _ = e.print();
    ExitCode::from(u8::try_from(code).unwrap_or(2))
}

fn matches(args: &[OsString]) -> Result<ArgMatches, ExitCode> {
    Cli::command().try_get_matches_from(args).map_err(clap_exit)
}

fn parse(args: Vec<OsString>) -> Result<Cli, ExitCode> {
    let first = matches(&args)?;
    let mut cli = Cli::from_arg_matches(&first).map_err(clap_exit)?;
    if let Some(path) = &cli.config {
        let entries = config::read(path).map_err(|e| {
            eprintln!("error: {e}");
            ExitCode::from(2)
        })?;
        let merged = config::merge(Cli::command(), &args, &first, &entries);
        cli = Cli::from_arg_matches(&matches(&merged)?).map_err(clap_exit)?;
    }
    Ok(cli)
}

/// Caps the global thread pool at `KPAIR_THREADS` when set.
fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("KPAIR_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Invalid(format!("KPAIR_THREADS must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> CliResult<Report> {
    configure_threads()?;
    match &cli.command {
        Command::Futaki(a) => commands::futaki(a),
        Command::Verify(a) => commands::verify(a),
        Command::Balance(a) => commands::balance_cmd(a),
        Command::Sweep { what } => commands::sweep(what),
        Command::Chow(a) => commands::chow(a),
    }
}

fn emit(cli: &Cli, report: &Report) -> std::io::Result<()> {
    let mut buf = Vec::new();
    report.render(cli.format, &mut buf)?;
    match &cli.output {
        Some(path) => std::fs::write(path, buf),
        None => std::io::stdout().lock().write_all(&buf),
    }
}

fn main() -> ExitCode {
    let cli = match parse(std::env::args_os().collect()) {
        Ok(cli) => cli,
        Err(code) => return code,
    };
    match run(&cli) {
        Ok(report) => {
            if let Err(e) = emit(&cli, &report) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                for c in report.checks.iter().filter(|c| !c.pass) {
                    eprintln!("check failed: {}: {}", c.name, c.detail);
                }
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
