//! `fwdis`: run the FW-Dis solver, verify its guarantees on small instances,
//! and compare it against a uniform-step Frank-Wolfe baseline.
//!
//! Exit codes: 0 success, 1 runtime or check failure, 2 usage or config error.

mod commands;
mod config;
mod failure;
mod instance;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::compare::CompareArgs;
use config::RunArgs;

#[derive(Debug, Parser)]
#[command(name = "fwdis", version, about = "Frank-Wolfe maximization of non-monotone DR-submodular functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the solver and write `trace.csv` and `summary.json`.
    Solve(RunArgs),
    /// Check the objective, the solver run, and the certificate against a brute-force optimum.
    Verify(RunArgs),
    /// Run the solver and the baseline on seeded random quadratics.
    Compare(CompareArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => commands::solve::run(args),
        Command::Verify(args) => commands::verify::run(args),
        Command::Compare(args) => commands::compare::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{failure}");
            failure.exit_code()
        }
    }
}
