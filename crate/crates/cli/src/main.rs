//! `mhdlab`: batch driver for the MHD stability experiments.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use commands::Outcome;

const EXIT_OTHER: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_BLOW_UP: u8 = 3;
const EXIT_CHECKS_FAILED: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "mhdlab",
    version,
    about = "Pseudo-spectral MHD stability experiments on the torus"
)]
struct Cli {
    /// Worker threads for parallel sections; defaults to the number of cores.
    #[arg(long, global = true, env = "MHDLAB_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one simulation and write its diagnostics.
    Simulate(commands::simulate::SimulateArgs),
    /// Sweep initial sizes and seeds and check stability and decay.
    DecayStudy(commands::study::StudyArgs),
    /// Sample commutator-estimate ratios on random band-limited pairs.
    Commutator(commands::commutator::CommutatorArgs),
    /// Check that symmetry and structural constraints hold along a run.
    SymmetryCheck(commands::symmetry_check::SymmetryCheckArgs),
    /// Compare the linear flow against the exact per-mode propagator.
    LinearOracle(commands::linear_oracle::LinearOracleArgs),
}

fn dispatch(command: &Command) -> Result<Outcome> {
    match command {
        Command::Simulate(a) => commands::simulate::execute(a),
        Command::DecayStudy(a) => commands::study::execute(a),
        Command::Commutator(a) => commands::commutator::execute(a),
        Command::SymmetryCheck(a) => commands::symmetry_check::execute(a),
        Command::LinearOracle(a) => commands::linear_oracle::execute(a),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<mhdlab::Error>() {
            return match e {
                mhdlab::Error::BlowUp { .. } => EXIT_BLOW_UP,
                mhdlab::Error::InvalidConfig(_)
                | mhdlab::Error::CasePrecondition(_)
                | mhdlab::Error::InvalidLattice(_)
                | mhdlab::Error::InsufficientSamples(_)
                | mhdlab::Error::InvalidArgument(_) => EXIT_INVALID,
                _ => EXIT_OTHER,
            };
        }
        if cause.is::<serde_json::Error>() || cause.is::<config::OverrideError>() {
            return EXIT_INVALID;
        }
    }
    EXIT_OTHER
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
        {
            eprintln!("error: cannot configure {workers} workers: {e}");
            return ExitCode::from(EXIT_OTHER);
        }
    }
    match dispatch(&cli.command) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed(failures)) => {
            eprintln!("{} check(s) failed:", failures.len());
            for f in failures {
                eprintln!("  - {f}");
            }
            ExitCode::from(EXIT_CHECKS_FAILED)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            if let Some(mhdlab::Error::BlowUp { norm_history, .. }) =
                err.chain().find_map(|c| c.downcast_ref::<mhdlab::Error>())
            {
                if let Some((t, norm)) = norm_history.last() {
                    eprintln!("last recorded H^s norm: {norm:e} at t = {t}");
                }
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
