use std::time::Instant;

use anyhow::Result;
use clap::Args;
use serde::Serialize;

use mhdlab::diagnostics::CheckOutcome;
use mhdlab::solver::{make_initial_data, run_from, RunConfig};

use super::simulate::RunInfo;
use super::{timings, InvariantTracker, Outcome, RunArgs, Timings};
use crate::config::load_run_config;
use crate::output::OutputDir;

#[derive(Debug, Args)]
pub struct SymmetryCheckArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Defects are compared against this multiple of the largest initial coefficient.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Debug, Serialize)]
struct Summary {
    config: RunConfig,
    run: RunInfo,
    initial: InvariantTracker,
    trajectory: InvariantTracker,
    passed: bool,
    checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<Timings>,
}

/// Checks the symmetry class, the vertical-mode constraint, solenoidality,
/// reality and zero mean on the initial data and along the whole run.
pub fn execute(args: &SymmetryCheckArgs) -> Result<Outcome> {
    let config = load_run_config(&args.run.config, &args.run.overrides)?;
    let start = Instant::now();
    let initial_state = make_initial_data(&config)?;
    let mut initial = InvariantTracker::new(config.regime, config.symmetry);
    initial.observe(&initial_state);
    let mut trajectory = InvariantTracker::new(config.regime, config.symmetry);
    let out = run_from(initial_state, &config, |s| {
        trajectory.observe(s);
        Ok(())
    })?;

    let mut checks = initial.outcomes(args.tolerance, "initial");
    checks.extend(trajectory.outcomes(args.tolerance, "trajectory"));
    let outcome = Outcome::from_checks(&checks);
    let summary = Summary {
        run: RunInfo::new(&config, &out),
        initial,
        trajectory,
        passed: matches!(outcome, Outcome::Success),
        checks,
        timings: timings(start, !args.run.no_timings),
        config,
    };
    let mut dir = OutputDir::create(&args.run.out)?;
    dir.write_json("summary.json", &summary)?;
    dir.commit(Some(summary.config.seed))?;
    Ok(outcome)
}
