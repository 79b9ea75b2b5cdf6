use std::time::Instant;

use anyhow::Result;
use clap::Args;
use serde::Serialize;

use mhdlab::diagnostics::CheckOutcome;
use mhdlab::solver::{linear_propagator, make_initial_data, run_from, MhdState, RunConfig};

use super::simulate::RunInfo;
use super::{check, timings, Outcome, RunArgs, Timings};
use crate::config::load_run_config;
use crate::output::OutputDir;

#[derive(Debug, Args)]
pub struct LinearOracleArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Largest admissible error relative to the largest initial coefficient.
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
}

#[derive(Debug, Serialize)]
struct Summary {
    config: RunConfig,
    run: RunInfo,
    max_abs_error: f64,
    initial_scale: f64,
    check: CheckOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<Timings>,
}

/// Largest coefficient difference between `state` and the exact linear
/// evolution of `initial` over `state.t − initial.t`.
fn oracle_error(initial: &MhdState, state: &MhdState) -> Result<f64> {
    let elapsed = state.t - initial.t;
    let mut worst = 0.0f64;
    for (idx, k) in initial.lattice().modes() {
        if !k.is_nonzero() {
            continue;
        }
        let p = linear_propagator(&k, elapsed, initial.mu, initial.nu)?;
        for c in 0..initial.dim() {
            let (u, b) = (initial.u.component(c)[idx], initial.b.component(c)[idx]);
            let eu = p[0][0] * u + p[0][1] * b;
            let eb = p[1][0] * u + p[1][1] * b;
            worst = worst
                .max((state.u.component(c)[idx] - eu).norm())
                .max((state.b.component(c)[idx] - eb).norm());
        }
    }
    Ok(worst)
}

/// Runs with the quadratic terms switched off and compares the final state
/// with the closed-form per-mode propagator.
pub fn execute(args: &LinearOracleArgs) -> Result<Outcome> {
    let mut config = load_run_config(&args.run.config, &args.run.overrides)?;
    config.nonlinear = false;
    let start = Instant::now();
    let initial = make_initial_data(&config)?;
    let out = run_from(initial.clone(), &config, |_| Ok(()))?;
    let error = oracle_error(&initial, &out.final_state)?;
    let scale = initial.scale();
    let check = check(
        "linear flow matches the exact propagator",
        error,
        args.tolerance * scale,
        format!("{} steps of dt = {:e}", out.steps, out.dt),
    );
    let outcome = Outcome::from_checks(std::slice::from_ref(&check));
    let summary = Summary {
        run: RunInfo::new(&config, &out),
        max_abs_error: error,
        initial_scale: scale,
        check,
        timings: timings(start, !args.run.no_timings),
        config,
    };
    let mut dir = OutputDir::create(&args.run.out)?;
    dir.write_timeseries("timeseries.csv", &out.history)?;
    dir.write_json("summary.json", &summary)?;
    dir.commit(Some(summary.config.seed))?;
    Ok(outcome)
}
