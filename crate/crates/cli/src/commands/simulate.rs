use std::time::Instant;

use anyhow::Result;
use clap::Args;
use serde::Serialize;

use mhdlab::diagnostics::study::decay_targets;
use mhdlab::diagnostics::{
    assemble_functionals, energy_balance_residual, fit_decay, theorem_rate, CheckOutcome,
    DiagnosticsRecord, FunctionalReport, RateFit, RateIndex,
};
use mhdlab::solver::{run_observed, RunConfig, RunOutput};

use super::{timings, InvariantTracker, Outcome, RunArgs, Timings};
use crate::config::load_run_config;
use crate::output::OutputDir;

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Time window `START,END` for the decay fits.
    #[arg(long, value_parser = parse_window, default_value = "20,200")]
    pub fit_window: (f64, f64),
    /// Relative tolerance of the structural invariant checks.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

pub fn parse_window(text: &str) -> Result<(f64, f64), String> {
    match super::parse_list::<f64>(text)?.as_slice() {
        [a, b] if a < b => Ok((*a, *b)),
        _ => Err(format!(
            "`{text}` is not of the form START,END with START < END"
        )),
    }
}

#[derive(Debug, Serialize)]
pub struct RunInfo {
    pub m: f64,
    pub eta: f64,
    pub dt: f64,
    pub steps: usize,
    pub records: usize,
}

impl RunInfo {
    pub fn new(config: &RunConfig, out: &RunOutput) -> Self {
        Self {
            m: config.m(),
            eta: config.eta(),
            dt: out.dt,
            steps: out.steps,
            records: out.history.len(),
        }
    }
}

/// A decay fit, or the reason none could be made.
#[derive(Debug, Serialize)]
pub struct FitEntry {
    pub quantity: String,
    pub index: RateIndex,
    pub theorem_exponent: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<RateFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

pub fn rate_fits(
    history: &[DiagnosticsRecord],
    config: &RunConfig,
    window: (f64, f64),
) -> Result<Vec<FitEntry>> {
    let mut entries = Vec::new();
    for (quantity, index) in decay_targets(config.regime) {
        let exponent = theorem_rate(config.s, config.delta, index)?;
        let (fit, skipped) = match fit_decay(history, quantity, window, exponent) {
            Ok(fit) => (Some(fit), None),
            Err(e) => (None, Some(e.to_string())),
        };
        entries.push(FitEntry {
            quantity: quantity.name().to_owned(),
            index,
            theorem_exponent: exponent,
            fit,
            skipped,
        });
    }
    Ok(entries)
}

#[derive(Debug, Serialize)]
pub struct EnergyBalance {
    pub initial_energy: f64,
    pub final_energy: f64,
    /// `E(0) − E(T) − ∫ dissipation`, trapezoidal over the recorded samples.
    pub residual: f64,
}

impl EnergyBalance {
    pub fn new(history: &[DiagnosticsRecord]) -> Self {
        Self {
            initial_energy: history.first().map_or(0.0, |r| r.energy),
            final_energy: history.last().map_or(0.0, |r| r.energy),
            residual: energy_balance_residual(history),
        }
    }
}

#[derive(Debug, Serialize)]
struct Summary {
    config: RunConfig,
    run: RunInfo,
    functionals: FunctionalReport,
    rate_fits: Vec<FitEntry>,
    energy_balance: EnergyBalance,
    invariants: InvariantTracker,
    invariant_checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<Timings>,
}

pub fn execute(args: &SimulateArgs) -> Result<Outcome> {
    let config = load_run_config(&args.run.config, &args.run.overrides)?;
    let start = Instant::now();
    let mut tracker = InvariantTracker::new(config.regime, config.symmetry);
    let out = run_observed(&config, |s| {
        tracker.observe(s);
        Ok(())
    })?;

    let functionals = assemble_functionals(&out.history, config.s, config.delta, config.regime)?;
    let summary = Summary {
        run: RunInfo::new(&config, &out),
        functionals,
        rate_fits: rate_fits(&out.history, &config, args.fit_window)?,
        energy_balance: EnergyBalance::new(&out.history),
        invariant_checks: tracker.outcomes(args.tolerance, "run"),
        invariants: tracker,
        timings: timings(start, !args.run.no_timings),
        config,
    };

    let mut dir = OutputDir::create(&args.run.out)?;
    dir.write_timeseries("timeseries.csv", &out.history)?;
    dir.write_json("summary.json", &summary)?;
    dir.commit(Some(summary.config.seed))?;
    Ok(Outcome::Success)
}
