use std::time::Instant;

use anyhow::Result;
use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use mhdlab::diagnostics::{evaluate_study, StudyReport, StudyRun, StudySettings};
use mhdlab::solver::{run, RunConfig, RunOutput};

use super::simulate::{parse_window, RunInfo};
use super::{timings, Outcome, RunArgs, Timings};
use crate::config::load_run_config;
use crate::output::OutputDir;

#[derive(Debug, Args)]
pub struct StudyArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Initial sizes to sweep; defaults to the configured epsilon.
    #[arg(long, value_delimiter = ',')]
    pub epsilons: Option<Vec<f64>>,
    /// Seeds to sweep; defaults to the configured seed.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    /// Time window `START,END` for the decay fits.
    #[arg(long, value_parser = parse_window, default_value = "20,200")]
    pub fit_window: (f64, f64),
    /// Growth quotients after this time are compared with the earlier maximum.
    #[arg(long, default_value_t = 50.0)]
    pub growth_split: f64,
    /// Allowed relative spread of the epsilon-scaling constants.
    #[arg(long, default_value_t = 0.5)]
    pub scaling_tolerance: f64,
    /// Largest admissible log-log slope of a decay quotient.
    #[arg(long, default_value_t = 0.1)]
    pub quotient_slope_limit: f64,
}

#[derive(Debug, Serialize)]
struct RunEntry {
    epsilon: f64,
    seed: u64,
    directory: String,
    #[serde(flatten)]
    info: RunInfo,
}

#[derive(Debug, Serialize)]
struct Summary {
    config: RunConfig,
    epsilons: Vec<f64>,
    seeds: Vec<u64>,
    settings: StudySettings,
    runs: Vec<RunEntry>,
    passed: bool,
    report: StudyReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<Timings>,
}

fn run_directory(epsilon: f64, seed: u64) -> String {
    format!("eps_{epsilon:e}_seed_{seed}")
}

pub fn execute(args: &StudyArgs) -> Result<Outcome> {
    let base = load_run_config(&args.run.config, &args.run.overrides)?;
    let epsilons = args.epsilons.clone().unwrap_or_else(|| vec![base.epsilon]);
    let seeds = args.seeds.clone().unwrap_or_else(|| vec![base.seed]);
    let configs: Vec<RunConfig> = epsilons
        .iter()
        .flat_map(|&epsilon| seeds.iter().map(move |&seed| (epsilon, seed)))
        .map(|(epsilon, seed)| RunConfig {
            epsilon,
            seed,
            ..base.clone()
        })
        .collect();
    for c in &configs {
        c.validate()?;
    }

    let start = Instant::now();
    let outputs: Vec<RunOutput> = configs.par_iter().map(run).collect::<Result<_, _>>()?;

    let mut settings = StudySettings::new(base.s, base.delta, base.regime);
    settings.decay_window = args.fit_window;
    settings.growth_split = args.growth_split;
    settings.scaling_tolerance = args.scaling_tolerance;
    settings.quotient_slope_limit = args.quotient_slope_limit;
    let runs: Vec<StudyRun> = configs
        .iter()
        .zip(&outputs)
        .map(|(c, o)| StudyRun {
            epsilon: c.epsilon,
            seed: c.seed,
            history: o.history.clone(),
        })
        .collect();
    let report = evaluate_study(&runs, &settings)?;
    let outcome = Outcome::from_checks(&report.checks);

    let mut dir = OutputDir::create(&args.run.out)?;
    let mut entries = Vec::new();
    for (c, o) in configs.iter().zip(&outputs) {
        let directory = run_directory(c.epsilon, c.seed);
        dir.write_timeseries(&format!("{directory}/timeseries.csv"), &o.history)?;
        entries.push(RunEntry {
            epsilon: c.epsilon,
            seed: c.seed,
            directory,
            info: RunInfo::new(c, o),
        });
    }
    let summary = Summary {
        config: base,
        epsilons,
        seeds,
        settings,
        runs: entries,
        passed: report.passed(),
        report,
        timings: timings(start, !args.run.no_timings),
    };
    dir.write_json("summary.json", &summary)?;
    dir.commit(Some(summary.config.seed))?;
    Ok(outcome)
}
