//! One module per subcommand, plus helpers they share.

pub mod commutator;
pub mod linear_oracle;
pub mod simulate;
pub mod study;
pub mod symmetry_check;

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use serde::Serialize;

use mhdlab::diagnostics::CheckOutcome;
use mhdlab::solver::{MhdState, Regime};
use mhdlab::symmetry::{check_spectral_constraint, check_symmetry, SymmetryClass};

/// What a subcommand reports when it finishes without an error.
#[derive(Debug)]
pub enum Outcome {
    Success,
    ChecksFailed(Vec<String>),
}

impl Outcome {
    pub fn from_checks(checks: &[CheckOutcome]) -> Self {
        let failed: Vec<String> = checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        if failed.is_empty() {
            Outcome::Success
        } else {
            Outcome::ChecksFailed(failed)
        }
    }
}

/// Arguments shared by subcommands driven by a run configuration.
#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON run configuration.
    #[arg(long, short)]
    pub config: PathBuf,
    /// Override a configuration entry; dotted keys reach nested objects.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Output directory.
    #[arg(long, short)]
    pub out: PathBuf,
    /// Leave wall-clock timings out of summary.json.
    #[arg(long)]
    pub no_timings: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Timings {
    pub wall_seconds: f64,
}

pub fn timings(start: Instant, enabled: bool) -> Option<Timings> {
    enabled.then(|| Timings {
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn check(name: &str, value: f64, limit: f64, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.to_owned(),
        passed: value <= limit,
        value,
        limit,
        detail,
    }
}

/// Worst structural defects seen over a sequence of states.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantTracker {
    #[serde(skip)]
    regime: Regime,
    #[serde(skip)]
    class: SymmetryClass,
    pub states: usize,
    pub initial_scale: f64,
    pub divergence: f64,
    pub hermitian: f64,
    pub symmetry: f64,
    pub constraint: f64,
    pub mean_zero: bool,
}

impl InvariantTracker {
    pub fn new(regime: Regime, class: SymmetryClass) -> Self {
        Self {
            regime,
            class,
            states: 0,
            initial_scale: 0.0,
            divergence: 0.0,
            hermitian: 0.0,
            symmetry: 0.0,
            constraint: 0.0,
            mean_zero: true,
        }
    }

    pub fn observe(&mut self, state: &MhdState) {
        if self.states == 0 {
            self.initial_scale = state.scale();
        }
        self.states += 1;
        self.divergence = self.divergence.max(state.divergence_defect());
        self.hermitian = self.hermitian.max(state.hermitian_defect());
        self.symmetry = self.symmetry.max(check_symmetry(state, self.class));
        self.constraint =
            self.constraint
                .max(check_spectral_constraint(state, self.regime, self.class));
        self.mean_zero &= state.is_mean_zero();
    }

    /// Defects measured against `tolerance` times the initial coefficient scale.
    pub fn outcomes(&self, tolerance: f64, label: &str) -> Vec<CheckOutcome> {
        let limit = tolerance * self.initial_scale;
        let detail = |what: &str| format!("max over {} {label} states of the {what}", self.states);
        vec![
            check(
                &format!("divergence-free ({label})"),
                self.divergence,
                limit,
                detail("largest |k . f(k)|"),
            ),
            check(
                &format!("real fields ({label})"),
                self.hermitian,
                limit,
                detail("Hermitian defect"),
            ),
            check(
                &format!("symmetry class {:?} ({label})", self.class),
                self.symmetry,
                limit,
                detail("reflection defect"),
            ),
            check(
                &format!("vertical-mode constraint ({label})"),
                self.constraint,
                limit,
                detail("largest constrained coefficient on k_n = 0"),
            ),
            CheckOutcome {
                name: format!("zero mean ({label})"),
                passed: self.mean_zero,
                value: if self.mean_zero { 0.0 } else { 1.0 },
                limit: 0.0,
                detail: "the k = 0 coefficient is exactly zero".into(),
            },
        ]
    }
}

pub fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(|item| {
            item.trim()
                .parse::<T>()
                .map_err(|e| format!("`{item}`: {e}"))
        })
        .collect()
}
