use serde::{Deserialize, Serialize};

use super::state::Regime;
use crate::error::{Error, Result};
use crate::symmetry::SymmetryClass;

fn default_output_every() -> usize {
    10
}

fn default_slope() -> f64 {
    2.0
}

fn default_true() -> bool {
    true
}

/// Complete description of one simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Dimension `n`.
    pub n: usize,
    /// Resolution `N` per axis.
    pub resolution: usize,
    pub regime: Regime,
    pub symmetry: SymmetryClass,
    /// Regularity index `s`.
    pub s: f64,
    /// Weight offset `δ`.
    pub delta: f64,
    /// Initial size `‖u₀‖_{H^s} + ‖b₀‖_{H^s}`.
    pub epsilon: f64,
    /// Step size; `None` selects the advective CFL bound on the initial state.
    #[serde(default)]
    pub dt: Option<f64>,
    /// Final time `T`.
    pub t_final: f64,
    /// Largest `|k_i|` populated in the initial data.
    pub band_limit: i64,
    pub seed: u64,
    /// Record cadence in steps.
    #[serde(default = "default_output_every")]
    pub output_every: usize,
    /// Initial coefficient magnitudes fall off like `|k|^{−slope}`.
    #[serde(default = "default_slope")]
    pub initial_slope: f64,
    /// Re-project onto the symmetry class after every step.
    #[serde(default)]
    pub resymmetrize: bool,
    /// Include the quadratic terms; disabling leaves the exact linear flow.
    #[serde(default = "default_true")]
    pub nonlinear: bool,
}

impl RunConfig {
    /// `m = s − 2δ − 1`
    pub fn m(&self) -> f64 {
        self.s - 2.0 * self.delta - 1.0
    }

    /// `η = min(s − n/2 − 2δ − c, 1/2)` with `c = 3` without resistivity
    /// and `c = 6` without viscosity.
    pub fn eta(&self) -> f64 {
        let c = match self.regime {
            Regime::NonViscous => 6.0,
            _ => 3.0,
        };
        (self.s - self.n as f64 / 2.0 - 2.0 * self.delta - c).min(0.5)
    }

    /// Checks every constraint and reports all violations at once.
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        let n = self.n as f64;
        if self.n < 2 {
            errs.push(format!("n = {} must be at least 2", self.n));
        }
        if self.resolution < 4 || !self.resolution.is_multiple_of(2) {
            errs.push(format!(
                "resolution = {} must be even and at least 4",
                self.resolution
            ));
        }
        let threshold = match self.regime {
            Regime::NonResistive => Some(3.0),
            Regime::NonViscous => Some(6.0),
            Regime::General { mu, nu } => {
                if !(mu >= 0.0 && nu >= 0.0) || !(mu.is_finite() && nu.is_finite()) {
                    errs.push(format!(
                        "mu = {mu}, nu = {nu} must be finite and nonnegative"
                    ));
                }
                None
            }
        };
        let regime = self.regime.name();
        match threshold {
            Some(c) => {
                let bound = n / 2.0 + c;
                if !(self.s > bound) {
                    errs.push(format!(
                        "s = {} violates s > n/2 + {c} = {bound} ({regime} regime)",
                        self.s
                    ));
                }
                let dmax = (self.s - n / 2.0 - c) / 2.0;
                if !(self.delta > 0.0 && self.delta < dmax) {
                    errs.push(format!(
                        "delta = {} violates 0 < delta < (s - n/2 - {c})/2 = {dmax} ({regime} regime)",
                        self.delta
                    ));
                }
            }
            None => {
                if !(self.delta > 0.0) {
                    errs.push(format!("delta = {} must be positive", self.delta));
                }
                if !(self.m() > 0.0) {
                    errs.push(format!(
                        "m = s - 2 delta - 1 = {} must be positive",
                        self.m()
                    ));
                }
            }
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            errs.push(format!(
                "epsilon = {} must be finite and nonnegative",
                self.epsilon
            ));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                errs.push(format!("dt = {dt} must be positive"));
            }
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            errs.push(format!(
                "t_final = {} must be finite and nonnegative",
                self.t_final
            ));
        }
        let max_band = (self.resolution / 3) as i64;
        if self.band_limit < 1 || self.band_limit > max_band {
            errs.push(format!(
                "band_limit = {} must satisfy 1 <= band_limit <= N/3 = {max_band}",
                self.band_limit
            ));
        }
        if self.output_every == 0 {
            errs.push("output_every must be at least 1".into());
        }
        if !self.initial_slope.is_finite() {
            errs.push("initial_slope must be finite".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(errs))
        }
    }
}
