//! Pass/fail checks over a family of runs that differ in `ε` and seed.

use serde::{Deserialize, Serialize};

use super::functionals::{assemble_functionals, FunctionalFamily, FunctionalReport};
use super::rates::{fit_decay, theorem_rate, Quantity, RateFit, RateIndex};
use super::record::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::solver::Regime;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// The measured quantity compared against `limit`.
    pub value: f64,
    pub limit: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRun {
    pub epsilon: f64,
    pub seed: u64,
    pub history: Vec<DiagnosticsRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudySettings {
    pub s: f64,
    pub delta: f64,
    pub regime: Regime,
    /// Allowed relative spread of `value/ε^p` around the fitted constant.
    pub scaling_tolerance: f64,
    /// Growth quotients after this time must not exceed the earlier maximum
    /// by more than `growth_tolerance`.
    pub growth_split: f64,
    pub growth_tolerance: f64,
    pub decay_window: (f64, f64),
    /// Largest admissible log-log slope of a decay quotient.
    pub quotient_slope_limit: f64,
}

impl StudySettings {
    pub fn new(s: f64, delta: f64, regime: Regime) -> Self {
        Self {
            s,
            delta,
            regime,
            scaling_tolerance: 0.5,
            growth_split: 50.0,
            growth_tolerance: 1.05,
            decay_window: (20.0, 200.0),
            quotient_slope_limit: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub checks: Vec<CheckOutcome>,
    pub fits: Vec<RateFit>,
    pub functionals: Vec<FunctionalReport>,
}

impl StudyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Fits `value ≈ C ε^power` with `C` the geometric mean of `value/ε^power`
/// and requires every run within `tolerance` of `C`. Reports the worst
/// relative deviation.
pub fn scaling_check(
    name: &str,
    samples: &[(f64, f64)],
    power: i32,
    tolerance: f64,
) -> CheckOutcome {
    let ratios: Vec<f64> = samples.iter().map(|(eps, v)| v / eps.powi(power)).collect();
    let usable = !ratios.is_empty() && ratios.iter().all(|r| r.is_finite() && *r > 0.0);
    let c = if usable {
        (ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64).exp()
    } else {
        f64::NAN
    };
    let worst = ratios
        .iter()
        .map(|r| (r / c - 1.0).abs())
        .fold(0.0, f64::max);
    let passed = usable && worst <= tolerance;
    CheckOutcome {
        name: name.to_string(),
        passed,
        value: worst,
        limit: tolerance,
        detail: format!("fitted C = {c:.6e}; ratios = {ratios:?}"),
    }
}

/// Maximum of `(hs_u + hs_b)/(1+t)^{δ/2}` after `split` relative to before.
pub fn growth_check(
    history: &[DiagnosticsRecord],
    s: f64,
    delta: f64,
    split: f64,
    tolerance: f64,
) -> Result<CheckOutcome> {
    let exponent = theorem_rate(s, delta, RateIndex::Growth)?;
    let quotient = |r: &DiagnosticsRecord| Quantity::HsSum.value(r) / (1.0 + r.t).powf(exponent);
    let early = history
        .iter()
        .filter(|r| r.t < split)
        .map(quotient)
        .fold(f64::NAN, f64::max);
    let late = history
        .iter()
        .filter(|r| r.t >= split)
        .map(quotient)
        .fold(f64::NAN, f64::max);
    if early.is_nan() || late.is_nan() {
        return Err(Error::InsufficientSamples(format!(
            "growth check needs samples on both sides of t = {split}"
        )));
    }
    let ratio = late / early;
    Ok(CheckOutcome {
        name: "growth quotient attained early".into(),
        passed: ratio.is_finite() && ratio <= tolerance,
        value: ratio,
        limit: tolerance,
        detail: format!("max before t={split}: {early:.6e}; after: {late:.6e}"),
    })
}

/// Decay targets of the regime: `(quantity, theorem index)`.
pub fn decay_targets(regime: Regime) -> Vec<(Quantity, RateIndex)> {
    let mut targets = vec![
        (Quantity::L2U, RateIndex::UDecay { l: 0.0 }),
        (Quantity::VerticalNeqM1, RateIndex::VerticalDecay { k: 0.0 }),
    ];
    if FunctionalFamily::for_regime(regime) == FunctionalFamily::Psi {
        targets.push((Quantity::L2B, RateIndex::UDecay { l: 0.0 }));
    }
    targets
}

pub fn decay_checks(
    history: &[DiagnosticsRecord],
    settings: &StudySettings,
) -> Result<Vec<(RateFit, CheckOutcome)>> {
    decay_targets(settings.regime)
        .into_iter()
        .map(|(q, index)| {
            let exponent = theorem_rate(settings.s, settings.delta, index)?;
            let fit = fit_decay(history, q, settings.decay_window, exponent)?;
            let outcome = CheckOutcome {
                name: format!("decay quotient of {}", q.name()),
                passed: fit.uniform_quotient.is_finite()
                    && fit.quotient_slope <= settings.quotient_slope_limit,
                value: fit.quotient_slope,
                limit: settings.quotient_slope_limit,
                detail: format!(
                    "slope {:.4} vs exponent {:.4}; uniform quotient {:.6e}",
                    fit.slope, fit.theorem_exponent, fit.uniform_quotient
                ),
            };
            Ok((fit, outcome))
        })
        .collect()
}

/// Sup of the functional's first component norm: `‖u,b‖_{Ḣ^m}` for the
/// viscous family and `‖u,b‖_{H^m}` for the resistive one.
fn stability_sup(history: &[DiagnosticsRecord], family: FunctionalFamily) -> f64 {
    history
        .iter()
        .map(|r| match family {
            FunctionalFamily::Gamma => r.hm_u + r.hm_b,
            FunctionalFamily::Psi => r.hm_inh_u + r.hm_inh_b,
        })
        .fold(0.0, f64::max)
}

/// Runs every check of a decay study. Scaling checks need at least two runs.
pub fn evaluate_study(runs: &[StudyRun], settings: &StudySettings) -> Result<StudyReport> {
    if runs.is_empty() {
        return Err(Error::InsufficientSamples("no runs in study".into()));
    }
    let family = FunctionalFamily::for_regime(settings.regime);
    let mut checks = Vec::new();
    let mut fits = Vec::new();
    let mut functionals = Vec::new();
    for run in runs {
        functionals.push(assemble_functionals(
            &run.history,
            settings.s,
            settings.delta,
            settings.regime,
        )?);
    }
    if runs.len() > 1 {
        let sups: Vec<(f64, f64)> = runs
            .iter()
            .map(|r| (r.epsilon, stability_sup(&r.history, family)))
            .collect();
        checks.push(scaling_check(
            "sup norm scales like epsilon",
            &sups,
            1,
            settings.scaling_tolerance,
        ));
        let totals: Vec<(f64, f64)> = runs
            .iter()
            .zip(&functionals)
            .map(|(r, f)| (r.epsilon, f.total))
            .collect();
        checks.push(scaling_check(
            "functional scales like epsilon^2",
            &totals,
            2,
            settings.scaling_tolerance,
        ));
    }
    for run in runs {
        let tag = format!(" (eps={:e}, seed={})", run.epsilon, run.seed);
        let mut growth = growth_check(
            &run.history,
            settings.s,
            settings.delta,
            settings.growth_split,
            settings.growth_tolerance,
        )?;
        growth.name.push_str(&tag);
        checks.push(growth);
        for (fit, mut outcome) in decay_checks(&run.history, settings)? {
            outcome.name.push_str(&tag);
            checks.push(outcome);
            fits.push(fit);
        }
    }
    Ok(StudyReport {
        checks,
        fits,
        functionals,
    })
}
