use super::config::RunConfig;
use super::initial::make_initial_data;
use super::state::MhdState;
use super::stepper::{cfl_dt, StepOptions, Stepper};
use crate::diagnostics::{DiagnosticsRecord, Recorder};
use crate::error::{Error, Result};

/// A run is declared blown up once `‖u‖_{H^s} + ‖b‖_{H^s}` exceeds its
/// initial value by this factor.
pub const BLOW_UP_FACTOR: f64 = 1e6;

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub history: Vec<DiagnosticsRecord>,
    pub final_state: MhdState,
    /// Step size actually used, `T / steps`.
    pub dt: f64,
    pub steps: usize,
}

/// Validates `config`, builds the initial data and integrates to `t_final`.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    run_observed(config, |_| Ok(()))
}

/// Like [`run`], calling `observe` on the initial state and after every step.
pub fn run_observed(
    config: &RunConfig,
    observe: impl FnMut(&MhdState) -> Result<()>,
) -> Result<RunOutput> {
    config.validate()?;
    let initial = make_initial_data(config)?;
    run_from(initial, config, observe)
}

/// Integrates from a given state; the step size is `config.dt` or the CFL
/// bound of `initial`, shortened so that an integer number of steps lands
/// exactly on `t_final`.
pub fn run_from(
    initial: MhdState,
    config: &RunConfig,
    mut observe: impl FnMut(&MhdState) -> Result<()>,
) -> Result<RunOutput> {
    let recorder = Recorder::new(initial.lattice(), config.s, config.delta, config.regime);
    let nominal = config.dt.unwrap_or_else(|| cfl_dt(&initial));
    let steps = if config.t_final == 0.0 {
        0
    } else {
        (config.t_final / nominal - 1e-9).ceil().max(1.0) as usize
    };
    let dt = if steps == 0 {
        nominal
    } else {
        config.t_final / steps as f64
    };
    let options = StepOptions {
        nonlinear: config.nonlinear,
        resymmetrize: config.resymmetrize.then_some(config.symmetry),
    };
    let stepper = Stepper::new(initial.lattice(), initial.mu, initial.nu, dt, options)?;

    observe(&initial)?;
    let first = recorder.record(&initial);
    let threshold = BLOW_UP_FACTOR * (first.hs_u + first.hs_b);
    let mut history = vec![first];
    let mut state = initial;
    let t0 = state.t;
    let norm_history =
        |h: &[DiagnosticsRecord]| h.iter().map(|r| (r.t, r.hs_u + r.hs_b)).collect::<Vec<_>>();

    for step in 1..=steps {
        state = match stepper.step(&state) {
            Ok(next) => next,
            Err(Error::BlowUp { t, reason, .. }) => {
                return Err(Error::BlowUp {
                    t,
                    reason,
                    norm_history: norm_history(&history),
                })
            }
            Err(e) => return Err(e),
        };
        // pin the clock to the grid so that t_final is hit exactly
        state.t = t0 + step as f64 * dt;
        observe(&state)?;
        let is_last = step == steps;
        if step % config.output_every == 0 || is_last {
            let r = recorder.record(&state);
            let size = r.hs_u + r.hs_b;
            history.push(r);
            if !size.is_finite() || size > threshold {
                return Err(Error::BlowUp {
                    t: state.t,
                    reason: format!(
                        "H^s norm {size:e} exceeds {BLOW_UP_FACTOR:e} times its initial value"
                    ),
                    norm_history: norm_history(&history),
                });
            }
        }
    }
    Ok(RunOutput {
        history,
        final_state: state,
        dt,
        steps,
    })
}
