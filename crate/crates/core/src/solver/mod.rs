//! Time integration of the perturbation equations.

pub mod config;
pub mod initial;
pub mod nonlinear;
pub mod propagator;
pub mod run;
pub mod state;
pub mod stepper;

pub use config::RunConfig;
pub use initial::make_initial_data;
pub use nonlinear::{nonlinear_rhs, NonlinearTerms};
pub use propagator::{linear_propagator, Matrix2};
pub use run::{run, run_from, run_observed, RunOutput, BLOW_UP_FACTOR};
pub use state::{Dissipated, MhdState, Regime};
pub use stepper::{cfl_dt, step, StepOptions, Stepper};
