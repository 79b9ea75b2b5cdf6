//! Norms per time sample, energy functionals and decay-rate checks.

pub mod energy;
pub mod functionals;
pub mod rates;
pub mod record;
pub mod study;

pub use energy::{energy_balance_residual, lemma_energy_terms, LemmaEnergyTerms};
pub use functionals::{assemble_family, assemble_functionals, FunctionalFamily, FunctionalReport};
pub use rates::{fit_decay, fit_series, theorem_rate, Quantity, RateFit, RateIndex};
pub use record::{record, DiagnosticsRecord, Recorder, CSV_HEADER};
pub use study::{evaluate_study, CheckOutcome, StudyReport, StudyRun, StudySettings};
