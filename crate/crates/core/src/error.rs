use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("field has nonzero mean (|f(0)| = {mean:e}); {context}")]
    NonzeroMean { mean: f64, context: String },

    #[error("{0} requires a vector field")]
    ExpectedVector(&'static str),

    #[error("{0} requires a scalar field")]
    ExpectedScalar(&'static str),

    #[error("zero wave vector is not admissible here: {0}")]
    ZeroMode(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration rejected:\n  - {}", .0.join("\n  - "))]
    InvalidConfig(Vec<String>),

    #[error("numerical blow-up at t = {t}: {reason}")]
    BlowUp {
        t: f64,
        reason: String,
        /// `(t, ‖u‖_{H^s} + ‖b‖_{H^s})` for every step taken so far.
        norm_history: Vec<(f64, f64)>,
    },

    #[error("case preconditions violated: {0}")]
    CasePrecondition(String),

    #[error("not enough samples: {0}")]
    InsufficientSamples(String),
}
