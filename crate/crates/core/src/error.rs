use thiserror::Error;

/// Errors raised by problem evaluation, the solvers, and the study harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DdeError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("initial function evaluated at t = {t}, outside [{lower}, 0]")]
    OutsideInitialDomain { t: f64, lower: f64 },

    #[error("right-hand side returned a non-finite value at t = {t}, x = {x:?}, z = {z:?}")]
    NonFiniteRhs { t: f64, x: Vec<f64>, z: Vec<f64> },

    #[error("initial function returned a non-finite value at t = {t}")]
    NonFiniteInitial { t: f64 },

    #[error("solver failed on interval j = {interval}, step k = {step}: {reason}")]
    SolverFailure {
        interval: isize,
        step: usize,
        reason: String,
    },

    #[error("random stream for interval {interval} exhausted after {drawn} draws")]
    StreamExhausted { interval: usize, drawn: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("fit failed: {0}")]
    FitFailure(String),

    #[error("study failed: {0}")]
    StudyFailure(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for DdeError {
    fn from(err: std::io::Error) -> Self {
        DdeError::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, DdeError>;
