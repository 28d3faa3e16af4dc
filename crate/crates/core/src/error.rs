use std::path::PathBuf;

/// Errors raised by the identification pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("series of length {len} is too short for a lag horizon of {horizon}")]
    SeriesTooShort { len: usize, horizon: usize },

    #[error("simulation diverged at t = {t}: |y| = {value:e} exceeds {bound:e}")]
    SimulationDiverged { t: usize, value: f64, bound: f64 },

    #[error("gradient descent diverged after {iterations} iterations with step {step:e}")]
    GradientDescentDiverged { step: f64, iterations: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
