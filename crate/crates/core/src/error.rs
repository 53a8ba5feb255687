use thiserror::Error;

use crate::types::{LimitResult, Scalar};

/// Errors raised by the library. Numerical outcomes that still carry a value
/// (non-converged integrals) are reported through [`crate::Status`] instead.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    /// The one-sided limits of a Laplace mean exist but do not agree.
    #[error("sides disagree: left limit {left}, right limit {right}")]
    SidesDisagree { left: f64, right: f64 },

    /// A parameter ladder did not stabilise.
    #[error("no convergence along the parameter ladder (last value {})", .0.value)]
    NoConvergence(Box<LimitResult<Scalar>>),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Stable kebab-case label for reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::HypothesisViolation(_) => "hypothesis-violation",
            Error::SidesDisagree { .. } => "sides-disagree",
            Error::NoConvergence(_) => "no-convergence",
            Error::Integration(_) => "integration-failed",
            Error::Parse(_) => "parse-error",
            Error::UnknownFunction(_) => "unknown-function",
            Error::Io(_) => "io-error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
