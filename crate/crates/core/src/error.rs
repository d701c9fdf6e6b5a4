use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method ran out of iterations.
    #[error("{method} did not converge after {iterations} iterations (achieved relative error {achieved:e})")]
    Convergence {
        method: &'static str,
        iterations: usize,
        achieved: f64,
    },

    /// The supplied growth family does not determine a regime.
    #[error("ambiguous regime: {0}")]
    AmbiguousRegime(String),

    /// A regime tag was paired with parameters from another regime.
    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),

    /// An ensemble specification was rejected before running.
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    /// A condition that the mathematics guarantees failed to hold.
    #[error("internal error: {0}")]
    Internal(String),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
