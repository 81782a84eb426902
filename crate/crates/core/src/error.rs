use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Arguments violate a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two paths or ensembles were expected to share a grid.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A rejection sampler ran out of attempts.
    #[error("rejection sampler exhausted after {attempts} attempts (acceptance estimate {acceptance_estimate:.3e})")]
    RejectionExhausted {
        attempts: u64,
        accepted: u64,
        acceptance_estimate: f64,
    },

    /// Eigensolver or determinant failure, or a non-finite intermediate.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Jump-ensemble data outside the favourable windows (or a degenerate middle interval).
    #[error("favourable-event failure: {0}")]
    FavFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
