use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid class parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The series did not reach the requested tolerance within the term cap.
    /// Carries the best partial result so callers can decide what to do.
    #[error(
        "series truncation failed: tolerance {tol:e} not reached within {terms} terms \
         (value {value}, tail bound {tail_bound:e})"
    )]
    Truncation {
        value: f64,
        tail_bound: f64,
        terms: u64,
        tol: f64,
    },

    #[error("bracket not certified: {0}")]
    Bracket(String),

    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),

    #[error("closed form {0} shows no sign change on (0,1)")]
    ClosedFormInconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "tolerance must be positive and finite, got {tol}"
        )))
    }
}
