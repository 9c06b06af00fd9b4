use thiserror::Error;

/// Errors produced by the exact and numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A fitted sequence is not polynomial of the expected degree on the sampled range.
    #[error("degree mismatch for {sequence}: expected degree <= {expected}, found {found}")]
    DegreeMismatch {
        sequence: &'static str,
        expected: i64,
        found: i64,
    },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    /// Quadrature did not reach the requested tolerance.
    #[error("accuracy not reached: achieved {achieved:.3e}, requested {requested:.3e}")]
    Accuracy { achieved: f64, requested: f64 },

    #[error("verification failed: {0}")]
    VerificationFailure(String),

    /// The metric produced by the balancing map is not positive definite.
    #[error("degenerate cycle: {0}")]
    Degeneracy(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
