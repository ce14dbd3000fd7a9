//! Crate-wide error type. Numerical routines return structured errors for
//! violated preconditions and failed verifications instead of panicking.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix not symmetric: {0}")]
    NotSymmetric(String),

    #[error("family members {0} and {1} do not commute (residual {2:.3e})")]
    NotCommuting(usize, usize, f64),

    #[error("Gram matrix numerically singular: {0}")]
    SingularGram(String),

    #[error("iteration cap exceeded: {0}")]
    Convergence(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("span not closed under bracket: {0}")]
    NotClosed(String),

    #[error("algebra not compatible (theta-stability fails): {0}")]
    NotCompatible(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("representation reducible or positivity inconsistent: {0}")]
    Reducible(String),

    #[error("unsupported size: {0}")]
    Unsupported(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("scenario parse error: {0}")]
    Parse(String),
}
