use thiserror::Error;

/// Library error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates a precondition of the operation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The instance is larger than the enumeration/exactness guard allows.
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),

    /// Laplace method inapplicable: the Hessian coefficient is not positive.
    #[error("alpha = {alpha} is not positive (c >= (k^(r-1)-1)^2 / (r(r-1)))")]
    AlphaNotPositive { alpha: f64 },

    /// Unknown check id passed to the lemma verifier.
    #[error("unknown lemma id: {0}")]
    UnknownLemma(String),
}

pub type Result<T> = std::result::Result<T, Error>;
