use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a point needs at least one coordinate")]
    EmptyPoint,

    #[error("coordinate {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point {0} is not part of the tabular ground set")]
    NotInGround(String),

    #[error("invalid ground set: {0}")]
    InvalidGround(String),

    #[error("invalid relation: {0}")]
    InvalidRelation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("the zero vector has no direction")]
    ZeroVector,

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("step schedule rejected: {0}")]
    Schedule(String),

    #[error("oracle returned a vector of norm {norm} at iteration {k}, exceeding the bound L = {bound}")]
    OracleNorm { k: usize, norm: f64, bound: f64 },

    #[error("oracle returned a non-finite vector at iteration {k}")]
    OracleNonFinite { k: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("trace has no iterates")]
    EmptyTrace,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
