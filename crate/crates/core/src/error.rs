use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeisenError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("finite-difference step underflow ({0:e})")]
    StepUnderflow(f64),
    #[error("overflow guard tripped evaluating {0}")]
    Overflow(String),
    #[error("grid mismatch")]
    GridMismatch,
    #[error("tail mass {tail:e} above tolerance {tol:e}")]
    TailMass { tail: f64, tol: f64 },
    #[error("lambda {0} outside the grid after scaling")]
    OutOfRange(f64),
    #[error("no representation found: {0}")]
    NoRepresentation(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, HeisenError>;
