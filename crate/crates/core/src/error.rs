//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("matrix shape mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("subspace is not contained in the other: {0}")]
    NotNested(String),
    #[error("induced map is not well defined: {0}")]
    NotWellDefined(String),
    #[error("map is not invertible")]
    NotInvertible,
    #[error("source/target mismatch when composing maps")]
    SourceTargetMismatch,
    #[error("not a valid intramural pair: {0} -> {1}")]
    InvalidPair(String, String),
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("path step {0} is not invertible")]
    NotInvertibleAtStep(usize),
    #[error("complex is not exact: {0}")]
    NotExact(String),
    #[error("internal consistency check failed: {0}")]
    InternalCheckFailed(String),
    #[error("triple complex is not exact along all axes: {0}")]
    NotTriplyExact(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
}

pub type Result<T> = std::result::Result<T, Error>;
