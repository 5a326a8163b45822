use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// Variants are grouped by how a caller should react: malformed input,
/// unmet mathematical preconditions, numerical breakdown, and internal
/// cross-check failures (which indicate a bug).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown species `{name}` at line {line}, column {column}")]
    UnknownSpecies {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("rate must be positive and finite, got {0}")]
    NonPositiveRate(f64),
    #[error("input contains no reactions")]
    NoReactions,
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("integer overflow: result does not fit in 64 bits")]
    Overflow,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
