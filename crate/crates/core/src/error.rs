use thiserror::Error;

/// Errors raised by the coreset library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoresetError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("point {index} has invalid weight {weight}")]
    InvalidWeight { index: usize, weight: f64 },
    #[error("point set is empty")]
    EmptyInstance,
    #[error("solution has no centers")]
    EmptySolution,
    #[error("k = {k} exceeds the {distinct} distinct points of the instance")]
    InfeasibleK { k: usize, distinct: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("net construction refused: {0}")]
    NetLimit(String),
    #[error("no candidate of type {i} found after {proposals} proposals")]
    TypeInfeasible { i: i32, proposals: usize },
}

pub type Result<T> = std::result::Result<T, CoresetError>;

pub(crate) fn param(msg: impl Into<String>) -> CoresetError {
    CoresetError::Parameter(msg.into())
}
