use thiserror::Error;

use crate::finite_metric::DiversityWeights;

/// Errors raised by the library.
///
/// The first group are domain errors: the input is well-formed but is not a
/// valid instance for the requested computation. The CLI maps them to a
/// distinct exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("similarity matrix is not positive definite (pivot {pivot:.3e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("dimension cap exceeded: {what} (got {got}, limit {limit})")]
    DimensionCap {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("degenerate body: {0}")]
    DegenerateBody(String),

    #[error("tuple budget exceeded: {needed} atom subsets needed, budget is {budget}")]
    TupleBudgetExceeded { needed: u128, budget: u64 },

    #[error("iteration limit reached with KKT residual {residual:.3e}")]
    IterationLimit {
        residual: f64,
        weights: Box<DiversityWeights>,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::DimensionCap { .. } => "DimensionCap",
            Error::DegenerateBody(_) => "DegenerateBody",
            Error::TupleBudgetExceeded { .. } => "TupleBudgetExceeded",
            Error::IterationLimit { .. } => "IterationLimit",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
