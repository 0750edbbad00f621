use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("at least one observation is required")]
    Empty,

    #[error("weight at position {index} is {value}; weights must be finite and strictly positive")]
    InvalidWeight { index: usize, value: f64 },

    #[error("entry {value} at position {index} is not a binary label (0 or 1)")]
    InvalidBinaryLabel { index: usize, value: usize },

    #[error("class index {value} at position {index} is out of range for {k} classes")]
    ClassOutOfRange {
        index: usize,
        value: usize,
        k: usize,
    },

    #[error("at least {min} classes are required, got {k}")]
    TooFewClasses { k: usize, min: usize },

    #[error("degenerate labels: {0}")]
    DegenerateLabels(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

pub type Result<T, E = MetricError> = std::result::Result<T, E>;

pub(crate) fn degenerate(reason: impl Into<String>) -> MetricError {
    MetricError::DegenerateLabels(reason.into())
}

pub(crate) fn precondition(reason: impl Into<String>) -> MetricError {
    MetricError::PreconditionViolated(reason.into())
}
