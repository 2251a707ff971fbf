use thiserror::Error;

/// Failures surfaced by the library. Each variant maps to a distinct CLI exit code.
#[derive(Debug, Error)]
pub enum CobexError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported operation: {0}")]
    UnsupportedOperation(String),

    #[error("deleting cells of dimension {dim} would break closure (top dimension is {top_dim})")]
    WouldBreakClosure { dim: usize, top_dim: usize },

    #[error("budget exceeded: {what} (quotient dimension q = {q})")]
    BudgetExceeded { what: String, q: usize },

    #[error("input chain is not a cycle")]
    NotACycle,

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("malformed complex: {0}")]
    MalformedComplex(String),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CobexError>;

pub(crate) fn invalid(msg: impl Into<String>) -> CobexError {
    CobexError::InvalidParameter(msg.into())
}
