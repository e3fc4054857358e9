use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("element kind does not match group: {0}")]
    KindMismatch(String),
    #[error("unsupported shape group for this operation: {0}")]
    UnsupportedShape(String),
    #[error("search budget exceeded after visiting {visited} states")]
    BudgetExceeded { visited: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("lamp-metric generating set requires a finite base group")]
    InfiniteBase,
    #[error("eigenvalue iteration did not converge within {0} iterations")]
    NonConvergence(usize),
    #[error("need at least two distinct points")]
    DegenerateSample,
    #[error("fewer than {needed} nonempty distance bins (got {got})")]
    TooFewBins { needed: usize, got: usize },
    #[error("zero vector not allowed")]
    ZeroVector,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
