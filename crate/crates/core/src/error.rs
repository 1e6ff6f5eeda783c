use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("degenerate direction: {0}")]
    DegenerateDirection(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("rank deficient: {0}")]
    RankDeficient(String),

    #[error("data are not linearly separable (gap upper bound {gap_upper:.3e})")]
    NotSeparable { gap_upper: f64 },

    #[error("solver did not converge after {iterations} iterations (max KKT violation {violation:.3e})")]
    NoConvergence { iterations: usize, violation: f64 },

    #[error("gap iteration did not converge after {iterations} iterations: gap in [{lower:.6e}, {upper:.6e}]")]
    GapNoConvergence { iterations: usize, lower: f64, upper: f64 },

    #[error("linear program failed: {0}")]
    LinearProgram(String),

    #[error("no support vectors: total dual weight is zero")]
    NoSupportVectors,

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
