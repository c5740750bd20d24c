//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least {min}, got {got}")]
    InvalidDimension { got: usize, min: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("polytope has empty interior")]
    EmptyInterior,

    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("ray origin is not interior to the body")]
    OriginNotInterior,

    #[error("unsupported body for this operation: {0}")]
    UnsupportedBody(String),

    #[error("pathological geometry: {restarts} restarted trajectories without completing a step ({bo_calls} oracle calls spent)")]
    PathologicalGeometry { restarts: u32, bo_calls: u64 },

    #[error("barrier minimization did not converge: residual {residual:.3e} after {iterations} iterations")]
    ConvergenceFailure { residual: f64, iterations: usize },

    #[error("hessian is rank deficient (polytope has an unbounded direction)")]
    RankDeficient,

    #[error("sample lies outside the body")]
    OutOfBody,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
