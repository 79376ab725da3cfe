use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPerm(String),

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("not contained in the ambient group: {0}")]
    NotContained(String),

    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    Capacity { order: u64, cap: u64 },

    #[error("special family of degree {degree} has {count} members, above the ceiling {ceiling}")]
    FamilyCeiling { degree: usize, count: usize, ceiling: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("cannot generate instance: {0}")]
    Generation(String),

    #[error("instance schema error at {location}: {message}")]
    Schema { location: String, message: String },

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
