use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("mixed exact and float points")]
    ModeMismatch,
    #[error("operation requires exact rational coordinates")]
    FloatNotAllowed,
    #[error("epsilon {0} outside (0, 1/2)")]
    EpsOutOfRange(f64),
    #[error("empty point set")]
    EmptySet,
    #[error("duplicate point at index {0}")]
    DuplicatePoint(usize),
    #[error("point {index} has |u| = {norm} <= eps = {eps}")]
    PointTooClose { index: usize, norm: f64, eps: f64 },
    #[error("zero vector not allowed here")]
    ZeroVector,
    #[error("zero matrix has no gcd-bound factorization")]
    ZeroMatrix,
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: usize },
    #[error("modulus {0} above the supported budget")]
    ModulusTooLarge(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("projections onto the factors are not injective (points {0} and {1})")]
    NonInjectiveProjection(usize, usize),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
