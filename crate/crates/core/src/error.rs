use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("gram matrix is not square")]
    NotSquare,
    #[error("gram matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("lattice is not even: diagonal entry {0} is odd")]
    OddDiagonal(usize),
    #[error("rescaling factor must be nonzero")]
    ZeroScale,
    #[error("lattice is degenerate (determinant 0)")]
    Degenerate,
    #[error("zero vector not allowed here")]
    ZeroVector,
    #[error("vector is not primitive")]
    NotPrimitive,
    #[error("vector is not isotropic (norm {0})")]
    NotIsotropic(String),
    #[error("expected a root of norm -2, got norm {0}")]
    NotARoot(String),
    #[error("wrong signature: expected {expected}, got {actual}")]
    WrongSignature { expected: String, actual: String },
    #[error("wrong rank: expected {expected}, got {actual}")]
    WrongRank { expected: usize, actual: usize },
    #[error("controlling vector must have positive norm, got {0}")]
    NonPositiveControl(String),
    #[error("series order {available} is insufficient, need {required}")]
    InsufficientOrder { required: i64, available: i64 },
    #[error("negative exponent on a weight-zero factor")]
    NegativeExponentOnUnit,
    #[error("series division is not exact")]
    InexactDivision,
    #[error("invalid order {0}")]
    InvalidOrder(i64),
    #[error("modulus must be positive")]
    NonPositiveModulus,
    #[error("malformed lattice json: {0}")]
    Json(String),
    #[error(transparent)]
    Parse(#[from] crate::dsl::ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
