use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is not square")]
    NotSquare,
    #[error("row width {found} does not match {expected} unknowns")]
    RowWidth { expected: usize, found: usize },
    #[error("cannot parse exact number from {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("spatial dimension must be even and at least 2, got {0}")]
    BadDimension(usize),
    #[error("monomial degree {degree} exceeds generator count {generators}")]
    DegreeTooLarge { degree: usize, generators: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("model is already doubled")]
    AlreadyDoubled,
    #[error("mass must be nonnegative")]
    NegativeMass,
    #[error("momentum has {found} components, expected {expected}")]
    MomentumLength { expected: usize, found: usize },
    #[error("{0}")]
    Unsupported(String),
    #[error("invalid density state: {0}")]
    InvalidDensity(String),
    #[error("invalid mass profile: {0}")]
    InvalidProfile(String),
    #[error("unknown symmetry {0:?}")]
    UnknownSymmetry(String),
    #[error("unknown variant {0:?}")]
    UnknownVariant(String),
    #[error("certificate schema version {found} is not supported (expected {expected})")]
    SchemaVersion { expected: u32, found: u32 },
    #[error("certificate error: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
