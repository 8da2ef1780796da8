use thiserror::Error;

/// Errors raised by the library. Verdicts that are merely negative or
/// inconclusive are reported through result types, not through this enum.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("pole at point ({point})")]
    PoleAtPoint { point: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero denominator in rational function")]
    ZeroDenominator,
    #[error("series evaluation point not inside the unit polydisc (coordinate {0})")]
    DivergenceRisk(usize),
    #[error("no tail bound constant supplied for series `{0}`")]
    MissingTailBound(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("transformation matrix is singular")]
    SingularTransform,
    #[error("point has a zero coordinate at index {0}")]
    ZeroCoordinate(usize),
    #[error("leading coefficient p_0 is zero")]
    ZeroLeadingCoefficient,
    #[error("point is not certified regular: {0}")]
    NotRegular(String),
    #[error("target precision not reached within {0} iterations")]
    PrecisionUnreachable(usize),
    #[error("insufficient series order: {0}")]
    InsufficientOrder(String),
    #[error("block structure mismatch: {0}")]
    BlockMismatch(String),
    #[error("floor of {0} could not be separated from an integer")]
    AmbiguousFloor(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
