//! Library-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("operands belong to different contexts")]
    ContextMismatch,
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("parameter substitution makes a denominator vanish")]
    SubstitutionZeroDenominator,
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("matrix is not square")]
    NonSquareMatrix,
    #[error("inexact division where exact division was required")]
    InexactDivision,
    #[error("basis is linearly dependent: {0}")]
    DependentBasis(String),
    #[error("coefficients carry parameters; instantiate them first ({0})")]
    ParameterBearing(String),
    #[error("vector field is not tangent to the surface; residual: {0}")]
    NotOnSurface(String),
    #[error("polynomial is not a factor")]
    NotAFactor,
    #[error("{0}")]
    InvalidInput(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at byte {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("coordinate-bearing denominator at byte {pos}")]
    CoordinateInDenominator { pos: usize },
    #[error("system file error at line {line}: {msg}")]
    FileFormat { line: usize, msg: String },
    #[error("unknown catalog system `{0}`")]
    UnknownSystem(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
