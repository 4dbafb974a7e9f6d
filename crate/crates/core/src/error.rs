use thiserror::Error;

/// Errors raised by the algebraic and numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("invalid constant term: {0}")]
    InvalidConstantTerm(&'static str),

    #[error("matrix entry ({row}, {col}) has odd total degree")]
    OddDegreeEntry { row: usize, col: usize },

    #[error("matrix is not square or sizes disagree: {0}")]
    MatrixShape(String),

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i64, found: i64 },

    #[error("form degree {form} exceeds the {factors} wedge factors of the poly-vector field")]
    FormDegreeTooLarge { form: usize, factors: usize },

    #[error("arity mismatch: operator takes {expected} arguments, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("invalid graph parameters: {0}")]
    InvalidGraph(String),

    #[error("negative edge count 2n+m-2-eps = {0}")]
    NegativeEdgeCount(i64),

    #[error("coincident points in angle evaluation")]
    CoincidentPoints,

    #[error("element is not a Maurer-Cartan element")]
    NotMaurerCartan,

    #[error("element has the wrong degree for this operation: {0}")]
    WrongDegree(String),

    #[error("filtration violation: {0}")]
    Filtration(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
