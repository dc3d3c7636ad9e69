use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("r_{d} disagrees between closed form ({closed}) and recursion ({recursive})")]
    RdMismatch {
        d: usize,
        closed: String,
        recursive: String,
    },

    #[error("no real root of the defining polynomial in ({lo}, {hi})")]
    NoRootInBracket { lo: f64, hi: f64 },

    #[error("weight system is degenerate: nullspace dimension {nullity}")]
    Degenerate { nullity: usize },

    #[error("basis function {index} ({name}) is linearly dependent on the grid")]
    DependentBasis { index: usize, name: String },

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
