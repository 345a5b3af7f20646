use thiserror::Error;

/// Errors shared by every module of the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("rewrite did not terminate within {0} steps")]
    NonTerminating(usize),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("constraint matrix has field-dependent entries")]
    FieldDependent,
    #[error("constraint set is not second class (rank {rank} of {size})")]
    NotSecondClass { rank: usize, size: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("tachyonic mode: negative radicand {0}")]
    Tachyonic(f64),
    #[error("on-shell pole at K^2 + m^2 = {0}")]
    Pole(f64),
    #[error("stencil reaches the grid boundary: {0}")]
    Boundary(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
