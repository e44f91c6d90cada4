use thiserror::Error;

use crate::arith::ArithError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("generator {0} does not have determinant 1")]
    DeterminantNotOne(String),
    #[error("unknown generator '{0}'")]
    UnknownGenerator(char),
    #[error("matrix is the identity")]
    IdentityInput,
    #[error("element is not elliptic (translation length {0})")]
    NotElliptic(u64),
    #[error("matrix is not quasi-unipotent")]
    NotQuasiUnipotent,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("sweep budget of {0} exceeded")]
    SweepBudgetExceeded(usize),
    #[error("search budget exceeded: {0}")]
    SearchBudgetExceeded(String),
    #[error("form is singular at embedding {0}")]
    NumericallySingular(usize),
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }

    pub fn is_precision(&self) -> bool {
        matches!(self, Error::Arith(ArithError::PrecisionExhausted(_)))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
