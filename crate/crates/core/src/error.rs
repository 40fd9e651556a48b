use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: n_fock = {0}, at least 2 levels are required")]
    InvalidDimension(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("unknown scenario label `{0}`")]
    UnknownLabel(String),

    #[error("unknown figure id {0}, expected 1 to 5")]
    UnknownFigure(u8),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
}

impl Error {
    /// True for errors raised by a violated numerical contract rather than by
    /// bad user input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::ContractViolation(_))
    }
}
