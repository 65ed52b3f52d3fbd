use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("M and N must be coprime (N={n}, M={m})")]
    NotCoprime { n: usize, m: usize },

    #[error("invalid sequence parameters: {0}")]
    InvalidSpec(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("input too short: need {needed} samples, have {have}")]
    TooShort { needed: usize, have: usize },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("no valid frequency bins for refinement")]
    NoValidBins,

    #[error("empty search grid")]
    EmptyGrid,

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
