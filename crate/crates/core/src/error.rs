use thiserror::Error;

use crate::linear::Mode;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mode {0} appears more than once")]
    DuplicateMode(Mode),

    #[error("state norm {0:.15} exceeds 1")]
    NormExceeded(f64),

    #[error("time slot {slot} on path '{path}' is outside the window 0..{window}")]
    TimeWindowOverflow { path: String, slot: i64, window: u32 },

    #[error("projection has zero probability, cannot renormalize")]
    ZeroProbability,

    #[error("basis does not cover the transform: mode {0} is missing")]
    BasisIncomplete(Mode),

    #[error("coupling ratio {0} is outside [0, 1]")]
    InvalidRatio(f64),

    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),

    #[error("amplitude {0} is outside [0, 1]")]
    InvalidAmplitude(f64),

    #[error("map is identically zero")]
    ZeroMap,

    #[error("too many path labels in one circuit ({0}, limit {limit})", limit = crate::linear::MAX_PATHS)]
    TooManyPaths(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) => 1,
            Error::TimeWindowOverflow { .. } | Error::ZeroProbability | Error::ZeroMap => 3,
            _ => 2,
        }
    }
}
