use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("duplicate column name `{0}`")]
    DuplicateColumn(String),

    #[error("no such column `{0}`")]
    NoSuchColumn(String),

    #[error("column `{0}` is not numeric")]
    NotNumeric(String),

    #[error("{stat}: {msg}")]
    Domain { stat: &'static str, msg: String },

    #[error("degenerate scale: {0}")]
    DegenerateScale(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("missing value in {0}")]
    Missing(String),

    #[error("empty input")]
    Empty,

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(stat: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { stat, msg: msg.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
