//! Crate-wide error type.

use std::fmt;
use std::io;
use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug)]
pub enum Error {
    /// Matrix or set shapes do not agree.
    Dimension(String),
    /// Invalid configuration value.
    Config(String),
    /// Problem with the dataset contents.
    Data(String),
    /// Malformed input line while parsing an interaction file.
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    /// Violated an internal contract (stale cache, overlap of disjoint sets, ...).
    Contract(String),
    /// No evaluable users or similar evaluation failure.
    Evaluation(String),
    Io(io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::Config(msg) => write!(f, "invalid config: {msg}"),
            Error::Data(msg) => write!(f, "data error: {msg}"),
            Error::Parse {
                path,
                line,
                message,
            } => write!(f, "parse error in {} at line {line}: {message}", path.display()),
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
            Error::Evaluation(msg) => write!(f, "evaluation error: {msg}"),
            Error::Io(err) => write!(f, "io error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(err: io::Error) -> Self {
        Error::Io(err)
    }
}
