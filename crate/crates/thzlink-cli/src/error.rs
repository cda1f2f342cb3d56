//! Command-line error reporting.
//!
//! Every failure surfaces as exactly one line on stderr in the form
//! `error[<kind>]: <message>`, so scripts can match on the prefix and the
//! kind without parsing free text. Usage mistakes exit with 2, everything
//! else with 1.

use std::fmt;
use std::path::PathBuf;

use thzlink::ThzError;

/// A failure on its way to stderr.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config fields, or values a command refuses.
    Usage(String),
    /// The underlying model rejected the request.
    Model(ThzError),
    /// A file could not be read or written.
    Io(PathBuf, std::io::Error),
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self::Usage(message.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io(path.into(), source)
    }

    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Collapses a message to a single line.
fn one_line(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(msg) => write!(f, "error[usage]: {}", one_line(msg)),
            Self::Model(err) => write!(f, "error[model]: {}", one_line(&err.to_string())),
            Self::Io(path, err) => {
                write!(f, "error[io]: {}: {}", path.display(), one_line(&err.to_string()))
            }
        }
    }
}

impl From<ThzError> for CliError {
    fn from(err: ThzError) -> Self {
        Self::Model(err)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
