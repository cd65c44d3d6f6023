use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A request exceeds a configured enumeration or size limit.
    #[error("refused: {0}")]
    Refused(String),

    /// A request is structurally invalid (unknown ids, bad parameters).
    #[error("malformed request: {0}")]
    Malformed(String),

    /// Text input could not be parsed.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// An algorithm broke the rules of a game protocol.
    #[error("protocol violation at turn {turn}: {message}")]
    Protocol { turn: usize, message: String },

    /// An internal consistency check failed.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    /// An adversary could not find the witness its construction needs.
    #[error("no witness assignment found: {0}")]
    WitnessNotFound(String),

    /// Filesystem or serialization failure.
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn protocol(turn: usize, message: impl Into<String>) -> Self {
        Error::Protocol {
            turn,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
