use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid seed graph specification: {0}")]
    InvalidSpec(String),

    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degree {degree} is outside the weight table (defined for degrees 1..={len})")]
    OutOfDomain { degree: u32, len: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no eligible host remains for this request")]
    CannotSatisfy,

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("internal invariant violated: {0}")]
    Logic(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse_at_line(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            location: format!("line {line}"),
            message: message.into(),
        }
    }

    pub(crate) fn parse_at_offset(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            location: format!("byte offset {offset}"),
            message: message.into(),
        }
    }
}
