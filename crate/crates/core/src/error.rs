use thiserror::Error;

/// Errors raised by the algebra kernel, the matrix layers and the input parsers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("context mismatch: elements over {left} and {right} generators")]
    Context { left: u8, right: u8 },
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("parity error: {0}")]
    Parity(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }
}
