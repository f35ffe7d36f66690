use thiserror::Error;

/// Errors raised anywhere in the lab.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("C-RNTI space exhausted")]
    RntiSpaceExhausted,

    #[error("config error: {0}")]
    Config(String),

    #[error("malformed subframe stream: {0}")]
    Stream(String),

    #[error("malformed trace line {line}: {msg}")]
    Trace { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
