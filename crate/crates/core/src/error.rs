use std::io;

use crate::partition::Channel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("channel mismatch: expected {expected}, found {found}")]
    ChannelMismatch { expected: Channel, found: Channel },

    #[error("malformed sequence: {0}")]
    Malformed(String),

    #[error("boundary {0} has no assigned state")]
    UnassignedState(usize),

    #[error("threshold {0} is outside [0, 1]")]
    InvalidThreshold(f64),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("sentence {sentence}: token {token} has no POS tag")]
    MissingPos { sentence: usize, token: usize },

    #[error("invalid spans: {0}")]
    InvalidSpans(String),

    #[error("cannot express in {format}: {message}")]
    Inexpressible { format: &'static str, message: String },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("model: {0}")]
    Model(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
