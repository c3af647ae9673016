use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("universal modality in a basic-language context")]
    UniversalInBasic,

    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    Resource {
        what: &'static str,
        needed: u64,
        cap: u64,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{0}")]
    Usage(String),

    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}
