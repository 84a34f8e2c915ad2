use thiserror::Error;

/// Errors raised by the library. The variants map onto the CLI exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PdiError {
    #[error("index out of bounds: {0}")]
    Bounds(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, PdiError>;
