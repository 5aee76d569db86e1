use thiserror::Error;

/// Error type shared across the toolkit.
///
/// Variants map to the failure categories surfaced by the CLI: `config`,
/// `shape`, `data`, `state`, `index`, `domain`, and `io`.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration value or inconsistent settings.
    #[error("configuration error: {0}")]
    Config(String),
    /// Numeric argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Tensor or vector dimensions do not match.
    #[error("shape error: {0}")]
    Shape(String),
    /// Malformed or inconsistent input data (files, payloads).
    #[error("data error: {0}")]
    Data(String),
    /// Operation called in a state that does not permit it.
    #[error("state error: {0}")]
    State(String),
    /// Index outside the valid range.
    #[error("index error: {0}")]
    Index(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short category tag used in CLI error lines and exit reporting.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Config(_) => "config",
            Error::Domain(_) => "domain",
            Error::Shape(_) => "shape",
            Error::Data(_) => "data",
            Error::State(_) => "state",
            Error::Index(_) => "index",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
