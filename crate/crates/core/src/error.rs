use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("truncated input: expected {expected} bytes, found {found}")]
    Length { expected: usize, found: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("training diverged at epoch {epoch} (loss = {loss})")]
    Diverged { epoch: usize, loss: f64 },

    #[error("artifact mismatch: {0}")]
    Mismatch(String),

    #[error("checksum failure in {what}")]
    Checksum { what: String },

    #[error("phase retrieval failed: {0}")]
    Retrieval(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
