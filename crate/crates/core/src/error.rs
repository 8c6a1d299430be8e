use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid qubit state: {0}")]
    InvalidState(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("symmetric projection vanishes (norm {0:.3e})")]
    ZeroProjection(f64),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("internal consistency violated: {0}")]
    Consistency(String),

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("malformed MPS: {0}")]
    MalformedMps(String),

    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }

    /// Process exit code for command-line drivers: resource guard 3, internal
    /// consistency 4, anything else 1. Usage errors (2) are raised before a
    /// library call is made.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceLimit(_) => 3,
            Error::Consistency(_) => 4,
            _ => 1,
        }
    }
}
