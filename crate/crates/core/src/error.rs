use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Shapes or lengths disagree, or a container is empty where it may not be.
    #[error("structural error: {0}")]
    Structural(String),

    /// A value lies outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unlabeled dataset: error rate needs ground-truth labels")]
    UnlabeledDataset,

    #[error("unknown {kind} `{name}` (valid: {valid})")]
    Lookup {
        kind: &'static str,
        name: String,
        valid: String,
    },

    #[error("load error in {source_name}: {message}")]
    Load { source_name: String, message: String },

    #[error("fetch error for {url}: {message}")]
    Fetch { url: String, message: String },

    #[error("integrity error: {path} has checksum {actual}, expected {expected}")]
    Integrity {
        path: PathBuf,
        expected: String,
        actual: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
