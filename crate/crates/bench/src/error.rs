use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = BenchError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] swarmcluster::Error),

    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },

    #[error("missing grid cells: {0}")]
    IncompleteGrid(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Internal(String),
}

impl BenchError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 1 usage, 2 data, 3 internal.
    pub fn exit_code(&self) -> i32 {
        use swarmcluster::Error as E;
        match self {
            Self::Usage(_) => 1,
            Self::Core(E::Lookup { .. } | E::Config(_)) => 1,
            Self::Core(E::Load { .. } | E::Fetch { .. } | E::Integrity { .. } | E::Io(_) | E::UnlabeledDataset) => 2,
            Self::Core(_) => 3,
            Self::Parse { .. } | Self::IncompleteGrid(_) | Self::Io { .. } => 2,
            Self::Internal(_) => 3,
        }
    }
}
