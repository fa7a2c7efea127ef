use std::path::PathBuf;

use thiserror::Error;

use crate::adapters::AdapterError;
use crate::config::ConfigError;
use crate::corpus::{CorpusError, SplitError};
use crate::dict::DictError;
use crate::metrics::MetricsError;
use crate::store::StoreError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A record in a line-delimited file failed to decode.
    #[error("{}:{line}: {message}", path.display())]
    Schema {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Dict(#[from] DictError),

    #[error(transparent)]
    Store(#[from] StoreError),

    #[error(transparent)]
    Corpus(#[from] CorpusError),

    #[error(transparent)]
    Split(#[from] SplitError),

    #[error(transparent)]
    Adapter(#[from] AdapterError),

    #[error(transparent)]
    Metrics(#[from] MetricsError),

    #[error(transparent)]
    Config(#[from] ConfigError),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True when the failure is a missing input file.
    pub fn is_not_found(&self) -> bool {
        match self {
            Error::Io { source, .. } => source.kind() == std::io::ErrorKind::NotFound,
            Error::Store(StoreError::Io { source, .. }) => {
                source.kind() == std::io::ErrorKind::NotFound
            }
            _ => false,
        }
    }
}
