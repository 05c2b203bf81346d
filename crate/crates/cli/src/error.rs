//! Errors of the command-line front end.

use std::path::PathBuf;

/// Failure of a CLI operation.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{context}: unsupported schema_version {found} (expected 1)")]
    Schema { context: String, found: u32 },
    #[error("{context}: {source}")]
    Instance {
        context: String,
        #[source]
        source: minball::Error,
    },
    #[error("invalid setting: {0}")]
    Setting(String),
    #[error("invalid generator settings: {0}")]
    Generator(String),
    #[error("gave up after {rejects} rejected draws: radius_max forces containment")]
    TooManyRejects { rejects: usize },
    #[error("invalid bench cell `{0}` (expected N:M:SEEDS)")]
    Cell(String),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("output: {0}")]
    Output(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Serialize(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
