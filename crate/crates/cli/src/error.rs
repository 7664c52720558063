use std::io;
use std::path::PathBuf;

use backstep_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("config: {0}")]
    Parse(String),
    #[error("config: unknown key `{0}`")]
    UnknownKey(String),
    #[error("config: missing required key `{0}`")]
    MissingKey(String),
    #[error("config: `{key}` = {value} is out of range (allowed: {allowed})")]
    Range {
        key: String,
        value: String,
        allowed: &'static str,
    },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("unknown sweep axis `{0}` (expected A, N, dt_base, sigma or n_max)")]
    UnknownAxis(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for bad input, 3 for numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Core(CoreError::Solver(_)) | CliError::Core(CoreError::NonFinite { .. }) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
