use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config error in {key}: {msg}")]
    Config { key: String, msg: String },
    #[error("cannot read config {path}: {source}")]
    ConfigRead {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Compute(#[from] adspec_core::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl PipelineError {
    /// Process exit status: 1 for configuration problems, 2 for failures
    /// while computing or writing results.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } | Self::ConfigRead { .. } => 1,
            Self::Compute(_) | Self::Io { .. } => 2,
        }
    }
}
