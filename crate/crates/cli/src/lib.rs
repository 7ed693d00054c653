//! Config-driven pipeline behind the `adspec` binary.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;

use std::path::{Path, PathBuf};

pub use config::{Command, RunConfig, TGrid, WindowSpec};
pub use error::PipelineError;
pub use pipeline::{execute, run};

/// Values given on the command line; they beat the file and the environment.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
}

/// Defaults, then the file at `path`, then `ADSPEC_*` entries of `env`, then
/// `overrides`.
pub fn load_config<I>(
    command: Command,
    path: &Path,
    env: I,
    overrides: &Overrides,
) -> Result<RunConfig, PipelineError>
where
    I: IntoIterator<Item = (String, String)>,
{
    let text = std::fs::read_to_string(path).map_err(|source| PipelineError::ConfigRead {
        path: path.to_path_buf(),
        source,
    })?;
    let mut config = RunConfig::parse(command, &text)?;
    config.apply_env(env)?;
    if let Some(out) = &overrides.out {
        config.out = out.clone();
    }
    if let Some(jobs) = overrides.jobs {
        config.jobs = jobs;
    }
    if let Some(seed) = overrides.seed {
        config.seed = seed;
    }
    config.validate()?;
    Ok(config)
}
