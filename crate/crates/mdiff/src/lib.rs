//! Command-line driver for `mdiff-core`: configuration, parallel grid
//! evaluation, CSV/PGM/summary output and the oracle self-check.

pub mod commands;
pub mod config;
pub mod grid;
pub mod output;
pub mod selfcheck;

use std::path::PathBuf;

pub use commands::{run, Outcome};
pub use config::{Command, Grid, HeatmapScale, Normalization, Outputs, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] mdiff_core::Error),

    #[error("selfcheck: {0} check(s) failed")]
    SelfcheckFailed(usize),
}

impl CliError {
    /// 1 selfcheck failure, 2 I/O or configuration, 3 physics.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::SelfcheckFailed(_) => 1,
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Core(mdiff_core::Error::Domain { .. }) => 2,
            CliError::Core(_) => 3,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
