//! Configuration loading, run orchestration and artifact serialization.

pub mod config;
pub mod output;
mod run;

pub use config::{load_config, parse_config, ConfigError, ConfigFile, OutputFormat, RunConfig};
pub use output::{Cell, Table};
pub use run::{run, Command, RunOptions, RunReport};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("computation error: {0}")]
    Compute(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl RunError {
    /// Process exit code: 1 config, 2 computation, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 1,
            RunError::Compute(_) => 2,
            RunError::Io(_) => 3,
        }
    }
}

impl From<crate::Error> for RunError {
    fn from(e: crate::Error) -> Self {
        RunError::Compute(e.to_string())
    }
}
