//! File formats, pole caching, parallel grid evaluation and the `rodwave`
//! command-line tool on top of `rodwave-core`.

pub mod cache;
pub mod check;
pub mod config;
pub mod grid;
pub mod output;

pub use config::RunConfig;

use thiserror::Error;

/// Failures of a run, split by the exit code they map to.
#[derive(Debug, Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] rodwave_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Io(_) => 1,
            RunError::Numerical(_) => 2,
        }
    }
}

pub type RunResult<T> = std::result::Result<T, RunError>;
