//! Scenario-driven verification runner: loads a scenario, runs the selected
//! stages against the `cliffwave` library, and emits a [`RunReport`].

pub mod report;
pub mod scenario;
pub mod selftest;
pub mod stages;

use thiserror::Error;

pub use report::{CheckRecord, CheckStatus, RunReport};
pub use scenario::Scenario;
pub use stages::run_scenario;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Library(#[from] cliffwave::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => EXIT_CONFIG,
            CliError::Library(_) => EXIT_ASSERTION,
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
