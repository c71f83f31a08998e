//! Scenario runner for `rindler-lab`: parses flat config files, runs one
//! experiment per invocation (optionally swept over one parameter) and
//! writes reproducible CSV.

pub mod config;
pub mod scenario;
pub mod selfcheck;

use thiserror::Error;

pub use config::ScenarioConfig;
pub use scenario::{run_scenario, Experiment, Report};
pub use selfcheck::{run_selfcheck, CheckOutcome, SelfcheckOptions};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for configuration and I/O problems, 3 for numeric or solver
    /// failures, 4 for failed invariants.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

impl From<rindler_lab_core::Error> for CliError {
    fn from(e: rindler_lab_core::Error) -> Self {
        if e.is_configuration() {
            CliError::Config(e.to_string())
        } else {
            CliError::Numeric(e.to_string())
        }
    }
}
