//! Configuration, verification suites and report emission for the `teich`
//! command-line tool.

pub mod config;
pub mod report;
pub mod suites;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("computation error: {0}")]
    Math(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// 2 for configuration and usage problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Math(_) => 1,
        }
    }
}

pub const DEFAULT_SEED: u64 = 0x7e1c_4a11;

pub use config::{OutputFormat, RunConfig};
pub use report::{CheckRecord, Report};
pub use suites::{run_all, run_suite, Suite};
