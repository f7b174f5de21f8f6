//! Library side of the `qes` command-line tool: report types, golden tables,
//! and the subcommand implementations. `main.rs` only parses flags.

pub mod commands;
pub mod format;
pub mod golden;
pub mod verify;

use thiserror::Error;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit code for success, including empty results.
pub const EXIT_OK: i32 = 0;
/// Exit code for verification or golden-table failures.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for usage errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failure(String),
    #[error(transparent)]
    Core(#[from] spiked_qes::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(
                spiked_qes::Error::InvalidGrid(_)
                | spiked_qes::Error::InvalidRequest(_)
                | spiked_qes::Error::IndexOutOfRange { .. },
            ) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }
}
