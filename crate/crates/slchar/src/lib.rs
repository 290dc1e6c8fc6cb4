//! Command-line front end for `slchar-core`: JSON/CSV output, seeded
//! sampling of verification points, and the subcommand implementations.

pub mod cli;
pub mod commands;
pub mod format;
pub mod sampling;

pub use commands::Outcome;

/// Failures that stop a run before any check is evaluated.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] slchar_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Exit code: 2 for bad input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(slchar_core::Error::InvalidParameter(_)) => 2,
            CliError::Core(slchar_core::Error::OutsideDomain(_)) => 2,
            _ => 1,
        }
    }
}
