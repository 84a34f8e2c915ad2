//! Command line front end: CSV ingestion, kernel spec files, JSON reports.

pub mod commands;
pub mod input;
pub mod report;
pub mod spec_file;

use std::fmt;

use pdi_core::PdiError;

pub use commands::{run_gen, run_test, run_verify, GenConfig, RunConfig, VerifyConfig, VerifyOutcome};
pub use input::{load_csv, ColumnBlocks};
pub use spec_file::{load_kernel, parse_kernel_spec};

/// Failure classes with stable process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Capacity,
    Data,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Usage => 1,
            Self::Capacity => 2,
            Self::Data => 3,
        }
    }
}

/// Exit code of `pdi verify` when some check exceeds its tolerance.
pub const EXIT_VERIFY_FAILED: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Usage, message: message.into() }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Data, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self.kind {
            ErrorKind::Usage => "usage error",
            ErrorKind::Capacity => "capacity error",
            ErrorKind::Data => "data error",
        };
        write!(f, "{label}: {}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<PdiError> for CliError {
    fn from(e: PdiError) -> Self {
        let kind = match e {
            PdiError::Capacity(_) => ErrorKind::Capacity,
            PdiError::Data(_) => ErrorKind::Data,
            _ => ErrorKind::Usage,
        };
        Self { kind, message: e.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Size the global worker pool from `PDI_THREADS` (unset or `0`: all cores).
pub fn configure_threads() -> CliResult<()> {
    let threads = match std::env::var("PDI_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::usage(format!("PDI_THREADS must be a nonnegative integer, got '{v}'")))?,
        _ => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::usage(format!("cannot configure worker threads: {e}")))
}
