//! Library side of the `optoqfi` command: configuration, sweeps, the QFI
//! table, oracle checks and mechanics dumps.

pub mod checks;
pub mod config;
pub mod dump;
pub mod sweep;
pub mod table1;

use thiserror::Error;

/// Errors with their process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("acceptance deviation: {0}")]
    Deviation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Deviation(_) => 4,
        }
    }
}

impl From<optoqfi::Error> for CliError {
    fn from(e: optoqfi::Error) -> Self {
        use optoqfi::Error as E;
        match e {
            E::InvalidParameter(_) | E::UnsupportedClosedForm(_) | E::Misuse(_) => {
                CliError::Validation(e.to_string())
            }
            E::Io(m) => CliError::Io(m),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

/// Environment variable that overrides the worker-thread count.
pub const THREADS_ENV: &str = "OPTOQFI_THREADS";

pub fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation(format!("{THREADS_ENV} must be a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Validation(e.to_string()))
}
