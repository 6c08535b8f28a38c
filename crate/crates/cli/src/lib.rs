//! File formats, reports and subcommands of the `orbital-ac` tool.

pub mod commands;
pub mod records;
pub mod report;
pub mod sweep;
pub mod tuple_spec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INELIGIBLE: i32 = 3;
pub const EXIT_DISAGREEMENT: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] orbital_ac_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use orbital_ac_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => EXIT_USAGE,
            CliError::Io(_) => EXIT_FAILURE,
            CliError::Core(E::SpectralSeparation | E::EigenSolve) => EXIT_FAILURE,
            CliError::Core(_) => EXIT_USAGE,
        }
    }
}
