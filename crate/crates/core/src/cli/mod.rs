//! Config parsing, grid orchestration and CSV output behind the
//! `floquet-engine` binary.
//!
//! Exit codes: 0 success, 2 config or I/O error, 3 numerical failure (some
//! rows carry `status = failed`), 4 failed validation.

mod config;
mod run;
mod validate;

pub use config::{parse_config, Axis, BathKind, ConfigError, Param, PointParams, Spacing, Subcommand, SweepSpec};
pub use run::{
    compute, fmt_num, run_sweep, thermo_row, RunSummary, Table, FAILED, NONMARKOV_COLUMNS, NOENGINE_COLUMNS,
    NOT_APPLICABLE, OK, OTTO_COLUMNS, THERMO_COLUMNS, WEAK_COLUMNS,
};
pub use validate::{symmetry_checks, truncation_check, validate, Check};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) | CliError::Csv(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}
