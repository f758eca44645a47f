//! Command-line front end: Matrix Market I/O, JSON or text reports, and a
//! fixed exit-code contract.

pub mod config;
pub mod mm;
pub mod run;

pub use config::{Args, Command, ReportFormat, RunConfig};
pub use run::{execute, run, Outcome};

use targetkit::TargetError;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
/// Infeasible, with a certificate in the report.
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_INVALID_INPUT: i32 = 3;
pub const EXIT_NUMERIC_FAILURE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] TargetError),
}
