//! Command-line front end for the tube eigenvalue bounds: configuration,
//! report documents, output formats and the `verify` suite.

pub mod checks;
pub mod config;
pub mod emit;
pub mod error;
pub mod report;
pub mod verify;

pub use config::{CommandKind, OutputFormat, PartialConfig, RunConfig};
pub use emit::emit;
pub use error::CliError;
pub use report::{run, Outcome, ReportDocument};
