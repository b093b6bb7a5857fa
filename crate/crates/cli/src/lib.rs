//! Command-line front end for the `qcrit` pipeline.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;

pub use cli::run;
pub use config::{Format, Overrides, RunConfig};
pub use error::{CliError, CliResult};
