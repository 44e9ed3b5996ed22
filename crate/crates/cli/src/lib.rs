//! Command-line front end: graph files, certificates and the density table.

pub mod app;
pub mod format;
pub mod table;

pub use app::{run, Cli, CliError};
