//! Command-line front end: configuration, artifact writers and readers, and
//! the three subcommands.

pub mod artifacts;
pub mod commands;
pub mod config;
pub mod error;
pub mod synthetic;

pub use error::CliError;
