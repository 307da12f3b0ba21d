//! Command-line front end for `frametensor`.

pub mod commands;
pub mod format;
pub mod verify;

pub use commands::{run, Cli, CliError, Outcome};
