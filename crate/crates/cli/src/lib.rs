//! File formats and subcommands of the `qgame-cli` tool.

pub mod canonical;
pub mod commands;
pub mod format;
pub mod fuzz_checks;

pub use commands::{exit, run, Cli, CliError};
