//! Configuration-driven experiment runner for the adder library.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use cli::{run, Cli, Command};
pub use commands::ComparisonRow;
pub use config::{ExperimentConfig, Format, PRESETS};
pub use error::{CliError, Result};
