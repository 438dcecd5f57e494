//! Command-line laboratory, parallel runners and file formats on top of
//! `skewsim-core`.

pub mod cli;
pub mod error;
pub mod output;
pub mod paths;
pub mod report;
pub mod run_config;
pub mod runner;
pub mod validate;

pub use error::{exit, CliError, CliResult};
