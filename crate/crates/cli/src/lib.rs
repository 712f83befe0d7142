//! Command-line front end: argument parsing, config resolution, the four
//! subcommands and the verification suite.

pub mod args;
pub mod commands;
pub mod config;
pub mod fixtures;
pub mod suite;

pub use commands::{run, Outcome};
pub use config::Failure;
