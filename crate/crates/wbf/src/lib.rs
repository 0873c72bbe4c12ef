//! File formats, parallel trial execution and subcommands for the `wbf`
//! binary, on top of `wbf-core`.

pub mod commands;
pub mod edgelist;
pub mod error;
pub mod formats;
pub mod parallel;

pub use commands::{Format, Output, DEFAULT_SEED};
pub use error::{exit, CliError};
pub use parallel::Runner;
