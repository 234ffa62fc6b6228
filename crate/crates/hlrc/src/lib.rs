//! File formats and command-line front end for `hlrc-core`.

pub mod cli;
pub mod error;
pub mod formats;

pub use error::{exit, CliError};
