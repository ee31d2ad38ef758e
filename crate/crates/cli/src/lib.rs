//! Library surface of the batch CLI, exposed for integration tests.

pub mod args;
pub mod commands;
pub mod dataset;
pub mod error;
pub mod manifest;
pub mod output;

pub use error::{CliError, Result};
