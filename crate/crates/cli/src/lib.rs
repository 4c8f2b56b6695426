//! File formats, configuration, the rejection oracle, statistical
//! diagnostics and the run drivers behind the `tropihar` binary.

pub mod config;
pub mod diagnostics;
mod error;
pub mod formats;
pub mod oracle;
pub mod run;

pub use error::{CliError, Result};
