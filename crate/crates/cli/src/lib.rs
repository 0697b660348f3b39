//! Command line front end for `selfless-core`.
//!
//! Every command produces a [`report::Report`]: a deterministic JSON body with
//! its SHA-256, or a CSV table. Errors map to exit codes through
//! [`error::CliError::exit_code`].

pub mod args;
pub mod cache;
pub mod config;
pub mod dto;
pub mod error;
pub mod report;
pub mod run;

pub use args::{Cli, Command, Format};
pub use cache::{CacheStats, DiskCache};
pub use config::RunConfig;
pub use error::{CliError, CliResult};
pub use report::{Report, Table};
pub use run::{parse_element, run_command, Outcome};
