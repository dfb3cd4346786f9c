//! Spec parsing, subcommand execution and report output for the
//! `cocompact` binary.

pub mod config;
pub mod report;
pub mod run;

pub use config::{parse_spec, Overrides, RunConfig};
pub use report::{Format, Report, Table};
pub use run::{run, Command};
