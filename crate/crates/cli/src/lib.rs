//! The `fibertap` command line: argument definitions and command bodies,
//! kept in a library so they can be driven in-process.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod error;
pub mod manifest;

pub use args::Cli;
pub use commands::run;
pub use error::{CliError, ExitStatus};
pub use manifest::RunManifest;
