//! File formats, output writers and the parallel runner behind the
//! `leakmeter` command line tool. The numerics live in `leakmeter-core`.

pub mod commands;
pub mod config;
mod error;
pub mod model;
pub mod output;
pub mod run;

pub use error::CliError;
