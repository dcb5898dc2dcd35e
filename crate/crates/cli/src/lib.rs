//! Library half of the `rebalance` binary: argument surface, config
//! merging, file formats, and the subcommand implementations. Split out so
//! integration tests can exercise parsing and formats directly.

pub mod args;
pub mod commands;
pub mod config;
pub mod data_io;
pub mod error;
pub mod matrix_io;
pub mod model_io;
pub mod plot;
pub mod ranges;
