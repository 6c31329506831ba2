//! Structure files, reports and the `vakit` command line.

pub mod app;
pub mod format;

pub use app::{run, Cli, Envelope};
pub use format::{parse, serialize, ParseError, Structure};
