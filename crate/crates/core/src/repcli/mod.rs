//! Representation files, reports and the command surface.

pub mod commands;
pub mod expr;
pub mod repfile;

pub use commands::{exit_code, run, run_text, Command, Report};
pub use repfile::{parse, RepFile, Representation};
