//! Input parsing, fan documents and mode dispatch for the `locfan` binary.

pub mod document;
pub mod parse;
pub mod run;

pub use document::FanDocument;
pub use parse::{parse_problem, Mode, ProblemInput};
pub use run::{check_document, run, Output, RunError, RunOptions};
