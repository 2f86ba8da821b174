//! Problem-file driven front end for `artin-approx`.

pub mod check;
pub mod commands;
pub mod problem;
pub mod report;

pub use commands::{run, Command, Overrides};
pub use problem::ProblemFile;
pub use report::{exit_code, RunReport, Status};
