//! JSON configs, run reports and the commands behind the `cosolve` binary.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{example_linf, solve, verify, CommandError, Overrides};
pub use config::{ConfigError, ProblemConfig};
pub use report::{RunReport, Status};

/// Exit code for unreadable or invalid input.
pub const EXIT_INPUT_ERROR: i32 = 1;
