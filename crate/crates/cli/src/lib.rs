//! Workspace loading and command dispatch for the `morita` binary.

pub mod commands;
pub mod error;
pub mod workspace;

pub use commands::{run, run_on, Cli, Command, Format, MachineReport, Outcome};
pub use error::{CliError, CliResult};
pub use workspace::{parse_workspace, parse_workspace_str, Workspace};
