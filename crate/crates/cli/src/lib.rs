//! Scenario files and command implementations behind the `vpp-ffr` binary.

pub mod commands;
pub mod error;
pub mod output;
pub mod scenario;

pub use commands::{cmd_allocate, cmd_pareto, cmd_region, cmd_requirements, cmd_simulate, Which};
pub use error::{CliError, ErrorKind};
pub use output::Format;
pub use scenario::Scenario;
