//! Scenario configuration, figure presets and CSV output for the `spinheat` binary.

pub mod config_io;
pub mod error;
pub mod presets;
pub mod scenario;
pub mod table;

pub use config_io::{load_config, parse_config, write_config};
pub use error::{CliError, Result};
pub use scenario::{run, Command, Options, Report, Scenario};
