//! Command-line driver for the flexbie solver: JSON run configurations,
//! scenario runners and CSV/JSON artifacts.

pub mod config;
pub mod error;
pub mod scenarios;

pub use config::{RunConfig, Scenario};
pub use error::CliError;
pub use scenarios::{run, Outcome};
