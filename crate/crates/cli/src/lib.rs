//! Experiment harness behind the `spinorq` binary: configuration, execution,
//! records and their JSON, CSV and SVG renderings.

pub mod batch;
pub mod config;
pub mod emit;
pub mod error;
pub mod record;
pub mod run;

pub use config::{ExperimentConfig, Kind};
pub use error::CliError;
pub use record::ExperimentRecord;
