//! Pipeline behind the `influence` binary: configuration, per-command
//! artifacts and the manifest header they carry.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;

pub use commands::{run, synth, Command};
pub use config::RunConfig;
pub use error::{exit, CliError};
pub use manifest::Manifest;
