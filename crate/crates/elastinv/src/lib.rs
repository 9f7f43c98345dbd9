//! File formats, run manifests and command implementations for the
//! `elastinv` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod manifest;
pub mod selftest;

pub use config::{Overrides, RunConfig};
pub use error::CliError;
pub use manifest::RunManifest;
