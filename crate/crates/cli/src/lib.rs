//! Batch runner for the boundary-invariant and counterexample experiments.
//!
//! Every subcommand reads a [`RunConfig`], writes its files into the
//! configured output directory and returns an [`Outcome`].

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod selftest;

pub use commands::{build_domain, cmd_counterexample, cmd_region_slice, cmd_typemap, ManifestFile, Outcome};
pub use config::{Overrides, RunConfig, SliceSpec, Tolerances};
pub use error::CliError;
pub use selftest::{cmd_selftest, selftest_checks, Check};
