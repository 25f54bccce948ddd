//! Experiment harness for the accelerated Kaczmarz solvers: gallery problems, run
//! configuration files, CSV/JSON export and transform comparisons.

// `!(a <= b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiment;
pub mod suite;

pub use config::{ExperimentConfig, OutputFormat, RunMode};
pub use experiment::{exit_code, run_experiment, ExperimentResult, SpectralSummary, Summary};
pub use suite::{compare_suite, merge};
