//! Experiment runner behind the `swarmcluster` binary: seeded grids,
//! results and trace files, summaries, convergence plots and Friedman
//! statistics.

pub mod cli;
pub mod config;
pub mod error;
pub mod fetch;
pub mod plot;
pub mod records;
pub mod runner;
pub mod seed;
pub mod stats;
pub mod summary;

pub use config::{ExperimentConfig, ResolvedConfig};
pub use error::{BenchError, Result};
pub use records::RunRecord;
pub use runner::{execute, run_grid, GridOutcome, Prepared, RunSettings};
pub use seed::derive_seed;
