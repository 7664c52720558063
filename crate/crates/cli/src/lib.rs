//! Experiment runner for the fixed-time backstepping controller: config
//! files, the reference presets, parameter sweeps, and CSV/plot output.

pub mod config;
pub mod error;
pub mod experiment;
pub mod plot;
pub mod preset;
pub mod sweep;

pub use config::{parse_config, parse_config_str, CaseSpec, ExperimentConfig};
pub use error::{CliError, Result};
pub use experiment::{run_experiment, write_artifacts, Outcome};
pub use preset::{preset_config, run_preset, PRESETS};
pub use sweep::{run_sweep, summary_csv, Axis, SweepRow};
