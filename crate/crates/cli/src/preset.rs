//! The reference experiments: `c = 24`, `a = 1`, `λ0 = 3.5`, `σ = 1`,
//! `u0 = −4 s sin(15(x − 1/2))`, `d1 = A sin(30 t)`, three segments.

use std::path::Path;

use crate::config::{CaseSpec, ExperimentConfig};
use crate::error::{CliError, Result};
use crate::experiment::{run_experiment, write_artifacts, Outcome};

pub const PRESETS: [&str; 9] = [
    "open-loop",
    "fts-case1",
    "fts-case1-x10",
    "ftiss-case1-a1",
    "ftiss-case1-a2",
    "fts-case2",
    "fts-case2-x10",
    "ftiss-case2-a1",
    "ftiss-case2-a2",
];

pub const CASE1_P: f64 = 1.9;
pub const CASE2_HORIZON: f64 = 1.5;
/// Long enough for the unstable mode to dominate the open-loop norm.
pub const OPEN_LOOP_T_END: f64 = 3.0;

pub fn preset_config(name: &str) -> Result<ExperimentConfig> {
    let case1 = CaseSpec::ZetaHorizon { p: CASE1_P };
    let case2 = CaseSpec::Prescribed {
        horizon: CASE2_HORIZON,
    };
    let (case, amplitude, scale) = match name {
        "open-loop" => (
            CaseSpec::OpenLoop {
                t_end: OPEN_LOOP_T_END,
            },
            0.0,
            1.0,
        ),
        "fts-case1" => (case1, 0.0, 1.0),
        "fts-case1-x10" => (case1, 0.0, 10.0),
        "ftiss-case1-a1" => (case1, 1.0, 1.0),
        "ftiss-case1-a2" => (case1, 2.0, 1.0),
        "fts-case2" => (case2, 0.0, 1.0),
        "fts-case2-x10" => (case2, 0.0, 10.0),
        "ftiss-case2-a1" => (case2, 1.0, 1.0),
        "ftiss-case2-a2" => (case2, 2.0, 1.0),
        _ => return Err(CliError::UnknownPreset(name.to_string())),
    };
    let mut cfg = ExperimentConfig::with_case(case);
    cfg.amplitude = amplitude;
    cfg.scale = scale;
    Ok(cfg)
}

/// Runs a preset and writes its artifacts under `dir`.
pub fn run_preset(name: &str, dir: &Path) -> Result<Outcome> {
    let cfg = preset_config(name)?;
    let outcome = run_experiment(&cfg)?;
    write_artifacts(&outcome, dir)?;
    Ok(outcome)
}
