//! Independent runs over one parameter axis, executed in parallel.

use std::fmt;
use std::str::FromStr;

use backstep_core::trace::fmt_f64;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::experiment::{run_experiment, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Amplitude,
    Points,
    DtBase,
    Sigma,
    NMax,
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "A" => Axis::Amplitude,
            "N" => Axis::Points,
            "dt_base" => Axis::DtBase,
            "sigma" => Axis::Sigma,
            "n_max" => Axis::NMax,
            _ => return Err(CliError::UnknownAxis(s.to_string())),
        })
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Amplitude => "A",
            Axis::Points => "N",
            Axis::DtBase => "dt_base",
            Axis::Sigma => "sigma",
            Axis::NMax => "n_max",
        })
    }
}

impl Axis {
    /// Applies `value`; integer axes reject fractional values.
    pub fn apply(self, cfg: &mut ExperimentConfig, value: f64) -> Result<()> {
        let count = |key: &str| -> Result<usize> {
            if value >= 0.0 && value.fract() == 0.0 && value <= u32::MAX as f64 {
                Ok(value as usize)
            } else {
                Err(CliError::Range {
                    key: key.to_string(),
                    value: value.to_string(),
                    allowed: "a non-negative integer",
                })
            }
        };
        match self {
            Axis::Amplitude => cfg.amplitude = value,
            Axis::Points => cfg.n_points = count("numerics.N")?,
            Axis::DtBase => cfg.dt_base = value,
            Axis::Sigma => cfg.sigma = value,
            Axis::NMax => cfg.n_max = count("experiment.n_max")?,
        }
        Ok(())
    }

    /// Axes along which rows are compared with the most refined run.
    pub fn is_refinement(self) -> bool {
        matches!(self, Axis::Points | Axis::DtBase)
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: std::result::Result<Outcome, String>,
    /// Max over segment end times of `|‖u‖₂ − ‖u_ref‖₂|`, with the most
    /// refined run as reference; only for `N` and `dt_base` sweeps.
    pub reference_error: Option<f64>,
}

pub const SUMMARY_HEADER: &str =
    "axis,value,status,decay_ratio,final_norm,iss_sup,fitted_gain,reference_error,message";

fn norms_at(outcome: &Outcome, times: &[f64]) -> Option<Vec<f64>> {
    times
        .iter()
        .map(|&t| {
            let k = outcome.trace.index_at_or_before(t + 1e-12)?;
            ((outcome.trace.times[k] - t).abs() < 1e-9).then(|| outcome.trace.l2_u[k])
        })
        .collect()
}

fn attach_reference_errors(axis: Axis, rows: &mut [SweepRow]) {
    let finest = rows
        .iter()
        .filter(|r| r.outcome.is_ok())
        .min_by(|a, b| {
            let key = |r: &SweepRow| {
                if axis == Axis::Points {
                    -r.value
                } else {
                    r.value
                }
            };
            key(a).total_cmp(&key(b))
        })
        .map(|r| r.value);
    let Some(finest) = finest else { return };
    let reference = rows
        .iter()
        .find(|r| r.value == finest)
        .and_then(|r| r.outcome.as_ref().ok())
        .cloned();
    let Some(reference) = reference else { return };
    let checkpoints: Vec<f64> = match &reference.schedule {
        Some(s) => s.t[1..].to_vec(),
        None => vec![reference.trace.horizon],
    };
    let Some(ref_norms) = norms_at(&reference, &checkpoints) else {
        return;
    };
    for row in rows.iter_mut() {
        if let Ok(outcome) = &row.outcome {
            row.reference_error = norms_at(outcome, &checkpoints).map(|norms| {
                norms
                    .iter()
                    .zip(&ref_norms)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            });
        }
    }
}

/// One run per value; failures are kept in their row and the sweep goes on.
pub fn run_sweep(base: &ExperimentConfig, axis: Axis, values: &[f64]) -> Vec<SweepRow> {
    let mut rows: Vec<SweepRow> = values
        .par_iter()
        .map(|&value| {
            let mut cfg = base.clone();
            let outcome = axis
                .apply(&mut cfg, value)
                .and_then(|_| run_experiment(&cfg))
                .map_err(|e| e.to_string());
            SweepRow {
                value,
                outcome,
                reference_error: None,
            }
        })
        .collect();
    if axis.is_refinement() {
        attach_reference_errors(axis, &mut rows);
    }
    rows
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn summary_csv(axis: Axis, rows: &[SweepRow]) -> String {
    let mut out = format!("{SUMMARY_HEADER}\n");
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    for row in rows {
        let fields = match &row.outcome {
            Ok(o) => [
                "ok".to_string(),
                opt(o.fts.map(|r| r.decay_ratio)),
                fmt_f64(*o.trace.l2_u.last().expect("non-empty trace")),
                opt(o.iss.map(|r| r.sup_norm_window)),
                opt(o.iss.map(|r| r.fitted_gain)),
                opt(row.reference_error),
                String::new(),
            ],
            Err(msg) => [
                "error".to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                csv_field(msg),
            ],
        };
        out.push_str(&format!(
            "{axis},{},{}\n",
            fmt_f64(row.value),
            fields.join(",")
        ));
    }
    out
}
