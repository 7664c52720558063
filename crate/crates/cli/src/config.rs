//! Experiment files: TOML-style `key = value` lines grouped in sections.
//!
//! ```text
//! [experiment]
//! case = "I"        # "I", "II" or "open_loop"
//! p = 1.9           # case I
//! t0 = 1.5          # case II
//! t_end = 3.0       # open_loop
//! lambda0 = 3.5
//! sigma = 1.0
//! n_max = 2
//! gamma0 = 1.0
//!
//! [plant]
//! a = 1.0
//! c = 24.0
//!
//! [numerics]
//! N = 201
//! dt_base = 1e-4
//! stride = 10
//!
//! [disturbance]
//! amplitude = 0.0   # d1(t) = amplitude sin(omega t)
//! omega = 30.0
//!
//! [initial]
//! scale = 1.0       # u0(x) = -4 scale sin(15(x - 1/2))
//!
//! [output]
//! dir = "out"
//! snapshot_times = [0.0, 0.5]
//! ```

use std::path::{Path, PathBuf};

use backstep_core::{Coefficients, Grid, Schedule};
use toml::{Table, Value};

use crate::error::{CliError, Result};

pub const DEFAULT_N: usize = 201;
pub const DEFAULT_DT_BASE: f64 = 1e-4;
pub const DEFAULT_GAMMA0: f64 = 1.0;
pub const DEFAULT_STRIDE: usize = 10;
pub const MAX_N_MAX: usize = 12;
const MAX_POINTS: usize = 100_001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CaseSpec {
    /// Case I: horizon `ζ(p)`.
    ZetaHorizon { p: f64 },
    /// Case II: prescribed horizon.
    Prescribed { horizon: f64 },
    /// No feedback, run until `t_end`.
    OpenLoop { t_end: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub case: CaseSpec,
    pub lambda0: f64,
    pub sigma: f64,
    pub n_max: usize,
    pub gamma0: f64,
    pub a: f64,
    pub c: f64,
    pub n_points: usize,
    pub dt_base: f64,
    pub stride: usize,
    pub amplitude: f64,
    pub omega: f64,
    pub scale: f64,
    pub out_dir: Option<PathBuf>,
    pub snapshot_times: Vec<f64>,
}

impl ExperimentConfig {
    /// Defaults of the reference setup for a given case.
    pub fn with_case(case: CaseSpec) -> Self {
        Self {
            case,
            lambda0: 3.5,
            sigma: 1.0,
            n_max: 2,
            gamma0: DEFAULT_GAMMA0,
            a: 1.0,
            c: 24.0,
            n_points: DEFAULT_N,
            dt_base: DEFAULT_DT_BASE,
            stride: DEFAULT_STRIDE,
            amplitude: 0.0,
            omega: 30.0,
            scale: 1.0,
            out_dir: None,
            snapshot_times: Vec::new(),
        }
    }

    pub fn schedule(&self) -> Result<Option<Schedule>> {
        Ok(match self.case {
            CaseSpec::ZetaHorizon { p } => Some(Schedule::case1(p, self.lambda0, self.n_max)?),
            CaseSpec::Prescribed { horizon } => {
                Some(Schedule::case2(horizon, self.lambda0, self.n_max)?)
            }
            CaseSpec::OpenLoop { .. } => None,
        })
    }

    pub fn coefficients(&self) -> Result<Coefficients> {
        Ok(Coefficients::new(self.a, self.c)?)
    }

    pub fn grid(&self) -> Result<Grid> {
        Ok(Grid::uniform(self.n_points)?)
    }

    /// Range checks, then the schedule and kernel preconditions.
    pub fn validate(&self) -> Result<()> {
        match self.case {
            CaseSpec::ZetaHorizon { p } => finite("experiment.p", p)?,
            CaseSpec::Prescribed { horizon } => positive("experiment.t0", horizon)?,
            CaseSpec::OpenLoop { t_end } => positive("experiment.t_end", t_end)?,
        }
        positive("experiment.lambda0", self.lambda0)?;
        positive("experiment.sigma", self.sigma)?;
        positive("experiment.gamma0", self.gamma0)?;
        if !(1..=MAX_N_MAX).contains(&self.n_max) {
            return Err(range("experiment.n_max", self.n_max, "1 ..= 12"));
        }
        positive("plant.a", self.a)?;
        finite("plant.c", self.c)?;
        if !(5..=MAX_POINTS).contains(&self.n_points) {
            return Err(range("numerics.N", self.n_points, "5 ..= 100001"));
        }
        if !(self.dt_base > 0.0 && self.dt_base <= 0.1) {
            return Err(range("numerics.dt_base", self.dt_base, "(0, 0.1]"));
        }
        if self.stride == 0 {
            return Err(range("numerics.stride", self.stride, ">= 1"));
        }
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return Err(range("disturbance.amplitude", self.amplitude, ">= 0"));
        }
        finite("disturbance.omega", self.omega)?;
        positive("initial.scale", self.scale)?;
        for &t in &self.snapshot_times {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(range("output.snapshot_times", t, "finite times >= 0"));
            }
        }
        self.coefficients()?;
        if let Some(s) = self.schedule()? {
            // surfaces λ + c ≤ 0 before any run starts
            backstep_core::KernelParams::new(s.lambda[0], self.a, self.c)?;
            backstep_core::KernelParams::new(self.sigma, self.a, self.c)?;
        }
        Ok(())
    }
}

fn range(key: &str, value: impl ToString, allowed: &'static str) -> CliError {
    CliError::Range {
        key: key.to_string(),
        value: value.to_string(),
        allowed,
    }
}

fn finite(key: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(range(key, v, "finite"))
    }
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(range(key, v, "> 0"))
    }
}

const SECTIONS: &[(&str, &[&str])] = &[
    (
        "experiment",
        &[
            "case", "p", "t0", "t_end", "lambda0", "sigma", "n_max", "gamma0",
        ],
    ),
    ("plant", &["a", "c"]),
    ("numerics", &["N", "dt_base", "stride"]),
    ("disturbance", &["amplitude", "omega"]),
    ("initial", &["scale"]),
    ("output", &["dir", "snapshot_times"]),
];

struct Doc {
    table: Table,
}

impl Doc {
    fn get(&self, section: &str, key: &str) -> Option<&Value> {
        self.table.get(section).and_then(|s| s.get(key))
    }

    fn float(&self, section: &str, key: &str) -> Result<Option<f64>> {
        match self.get(section, key) {
            None => Ok(None),
            Some(Value::Float(v)) => Ok(Some(*v)),
            Some(Value::Integer(v)) => Ok(Some(*v as f64)),
            Some(other) => Err(CliError::Parse(format!(
                "`{section}.{key}` must be a number, got {other}"
            ))),
        }
    }

    fn required_float(&self, section: &str, key: &str) -> Result<f64> {
        self.float(section, key)?
            .ok_or_else(|| CliError::MissingKey(format!("{section}.{key}")))
    }

    fn count(&self, section: &str, key: &str, allowed: &'static str) -> Result<Option<usize>> {
        match self.get(section, key) {
            None => Ok(None),
            Some(Value::Integer(v)) => usize::try_from(*v)
                .map(Some)
                .map_err(|_| range(&format!("{section}.{key}"), v, allowed)),
            Some(other) => Err(CliError::Parse(format!(
                "`{section}.{key}` must be an integer, got {other}"
            ))),
        }
    }

    fn string(&self, section: &str, key: &str) -> Result<Option<&str>> {
        match self.get(section, key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(other) => Err(CliError::Parse(format!(
                "`{section}.{key}` must be a string, got {other}"
            ))),
        }
    }
}

/// Parses and validates an experiment document.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| CliError::Parse(e.to_string()))?;
    for (section, body) in &table {
        let keys = SECTIONS
            .iter()
            .find(|(name, _)| name == section)
            .map(|(_, keys)| *keys)
            .ok_or_else(|| CliError::UnknownKey(section.clone()))?;
        let body = body
            .as_table()
            .ok_or_else(|| CliError::Parse(format!("`{section}` must be a section")))?;
        if let Some(key) = body.keys().find(|k| !keys.contains(&k.as_str())) {
            return Err(CliError::UnknownKey(format!("{section}.{key}")));
        }
    }
    let doc = Doc { table };

    let case = match doc.string("experiment", "case")? {
        Some("I") => CaseSpec::ZetaHorizon {
            p: doc.required_float("experiment", "p")?,
        },
        Some("II") => CaseSpec::Prescribed {
            horizon: doc.required_float("experiment", "t0")?,
        },
        Some("open_loop") => CaseSpec::OpenLoop {
            t_end: doc.float("experiment", "t_end")?.unwrap_or(3.0),
        },
        Some(other) => {
            return Err(range(
                "experiment.case",
                other,
                "\"I\", \"II\" or \"open_loop\"",
            ))
        }
        None => return Err(CliError::MissingKey("experiment.case".into())),
    };
    let mut cfg = ExperimentConfig::with_case(case);
    let set = |slot: &mut f64, section: &str, key: &str| -> Result<()> {
        if let Some(v) = doc.float(section, key)? {
            *slot = v;
        }
        Ok(())
    };
    set(&mut cfg.lambda0, "experiment", "lambda0")?;
    set(&mut cfg.sigma, "experiment", "sigma")?;
    set(&mut cfg.gamma0, "experiment", "gamma0")?;
    set(&mut cfg.a, "plant", "a")?;
    set(&mut cfg.c, "plant", "c")?;
    set(&mut cfg.dt_base, "numerics", "dt_base")?;
    set(&mut cfg.amplitude, "disturbance", "amplitude")?;
    set(&mut cfg.omega, "disturbance", "omega")?;
    set(&mut cfg.scale, "initial", "scale")?;
    if let Some(n) = doc.count("experiment", "n_max", "1 ..= 12")? {
        cfg.n_max = n;
    }
    if let Some(n) = doc.count("numerics", "N", "5 ..= 100001")? {
        cfg.n_points = n;
    }
    if let Some(n) = doc.count("numerics", "stride", ">= 1")? {
        cfg.stride = n;
    }
    if let Some(dir) = doc.string("output", "dir")? {
        cfg.out_dir = Some(PathBuf::from(dir));
    }
    if let Some(v) = doc.get("output", "snapshot_times") {
        let items = v
            .as_array()
            .ok_or_else(|| CliError::Parse("`output.snapshot_times` must be an array".into()))?;
        cfg.snapshot_times = items
            .iter()
            .map(|x| match x {
                Value::Float(f) => Ok(*f),
                Value::Integer(i) => Ok(*i as f64),
                other => Err(CliError::Parse(format!(
                    "snapshot time {other} is not a number"
                ))),
            })
            .collect::<Result<_>>()?;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config_str(&text)
}
