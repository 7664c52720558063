//! One configured run and the files it leaves behind.

use std::fmt::Write as _;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use backstep_core::analysis::{
    check_linf_bound, check_lyapunov_monotone, fts_metric, iss_metric, iss_window, proof_omega,
    FTS_EPS_FRACTION,
};
use backstep_core::controller::{closed_loop_simulate, simulate_target_w};
use backstep_core::pde::{simulate_open_loop, OpenLoopBoundary};
use backstep_core::schedule::ConvergenceReport;
use backstep_core::trace::{fmt_f64, write_snapshot_csv};
use backstep_core::{
    ControllerConfig, DisturbanceSpec, Field, FtsReport, Grid, IssReport, LinfBoundReport,
    LyapunovReport, RunOptions, Schedule, Trace,
};

use crate::config::{CaseSpec, ExperimentConfig};
use crate::error::{CliError, Result};
use crate::plot;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub config: ExperimentConfig,
    pub grid: Grid,
    pub schedule: Option<Schedule>,
    pub convergence: Option<ConvergenceReport>,
    pub trace: Trace,
    pub fts: Option<FtsReport>,
    pub iss: Option<IssReport>,
    pub linf: Option<LinfBoundReport>,
    pub lyapunov: Option<LyapunovReport>,
}

pub fn initial_datum(grid: &Grid, scale: f64) -> Result<Field> {
    Ok(Field::from_fn(grid, 0.0, |x| {
        -4.0 * scale * (15.0 * (x - 0.5)).sin()
    })?)
}

pub fn disturbance(cfg: &ExperimentConfig) -> DisturbanceSpec {
    if cfg.amplitude == 0.0 {
        DisturbanceSpec::zero()
    } else {
        DisturbanceSpec::boundary_sine(cfg.amplitude, cfg.omega)
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Outcome> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let co = cfg.coefficients()?;
    let u0 = initial_datum(&grid, cfg.scale)?;
    let dist = disturbance(cfg);

    let Some(schedule) = cfg.schedule()? else {
        let CaseSpec::OpenLoop { t_end } = cfg.case else {
            unreachable!()
        };
        let trace = simulate_open_loop(
            &grid,
            &co,
            &dist,
            &u0,
            t_end,
            cfg.dt_base,
            OpenLoopBoundary::default(),
            cfg.stride,
        )?;
        return Ok(Outcome {
            config: cfg.clone(),
            grid,
            schedule: None,
            convergence: None,
            trace,
            fts: None,
            iss: None,
            linf: None,
            lyapunov: None,
        });
    };

    let horizon = schedule.horizon;
    let convergence = schedule.check_rapid_convergence(cfg.gamma0);
    let ctrl = ControllerConfig::new(schedule.clone(), cfg.sigma, co, grid.clone())?;
    let opts = RunOptions {
        dt_base: cfg.dt_base,
        stride: cfg.stride,
        snapshot_times: cfg.snapshot_times.clone(),
        keep_profiles: false,
    };
    let trace = closed_loop_simulate(&ctrl, &dist, &u0, &opts)?;
    let fts = fts_metric(&trace, FTS_EPS_FRACTION * horizon)?;
    let iss = iss_metric(&trace, iss_window(horizon), trace.sups)?;

    let (linf, lyapunov) = if dist.is_zero() {
        (None, None)
    } else {
        let run = simulate_target_w(
            &ctrl,
            &dist,
            &RunOptions {
                snapshot_times: Vec::new(),
                ..opts
            },
        )?;
        let omega = proof_omega(&run, cfg.sigma);
        (
            Some(check_linf_bound(&run, cfg.sigma)),
            Some(check_lyapunov_monotone(&run, omega, &grid)?),
        )
    };

    Ok(Outcome {
        config: cfg.clone(),
        grid,
        schedule: Some(schedule),
        convergence: Some(convergence),
        trace,
        fts: Some(fts),
        iss: Some(iss),
        linf,
        lyapunov,
    })
}

pub const REPORT_CSV_HEADER: &str =
    "case,horizon,N,dt_base,amplitude,scale,initial_norm,final_norm,decay_ratio,iss_sup,fitted_gain,linf_max,linf_bound,lyapunov_max";

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

impl Outcome {
    pub fn case_label(&self) -> &'static str {
        match self.config.case {
            CaseSpec::ZetaHorizon { .. } => "I",
            CaseSpec::Prescribed { .. } => "II",
            CaseSpec::OpenLoop { .. } => "open_loop",
        }
    }

    pub fn report_csv_row(&self) -> String {
        let t = &self.trace;
        [
            self.case_label().to_string(),
            fmt_f64(t.horizon),
            self.config.n_points.to_string(),
            fmt_f64(self.config.dt_base),
            fmt_f64(self.config.amplitude),
            fmt_f64(self.config.scale),
            fmt_f64(t.l2_u[0]),
            fmt_f64(*t.l2_u.last().expect("non-empty trace")),
            opt(self.fts.map(|r| r.decay_ratio)),
            opt(self.iss.map(|r| r.sup_norm_window)),
            opt(self.iss.map(|r| r.fitted_gain)),
            opt(self.linf.map(|r| r.max_linf)),
            opt(self.linf.map(|r| r.bound)),
            opt(self.lyapunov.map(|r| r.max_functional)),
        ]
        .join(",")
    }

    pub fn report_text(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "case {}  N = {}  dt_base = {:e}",
            self.case_label(),
            c.n_points,
            c.dt_base
        );
        let _ = writeln!(
            out,
            "a = {}  c = {}  sigma = {}  lambda0 = {}",
            c.a, c.c, c.sigma, c.lambda0
        );
        let _ = writeln!(
            out,
            "d1(t) = {} sin({} t)  u0 scale = {}",
            c.amplitude, c.omega, c.scale
        );
        if let Some(s) = &self.schedule {
            let _ = writeln!(out, "\nschedule (T0 = {:.10})", s.horizon);
            let _ = writeln!(out, "  n  t_n           t_n+1         lambda_n");
            for n in 0..s.segment_count() {
                let (a, b) = s.segment_bounds(n);
                let _ = writeln!(out, "  {n}  {a:<12.6}  {b:<12.6}  {:.6}", s.lambda[n]);
            }
        }
        if let Some(r) = &self.convergence {
            let fmt_opt = |v: Option<usize>| v.map_or("none".to_string(), |n| n.to_string());
            let _ = writeln!(out, "\ngain growth (gamma0 = {})", r.gamma0);
            let _ = writeln!(
                out,
                "  r_n >= gamma0 first at n = {}, for all later n from {}",
                fmt_opt(r.first_satisfied),
                fmt_opt(r.satisfied_from)
            );
            let _ = writeln!(
                out,
                "  q_n increasing from n = {}: {}",
                r.q_increasing_from, r.q_increasing
            );
        }
        let t = &self.trace;
        let _ = writeln!(
            out,
            "\n||u(0)||_2 = {:.6e}  ||u(end)||_2 = {:.6e}",
            t.l2_u[0],
            t.l2_u.last().unwrap()
        );
        if let Some(r) = &self.fts {
            let _ = write!(out, "\n{r}");
        }
        if let Some(r) = &self.iss {
            let _ = write!(out, "\n{r}");
        }
        if let Some(r) = &self.linf {
            let _ = writeln!(out, "\ntarget w sup bound");
            let _ = writeln!(out, "  max ||w~||_inf  {:.6e}", r.max_linf);
            let _ = writeln!(out, "  bound          {:.6e}", r.bound);
            let _ = writeln!(out, "  pass           {}", r.pass);
        }
        if let Some(r) = &self.lyapunov {
            let _ = writeln!(out, "\ntruncated energy");
            let _ = writeln!(out, "  omega          {:.6e}", r.omega);
            let _ = writeln!(out, "  max            {:.6e}", r.max_functional);
            let _ = writeln!(out, "  pass           {}", r.pass);
        }
        out
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Writes `trace.csv`, `report.txt`, `report.csv`, `plot.gp` and one
/// `snapshot_<k>.csv` per requested snapshot. Returns the paths written.
pub fn write_artifacts(outcome: &Outcome, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();

    let path = dir.join("trace.csv");
    let file = fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
    outcome
        .trace
        .write_csv(BufWriter::new(file))
        .map_err(|e| CliError::io(&path, e))?;
    written.push(path);

    let path = dir.join("report.txt");
    write_file(&path, &outcome.report_text())?;
    written.push(path);

    let path = dir.join("report.csv");
    write_file(
        &path,
        &format!("{REPORT_CSV_HEADER}\n{}\n", outcome.report_csv_row()),
    )?;
    written.push(path);

    for (k, snap) in outcome.trace.snapshots.iter().enumerate() {
        let path = dir.join(format!("snapshot_{k}.csv"));
        let file = fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
        write_snapshot_csv(outcome.grid.nodes(), snap, BufWriter::new(file))
            .map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }

    let path = dir.join("plot.gp");
    write_file(&path, &plot::gnuplot_script(outcome))?;
    written.push(path);
    Ok(written)
}
