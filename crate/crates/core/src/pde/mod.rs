//! Finite-difference discretization of `u_t = a u_xx + c u + f` on `[0, 1]`
//! with Dirichlet data, stepped by backward Euler.

mod disturbance;
mod grid;
mod plan;
mod tridiag;

pub use disturbance::{DisturbanceMonitor, DisturbanceSpec, SupNorms};
pub use grid::Grid;
pub use plan::{PlannedStep, StepPlan};
pub use tridiag::Tridiagonal;

use crate::error::{check_len, Error, Result};
use crate::trace::{Sample, Trace};

/// Constant diffusion `a` and reaction `c`, with `a` inside `[1/Λ, Λ]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub a: f64,
    pub c: f64,
    pub bound: f64,
}

impl Coefficients {
    /// Uses the tightest admissible bound `Λ = max(a, 1/a)`.
    pub fn new(a: f64, c: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!(
                "diffusion a must be positive, got {a}"
            )));
        }
        Self::with_bound(a, c, a.max(1.0 / a))
    }

    pub fn with_bound(a: f64, c: f64, bound: f64) -> Result<Self> {
        if !(bound >= 1.0 && bound.is_finite()) {
            return Err(Error::Domain(format!(
                "bound must satisfy 1 <= bound, got {bound}"
            )));
        }
        if !c.is_finite() {
            return Err(Error::Domain(format!("reaction c must be finite, got {c}")));
        }
        // relative slack so that with_bound(a, c, 1/a) round-trips
        let eps = 1e-12;
        if !(a >= (1.0 - eps) / bound && a <= bound * (1.0 + eps)) {
            return Err(Error::Domain(format!(
                "diffusion a = {a} outside [1/{bound}, {bound}]"
            )));
        }
        Ok(Self { a, c, bound })
    }
}

/// Nodal values of a profile at time `time`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub values: Vec<f64>,
    pub time: f64,
}

impl Field {
    pub fn new(values: Vec<f64>, time: f64) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "field",
                time,
            });
        }
        Ok(Self { values, time })
    }

    pub fn zeros(grid: &Grid, time: f64) -> Self {
        Self {
            values: vec![0.0; grid.len()],
            time,
        }
    }

    pub fn from_fn(grid: &Grid, time: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid.sample(f), time)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `sqrt(∫ f²)` by the trapezoid rule.
pub fn l2_norm(values: &[f64], grid: &Grid) -> Result<f64> {
    check_len(grid.len(), values.len())?;
    let sq: f64 = grid
        .weights()
        .iter()
        .zip(values)
        .map(|(w, v)| w * v * v)
        .sum();
    Ok(sq.sqrt())
}

pub fn linf_norm(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Backward-Euler propagator for `u_t = a u_xx + reaction·u + f` with the
/// boundary rows eliminated. The factorization depends only on `dt`.
#[derive(Debug, Clone)]
pub struct ImplicitStepper {
    n: usize,
    dt: f64,
    r: f64,
    lu: Tridiagonal,
}

impl ImplicitStepper {
    pub fn new(grid: &Grid, a: f64, reaction: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Config(format!(
                "time step must be positive, got {dt}"
            )));
        }
        let n = grid.len();
        let m = n - 2;
        let r = a * dt / (grid.h() * grid.h());
        let diag = vec![1.0 + 2.0 * r - dt * reaction; m];
        let off = vec![-r; m];
        let lu = Tridiagonal::factor(&off, &diag, &off)?;
        Ok(Self { n, dt, r, lu })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Writes the new-time-level profile into `out`. `forcing`, when given,
    /// is sampled at the new time level.
    pub fn advance(
        &self,
        prev: &[f64],
        bc_left: f64,
        bc_right: f64,
        forcing: Option<&[f64]>,
        out: &mut Vec<f64>,
    ) -> Result<()> {
        check_len(self.n, prev.len())?;
        out.clear();
        out.resize(self.n, 0.0);
        let m = self.n - 2;
        let rhs = &mut out[1..self.n - 1];
        rhs.copy_from_slice(&prev[1..self.n - 1]);
        if let Some(f) = forcing {
            check_len(self.n, f.len())?;
            for (r, fi) in rhs.iter_mut().zip(&f[1..self.n - 1]) {
                *r += self.dt * fi;
            }
        }
        rhs[0] += self.r * bc_left;
        rhs[m - 1] += self.r * bc_right;
        self.lu.solve(rhs)?;
        out[0] = bc_left;
        out[self.n - 1] = bc_right;
        Ok(())
    }
}

/// One backward-Euler step of the plant with constant coefficients.
pub fn step(
    state: &Field,
    dt: f64,
    co: &Coefficients,
    bc_left: f64,
    bc_right: f64,
    forcing: Option<&Field>,
    grid: &Grid,
) -> Result<Field> {
    check_len(grid.len(), state.len())?;
    let stepper = ImplicitStepper::new(grid, co.a, co.c, dt)?;
    let mut out = Vec::with_capacity(grid.len());
    stepper.advance(
        &state.values,
        bc_left,
        bc_right,
        forcing.map(|f| f.values.as_slice()),
        &mut out,
    )?;
    Field::new(out, state.time + dt)
}

/// Right-boundary policy of an uncontrolled run: `u(1,t) = d1(t) + offset`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OpenLoopBoundary {
    pub offset: f64,
}

/// Runs the plant with no feedback on `[0, t_end]`, sampling every `stride`
/// steps (the initial and final states are always sampled).
#[allow(clippy::too_many_arguments)]
pub fn simulate_open_loop(
    grid: &Grid,
    co: &Coefficients,
    dist: &DisturbanceSpec,
    u0: &Field,
    t_end: f64,
    dt: f64,
    boundary: OpenLoopBoundary,
    stride: usize,
) -> Result<Trace> {
    check_len(grid.len(), u0.len())?;
    let plan = StepPlan::uniform(t_end, dt)?;
    let stepper = ImplicitStepper::new(grid, co.a, co.c, plan.steps()[0].dt)?;
    let stride = stride.max(1);
    let mut monitor = dist.monitor();
    let mut trace = Trace::new(t_end, false);
    let mut u = u0.values.clone();
    let mut next = Vec::with_capacity(u.len());

    let sample = |trace: &mut Trace, t: f64, u: &[f64]| -> Result<()> {
        trace.push(Sample {
            t,
            l2_u: l2_norm(u, grid)?,
            linf_u: linf_norm(u),
            control_u: boundary.offset,
            control_v: 0.0,
            control_w: 0.0,
            d1: dist.d1(t),
            l2_v: 0.0,
            l2_w: 0.0,
        });
        Ok(())
    };
    sample(&mut trace, 0.0, &u)?;

    for (k, s) in plan.steps().iter().enumerate() {
        let left = monitor.d0(s.end);
        let right = monitor.d1(s.end) + boundary.offset;
        let forcing = monitor.forcing(grid, s.end);
        stepper.advance(&u, left, right, forcing.as_deref(), &mut next)?;
        std::mem::swap(&mut u, &mut next);
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "open-loop state",
                time: s.end,
            });
        }
        trace.applied.push(boundary.offset);
        if (k + 1) % stride == 0 || k + 1 == plan.len() {
            sample(&mut trace, s.end, &u)?;
        }
    }
    trace.sups = monitor.sups();
    Ok(trace)
}
