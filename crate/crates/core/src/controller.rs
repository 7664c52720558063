//! The split closed loop `u = v + w`.
//!
//! `v` starts from the initial datum, has homogeneous data at `x = 0` and is
//! driven by `V(t) = ∫ k_n(1,y) v(y,t) dy` with the segment gain `λ_n`.
//! `w` starts from zero, carries all disturbances and is driven by
//! `W(t) = ∫ k(1,y) w(y,t) dy` with the fixed gain `σ`. The plant receives
//! `U = V + W`.
//!
//! Loop closure is semi-implicit: `V` and `W` are evaluated on the state at
//! the start of a step and imposed as the new-time-level boundary value.

use crate::error::{check_len, Error, Result};
use crate::kernels::{direct_transform, gain_row, GainRow, KernelField, KernelParams};
use crate::pde::{
    l2_norm, linf_norm, Coefficients, DisturbanceSpec, Field, Grid, ImplicitStepper, PlannedStep,
    StepPlan,
};
use crate::schedule::Schedule;
use crate::trace::{Sample, Snapshot, TargetTrace, Trace};

/// Largest `λ dt` allowed inside a segment.
pub const MAX_DECAY_PER_STEP: f64 = 0.1;

#[derive(Debug, Clone)]
pub struct ControllerConfig {
    pub schedule: Schedule,
    pub sigma: f64,
    pub coefficients: Coefficients,
    pub grid: Grid,
    /// One gain row per schedule segment.
    pub gains_v: Vec<GainRow>,
    pub gain_w: GainRow,
}

impl ControllerConfig {
    pub fn new(
        schedule: Schedule,
        sigma: f64,
        coefficients: Coefficients,
        grid: Grid,
    ) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Domain(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        let gains_v = schedule
            .lambda
            .iter()
            .map(|&l| {
                gain_row(
                    &KernelParams::new(l, coefficients.a, coefficients.c)?,
                    &grid,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let gain_w = gain_row(
            &KernelParams::new(sigma, coefficients.a, coefficients.c)?,
            &grid,
        )?;
        Ok(Self {
            schedule,
            sigma,
            coefficients,
            grid,
            gains_v,
            gain_w,
        })
    }

    pub fn params_v(&self, segment: usize) -> Result<KernelParams> {
        KernelParams::new(
            self.schedule.lambda[segment],
            self.coefficients.a,
            self.coefficients.c,
        )
    }

    pub fn params_w(&self) -> Result<KernelParams> {
        KernelParams::new(self.sigma, self.coefficients.a, self.coefficients.c)
    }

    /// Steps of at most `min(dt_base, 0.1 / λ_n)` in segment `n`.
    pub fn step_plan(&self, dt_base: f64) -> Result<StepPlan> {
        let segments = (0..self.schedule.segment_count())
            .map(|n| {
                let (start, end) = self.schedule.segment_bounds(n);
                let dt = dt_base.min(MAX_DECAY_PER_STEP / self.schedule.lambda[n]);
                (start, end, dt)
            })
            .collect::<Vec<_>>();
        StepPlan::segmented(&segments)
    }

    fn steppers(&self, plan: &StepPlan, reaction: f64) -> Result<Vec<ImplicitStepper>> {
        let mut out = Vec::with_capacity(self.schedule.segment_count());
        for n in 0..self.schedule.segment_count() {
            let dt = plan
                .steps()
                .iter()
                .find(|s| s.segment == n)
                .map(|s| s.dt)
                .ok_or_else(|| Error::Config(format!("segment {n} has no steps")))?;
            out.push(ImplicitStepper::new(
                &self.grid,
                self.coefficients.a,
                reaction,
                dt,
            )?);
        }
        Ok(out)
    }

    /// Segment used for a control evaluated at `time`; the horizon itself
    /// maps to the last segment.
    fn control_segment(&self, time: f64) -> Result<usize> {
        if time >= self.schedule.horizon && time.is_finite() {
            return Ok(self.schedule.n_max);
        }
        self.schedule.segment_of(time)
    }
}

/// `V(t) = ∫ k_n(1, y) v(y) dy` with `n` the segment containing `time`.
pub fn control_v(v: &[f64], cfg: &ControllerConfig, time: f64) -> Result<f64> {
    let n = cfg.schedule.segment_of(time)?;
    cfg.gains_v[n].apply(v)
}

/// `W(t) = ∫ k(1, y) w(y) dy` with the time-invariant gain `σ`.
pub fn control_w(w: &[f64], cfg: &ControllerConfig) -> Result<f64> {
    cfg.gain_w.apply(w)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub dt_base: f64,
    /// Record every `stride` steps; segment boundaries and the final step
    /// are always recorded.
    pub stride: usize,
    pub snapshot_times: Vec<f64>,
    /// Keep a snapshot at every recorded sample.
    pub keep_profiles: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            dt_base: 1e-4,
            stride: 10,
            snapshot_times: Vec::new(),
            keep_profiles: false,
        }
    }
}

/// The two halves of the closed-loop state.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitState {
    pub v: Field,
    pub w: Field,
}

impl SplitState {
    pub fn new(u0: &Field) -> Self {
        Self {
            v: u0.clone(),
            w: Field {
                values: vec![0.0; u0.len()],
                time: u0.time,
            },
        }
    }

    pub fn time(&self) -> f64 {
        self.v.time
    }

    pub fn reconstruct(&self) -> Field {
        Field {
            values: self
                .v
                .values
                .iter()
                .zip(&self.w.values)
                .map(|(a, b)| a + b)
                .collect(),
            time: self.v.time,
        }
    }
}

fn is_recorded(k: usize, plan: &[PlannedStep], stride: usize) -> bool {
    let last = k + 1 == plan.len();
    let boundary = !last && plan[k + 1].segment != plan[k].segment;
    last || boundary || (k + 1).is_multiple_of(stride)
}

/// Pending snapshot requests, consumed in time order.
struct SnapshotQueue {
    times: Vec<f64>,
    next: usize,
}

impl SnapshotQueue {
    fn new(mut times: Vec<f64>) -> Self {
        times.sort_by(f64::total_cmp);
        Self { times, next: 0 }
    }

    /// True once per request whose time has been reached.
    fn due(&mut self, t: f64) -> bool {
        let mut hit = false;
        while self.next < self.times.len() && self.times[self.next] <= t + 1e-12 {
            self.next += 1;
            hit = true;
        }
        hit
    }
}

/// Runs the split closed loop from `u0` over `[0, T0]`.
pub fn closed_loop_simulate(
    cfg: &ControllerConfig,
    dist: &DisturbanceSpec,
    u0: &Field,
    opts: &RunOptions,
) -> Result<Trace> {
    let grid = &cfg.grid;
    check_len(grid.len(), u0.len())?;
    let plan = cfg.step_plan(opts.dt_base)?;
    let steppers = cfg.steppers(&plan, cfg.coefficients.c)?;
    let stride = opts.stride.max(1);
    let mut monitor = dist.monitor();
    let mut queue = SnapshotQueue::new(opts.snapshot_times.clone());
    let mut trace = Trace::new(cfg.schedule.horizon, true);
    trace.applied.reserve(plan.len());

    let mut state = SplitState::new(&Field {
        values: u0.values.clone(),
        time: 0.0,
    });
    let mut v_next = Vec::with_capacity(grid.len());
    let mut w_next = Vec::with_capacity(grid.len());

    let record = |trace: &mut Trace, state: &SplitState, queue: &mut SnapshotQueue| -> Result<()> {
        let t = state.time();
        let n = cfg.control_segment(t)?;
        let v_ctrl = cfg.gains_v[n].apply(&state.v.values)?;
        let w_ctrl = control_w(&state.w.values, cfg)?;
        let u = state.reconstruct();
        trace.push(Sample {
            t,
            l2_u: l2_norm(&u.values, grid)?,
            linf_u: linf_norm(&u.values),
            control_u: v_ctrl + w_ctrl,
            control_v: v_ctrl,
            control_w: w_ctrl,
            d1: dist.d1(t),
            l2_v: l2_norm(&state.v.values, grid)?,
            l2_w: l2_norm(&state.w.values, grid)?,
        });
        if queue.due(t) || opts.keep_profiles {
            trace.snapshots.push(Snapshot {
                time: t,
                u: u.values,
                v: state.v.values.clone(),
                w: state.w.values.clone(),
            });
        }
        Ok(())
    };

    trace.segment_starts.push(state.v.clone());
    record(&mut trace, &state, &mut queue)?;

    let steps = plan.steps();
    for (k, s) in steps.iter().enumerate() {
        let n = s.segment;
        let v_ctrl = cfg.gains_v[n].apply(&state.v.values)?;
        let w_ctrl = cfg.gain_w.apply(&state.w.values)?;
        let stepper = &steppers[n];

        stepper.advance(&state.v.values, 0.0, v_ctrl, None, &mut v_next)?;
        let left = monitor.d0(s.end);
        let right = w_ctrl + monitor.d1(s.end);
        let forcing = monitor.forcing(grid, s.end);
        stepper.advance(
            &state.w.values,
            left,
            right,
            forcing.as_deref(),
            &mut w_next,
        )?;

        std::mem::swap(&mut state.v.values, &mut v_next);
        std::mem::swap(&mut state.w.values, &mut w_next);
        state.v.time = s.end;
        state.w.time = s.end;
        trace.applied.push(v_ctrl + w_ctrl);

        if state
            .v
            .values
            .iter()
            .chain(&state.w.values)
            .any(|x| !x.is_finite())
        {
            return Err(Error::NonFinite {
                what: "closed-loop state",
                time: s.end,
            });
        }
        if k + 1 < steps.len() && steps[k + 1].segment != n {
            trace.segment_starts.push(state.v.clone());
        }
        if is_recorded(k, steps, stride) {
            record(&mut trace, &state, &mut queue)?;
        }
    }
    trace.sups = monitor.sups();
    Ok(trace)
}

/// Drives the undecomposed plant with a recorded boundary input
/// (`inputs[k]` applied at the end of step `k`, plus `d1`).
pub fn simulate_plant_with_input(
    cfg: &ControllerConfig,
    dist: &DisturbanceSpec,
    u0: &Field,
    inputs: &[f64],
    opts: &RunOptions,
) -> Result<Trace> {
    let grid = &cfg.grid;
    check_len(grid.len(), u0.len())?;
    let plan = cfg.step_plan(opts.dt_base)?;
    check_len(plan.len(), inputs.len())?;
    let steppers = cfg.steppers(&plan, cfg.coefficients.c)?;
    let stride = opts.stride.max(1);
    let mut monitor = dist.monitor();
    let mut queue = SnapshotQueue::new(opts.snapshot_times.clone());
    let mut trace = Trace::new(cfg.schedule.horizon, false);

    let mut u = u0.values.clone();
    let mut next = Vec::with_capacity(u.len());
    let record = |trace: &mut Trace,
                  t: f64,
                  u: &[f64],
                  input: f64,
                  queue: &mut SnapshotQueue|
     -> Result<()> {
        trace.push(Sample {
            t,
            l2_u: l2_norm(u, grid)?,
            linf_u: linf_norm(u),
            control_u: input,
            d1: dist.d1(t),
            ..Default::default()
        });
        if queue.due(t) || opts.keep_profiles {
            trace.snapshots.push(Snapshot {
                time: t,
                u: u.to_vec(),
                v: Vec::new(),
                w: Vec::new(),
            });
        }
        Ok(())
    };
    record(
        &mut trace,
        0.0,
        &u,
        inputs.first().copied().unwrap_or(0.0),
        &mut queue,
    )?;

    let steps = plan.steps();
    for (k, s) in steps.iter().enumerate() {
        let left = monitor.d0(s.end);
        let right = inputs[k] + monitor.d1(s.end);
        let forcing = monitor.forcing(grid, s.end);
        steppers[s.segment].advance(&u, left, right, forcing.as_deref(), &mut next)?;
        std::mem::swap(&mut u, &mut next);
        if u.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                what: "plant state",
                time: s.end,
            });
        }
        trace.applied.push(inputs[k]);
        if is_recorded(k, steps, stride) {
            record(&mut trace, s.end, &u, inputs[k], &mut queue)?;
        }
    }
    trace.sups = monitor.sups();
    Ok(trace)
}

/// Runs `ṽ_t = a ṽ_xx − λ_n ṽ` with zero Dirichlet data over segment `n`,
/// starting from the transform of `v_start` by `k_n`.
pub fn simulate_target_v(
    cfg: &ControllerConfig,
    v_start: &Field,
    segment: usize,
    opts: &RunOptions,
) -> Result<TargetTrace> {
    if segment >= cfg.schedule.segment_count() {
        return Err(Error::Domain(format!(
            "segment {segment} does not exist (n_max = {})",
            cfg.schedule.n_max
        )));
    }
    let lambda = cfg.schedule.lambda[segment];
    let kf = KernelField::build(&cfg.params_v(segment)?, &cfg.grid)?;
    let v_tilde = direct_transform(&v_start.values, &kf)?;
    let plan = cfg.step_plan(opts.dt_base)?;
    let steps: Vec<PlannedStep> = plan
        .steps()
        .iter()
        .filter(|s| s.segment == segment)
        .copied()
        .collect();
    let stepper = ImplicitStepper::new(&cfg.grid, cfg.coefficients.a, -lambda, steps[0].dt)?;
    let stride = opts.stride.max(1);

    let (t_start, _) = cfg.schedule.segment_bounds(segment);
    let mut out = TargetTrace::new(lambda, t_start);
    let push = |out: &mut TargetTrace, t: f64, values: &[f64]| -> Result<()> {
        out.times.push(t);
        out.l2.push(l2_norm(values, &cfg.grid)?);
        out.linf.push(linf_norm(values));
        out.profiles.push(values.to_vec());
        out.sups.push(Default::default());
        Ok(())
    };
    let mut state = v_tilde;
    let mut next = Vec::with_capacity(state.len());
    push(&mut out, t_start, &state)?;
    for (k, s) in steps.iter().enumerate() {
        stepper.advance(&state, 0.0, 0.0, None, &mut next)?;
        std::mem::swap(&mut state, &mut next);
        if (k + 1).is_multiple_of(stride) || k + 1 == steps.len() {
            push(&mut out, s.end, &state)?;
        }
    }
    Ok(out)
}

/// Runs `w̃_t = a w̃_xx − σ w̃ + f̃` with `w̃(0) = d0`, `w̃(1) = d1`, zero
/// initial datum, on the closed loop's step plan.
pub fn simulate_target_w(
    cfg: &ControllerConfig,
    dist: &DisturbanceSpec,
    opts: &RunOptions,
) -> Result<TargetTrace> {
    let grid = &cfg.grid;
    let plan = cfg.step_plan(opts.dt_base)?;
    let steppers = cfg.steppers(&plan, -cfg.sigma)?;
    let kf = if dist.has_forcing() {
        Some(KernelField::build(&cfg.params_w()?, grid)?)
    } else {
        None
    };
    let stride = opts.stride.max(1);
    let mut monitor = dist.monitor();
    let mut f_tilde_sup = 0.0_f64;
    let mut out = TargetTrace::new(cfg.sigma, 0.0);

    let mut state = vec![0.0; grid.len()];
    let mut next = Vec::with_capacity(grid.len());
    let push = |out: &mut TargetTrace, t: f64, values: &[f64], sups| -> Result<()> {
        out.times.push(t);
        out.l2.push(l2_norm(values, grid)?);
        out.linf.push(linf_norm(values));
        out.profiles.push(values.to_vec());
        out.sups.push(sups);
        Ok(())
    };
    push(&mut out, 0.0, &state, monitor.sups())?;

    let steps = plan.steps();
    for (k, s) in steps.iter().enumerate() {
        let left = monitor.d0(s.end);
        let right = monitor.d1(s.end);
        let forcing = match (monitor.forcing(grid, s.end), &kf) {
            (Some(f), Some(kf)) => {
                let ft = direct_transform(&f, kf)?;
                f_tilde_sup = f_tilde_sup.max(linf_norm(&ft));
                Some(ft)
            }
            _ => None,
        };
        steppers[s.segment].advance(&state, left, right, forcing.as_deref(), &mut next)?;
        std::mem::swap(&mut state, &mut next);
        if state.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                what: "target w state",
                time: s.end,
            });
        }
        if is_recorded(k, steps, stride) {
            let mut sups = monitor.sups();
            sups.f = f_tilde_sup;
            push(&mut out, s.end, &state, sups)?;
        }
    }
    Ok(out)
}
