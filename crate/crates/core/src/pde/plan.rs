use crate::error::{Error, Result};

/// One implicit step from `start` to `end` inside schedule segment `segment`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannedStep {
    pub start: f64,
    pub end: f64,
    pub dt: f64,
    pub segment: usize,
}

/// The sequence of time steps of a run. Segment boundaries are hit exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct StepPlan {
    steps: Vec<PlannedStep>,
}

impl StepPlan {
    /// Equal steps of at most `dt_max` on `[0, t_end]`.
    pub fn uniform(t_end: f64, dt_max: f64) -> Result<Self> {
        Self::segmented(&[(0.0, t_end, dt_max)])
    }

    /// `segments[n] = (start, end, dt_max)`; consecutive segments must touch.
    pub fn segmented(segments: &[(f64, f64, f64)]) -> Result<Self> {
        let mut steps = Vec::new();
        let mut previous_end: Option<f64> = None;
        for (n, &(start, end, dt_max)) in segments.iter().enumerate() {
            if !(dt_max > 0.0 && dt_max.is_finite()) {
                return Err(Error::Config(format!(
                    "time step must be positive, got {dt_max}"
                )));
            }
            if !(end > start) || !start.is_finite() || !end.is_finite() {
                return Err(Error::Config(format!(
                    "empty time segment [{start}, {end}]"
                )));
            }
            if let Some(prev) = previous_end {
                if prev != start {
                    return Err(Error::Config(format!(
                        "segment {n} starts at {start} but the previous one ends at {prev}"
                    )));
                }
            }
            let len = end - start;
            let count = ((len / dt_max) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
            let dt = len / count as f64;
            for j in 0..count {
                let s = start + j as f64 * dt;
                let e = if j + 1 == count {
                    end
                } else {
                    start + (j + 1) as f64 * dt
                };
                steps.push(PlannedStep {
                    start: s,
                    end: e,
                    dt,
                    segment: n,
                });
            }
            previous_end = Some(end);
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> &[PlannedStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end_time(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.end)
    }
}
