//! Time series produced by simulations, and their CSV form.

use std::io::{self, Write};

use crate::pde::{Field, SupNorms};

/// Formats with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// One sampled row of a [`Trace`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub l2_u: f64,
    pub linf_u: f64,
    pub control_u: f64,
    pub control_v: f64,
    pub control_w: f64,
    pub d1: f64,
    pub l2_v: f64,
    pub l2_w: f64,
}

/// Profiles `u = v + w` (and the parts) at a requested time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
}

/// Norm and control history of a plant run.
///
/// `split` traces come from the closed loop and carry the `l2_v`, `l2_w`
/// columns. `applied[k]` is the boundary control (without `d1`) imposed at
/// the end of step `k` of the run's [`StepPlan`](crate::pde::StepPlan).
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub horizon: f64,
    pub split: bool,
    pub times: Vec<f64>,
    pub l2_u: Vec<f64>,
    pub linf_u: Vec<f64>,
    pub control_u: Vec<f64>,
    pub control_v: Vec<f64>,
    pub control_w: Vec<f64>,
    pub d1: Vec<f64>,
    pub l2_v: Vec<f64>,
    pub l2_w: Vec<f64>,
    pub applied: Vec<f64>,
    pub segment_starts: Vec<Field>,
    pub snapshots: Vec<Snapshot>,
    pub sups: SupNorms,
}

impl Trace {
    pub fn new(horizon: f64, split: bool) -> Self {
        Self {
            horizon,
            split,
            times: Vec::new(),
            l2_u: Vec::new(),
            linf_u: Vec::new(),
            control_u: Vec::new(),
            control_v: Vec::new(),
            control_w: Vec::new(),
            d1: Vec::new(),
            l2_v: Vec::new(),
            l2_w: Vec::new(),
            applied: Vec::new(),
            segment_starts: Vec::new(),
            snapshots: Vec::new(),
            sups: SupNorms::default(),
        }
    }

    pub fn push(&mut self, s: Sample) {
        self.times.push(s.t);
        self.l2_u.push(s.l2_u);
        self.linf_u.push(s.linf_u);
        self.control_u.push(s.control_u);
        self.control_v.push(s.control_v);
        self.control_w.push(s.control_w);
        self.d1.push(s.d1);
        if self.split {
            self.l2_v.push(s.l2_v);
            self.l2_w.push(s.l2_w);
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Index of the last sample at or before `t`.
    pub fn index_at_or_before(&self, t: f64) -> Option<usize> {
        let k = self.times.partition_point(|&s| s <= t);
        k.checked_sub(1)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        if self.split {
            writeln!(out, "t,l2_u,linf_u,U,V,W,d1,l2_v,l2_w")?;
        } else {
            writeln!(out, "t,l2_u,linf_u,U,V,W,d1")?;
        }
        for i in 0..self.len() {
            let mut row = [
                self.times[i],
                self.l2_u[i],
                self.linf_u[i],
                self.control_u[i],
                self.control_v[i],
                self.control_w[i],
                self.d1[i],
            ]
            .iter()
            .map(|&v| fmt_f64(v))
            .collect::<Vec<_>>();
            if self.split {
                row.push(fmt_f64(self.l2_v[i]));
                row.push(fmt_f64(self.l2_w[i]));
            }
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

/// Writes `x,u` for one snapshot.
pub fn write_snapshot_csv<W: Write>(nodes: &[f64], snap: &Snapshot, mut out: W) -> io::Result<()> {
    writeln!(out, "x,u")?;
    for (x, u) in nodes.iter().zip(&snap.u) {
        writeln!(out, "{},{}", fmt_f64(*x), fmt_f64(*u))?;
    }
    Ok(())
}

/// Run of a target system (`ṽ` on one segment, or `w̃` on the whole horizon).
#[derive(Debug, Clone, PartialEq)]
pub struct TargetTrace {
    /// Damping rate of the target system (`λ_n` or `σ`).
    pub rate: f64,
    pub t_start: f64,
    pub times: Vec<f64>,
    pub l2: Vec<f64>,
    pub linf: Vec<f64>,
    pub profiles: Vec<Vec<f64>>,
    /// Running sups at each sample; the `f` entry holds `‖f̃‖∞`.
    pub sups: Vec<SupNorms>,
}

impl TargetTrace {
    pub fn new(rate: f64, t_start: f64) -> Self {
        Self {
            rate,
            t_start,
            times: Vec::new(),
            l2: Vec::new(),
            linf: Vec::new(),
            profiles: Vec::new(),
            sups: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Sup-norms over the whole run.
    pub fn final_sups(&self) -> SupNorms {
        self.sups.last().copied().unwrap_or_default()
    }
}
