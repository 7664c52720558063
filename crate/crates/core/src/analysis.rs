//! Post-processing of traces: fixed-time decay, ISS gains, and the
//! maximum-principle / truncated-energy checks on the disturbed target system.

use std::fmt;

use crate::error::{Error, Result};
use crate::pde::{Grid, SupNorms};
use crate::trace::{fmt_f64, TargetTrace, Trace};

/// Relative slack on the L∞ bound.
pub const LINF_REL_TOL: f64 = 5e-2;
/// Largest admissible value of the truncated energy functional.
pub const LYAPUNOV_TOL: f64 = 1e-6;
/// `ε = 0.01 T0` for the fixed-time metric.
pub const FTS_EPS_FRACTION: f64 = 0.01;
/// The ISS window is the last quarter of the horizon.
pub const ISS_WINDOW_FRACTION: f64 = 0.25;

/// `g(s) = ln(1 + s²)` for `s > 0`, else 0.
pub fn stampacchia_g(s: f64) -> f64 {
    if s > 0.0 {
        s.mul_add(s, 1.0).ln()
    } else {
        0.0
    }
}

/// `G(s) = ∫_0^s g = s ln(1 + s²) − 2s + 2 arctan s` for `s > 0`, else 0.
pub fn stampacchia_big_g(s: f64) -> f64 {
    if s > 0.0 {
        if s < 0.1 {
            // Σ (−1)^(k+1) s^(2k+1) / (k (2k+1)); the closed form cancels here
            let s2 = s * s;
            let mut power = s * s2;
            let mut sum = 0.0;
            for k in 1..20 {
                let kf = k as f64;
                let term = power / (kf * (2.0 * kf + 1.0));
                sum += if k % 2 == 1 { term } else { -term };
                if term < 1e-17 * sum {
                    break;
                }
                power *= s2;
            }
            sum
        } else {
            s * s.mul_add(s, 1.0).ln() - 2.0 * s + 2.0 * s.atan()
        }
    } else {
        0.0
    }
}

/// `∫_0^1 G(φ − Ω) dx` by the trapezoid rule.
pub fn lyapunov_functional(values: &[f64], omega: f64, grid: &Grid) -> Result<f64> {
    if !(omega >= 0.0) {
        return Err(Error::Domain(format!("omega must be >= 0, got {omega}")));
    }
    let shifted: Vec<f64> = values
        .iter()
        .map(|&v| stampacchia_big_g(v - omega))
        .collect();
    grid.integrate(&shifted)
}

/// `Ω = max{‖f̃‖∞/σ, ‖d0‖∞, ‖d1‖∞}` over the whole run.
pub fn proof_omega(run: &TargetTrace, sigma: f64) -> f64 {
    let s = run.final_sups();
    (s.f / sigma).max(s.d0).max(s.d1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinfBoundReport {
    /// Bound at the final sample.
    pub bound: f64,
    pub max_linf: f64,
    /// `min_t (bound(t)(1 + tol) − ‖w̃[t]‖∞)` over samples with nonzero data;
    /// negative means violated.
    pub worst_margin: f64,
    pub pass: bool,
}

/// Checks `‖w̃[t]‖∞ ≤ ‖f̃‖∞/σ + ‖d0‖∞ + ‖d1‖∞` (sups over `[0, t]`) at every
/// sample, with [`LINF_REL_TOL`] relative slack.
pub fn check_linf_bound(run: &TargetTrace, sigma: f64) -> LinfBoundReport {
    let bound_of = |s: &SupNorms| s.f / sigma + s.d0 + s.d1;
    let mut worst = f64::INFINITY;
    let mut max_linf = 0.0_f64;
    for (linf, sups) in run.linf.iter().zip(&run.sups) {
        max_linf = max_linf.max(*linf);
        let bound = bound_of(sups);
        if bound == 0.0 && *linf == 0.0 {
            continue;
        }
        worst = worst.min(bound * (1.0 + LINF_REL_TOL) - linf);
    }
    if worst == f64::INFINITY {
        worst = 0.0;
    }
    LinfBoundReport {
        bound: bound_of(&run.final_sups()),
        max_linf,
        worst_margin: worst,
        pass: worst >= -1e-14,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovReport {
    pub omega: f64,
    /// Max over samples of `∫G(w̃ − Ω)` and `∫G(−w̃ − Ω)`.
    pub max_functional: f64,
    pub pass: bool,
}

/// The truncated energies `∫G(±w̃ − Ω)` start at 0 and must stay there.
pub fn check_lyapunov_monotone(
    run: &TargetTrace,
    omega: f64,
    grid: &Grid,
) -> Result<LyapunovReport> {
    let mut max_functional = 0.0_f64;
    for profile in &run.profiles {
        let upper = lyapunov_functional(profile, omega, grid)?;
        let negated: Vec<f64> = profile.iter().map(|v| -v).collect();
        let lower = lyapunov_functional(&negated, omega, grid)?;
        max_functional = max_functional.max(upper).max(lower);
    }
    Ok(LyapunovReport {
        omega,
        max_functional,
        pass: max_functional <= LYAPUNOV_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FtsReport {
    pub epsilon: f64,
    pub terminal_time: f64,
    pub terminal_norm: f64,
    pub initial_norm: f64,
    pub decay_ratio: f64,
}

impl FtsReport {
    pub fn csv_header() -> &'static str {
        "epsilon,terminal_time,terminal_norm,initial_norm,decay_ratio"
    }

    pub fn csv_row(&self) -> String {
        [
            self.epsilon,
            self.terminal_time,
            self.terminal_norm,
            self.initial_norm,
            self.decay_ratio,
        ]
        .iter()
        .map(|&v| fmt_f64(v))
        .collect::<Vec<_>>()
        .join(",")
    }
}

impl fmt::Display for FtsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fixed-time decay")?;
        writeln!(f, "  epsilon        {:.6e}", self.epsilon)?;
        writeln!(f, "  terminal time  {:.6}", self.terminal_time)?;
        writeln!(f, "  ||u(0)||_2     {:.6e}", self.initial_norm)?;
        writeln!(f, "  ||u(T0-eps)||  {:.6e}", self.terminal_norm)?;
        writeln!(f, "  ratio          {:.6e}", self.decay_ratio)
    }
}

/// `‖u‖₂` at the last sample no later than `T0 − ε`, relative to `‖u(0)‖₂`.
pub fn fts_metric(trace: &Trace, epsilon: f64) -> Result<FtsReport> {
    let target = trace.horizon - epsilon;
    let k = trace
        .index_at_or_before(target)
        .ok_or_else(|| Error::Domain(format!("trace has no sample before t = {target}")))?;
    let initial_norm = trace.l2_u[0];
    let terminal_norm = trace.l2_u[k];
    let decay_ratio = if initial_norm > 0.0 {
        terminal_norm / initial_norm
    } else {
        0.0
    };
    Ok(FtsReport {
        epsilon,
        terminal_time: trace.times[k],
        terminal_norm,
        initial_norm,
        decay_ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IssReport {
    pub window: (f64, f64),
    pub sup_norm_window: f64,
    pub disturbance_sups: SupNorms,
    /// `sup_window ‖u‖₂ / (‖f‖∞ + ‖d0‖∞ + ‖d1‖∞)`, 0 without disturbances.
    pub fitted_gain: f64,
}

impl IssReport {
    pub fn csv_header() -> &'static str {
        "window_start,window_end,sup_l2_u,sup_f,sup_d0,sup_d1,fitted_gain"
    }

    pub fn csv_row(&self) -> String {
        [
            self.window.0,
            self.window.1,
            self.sup_norm_window,
            self.disturbance_sups.f,
            self.disturbance_sups.d0,
            self.disturbance_sups.d1,
            self.fitted_gain,
        ]
        .iter()
        .map(|&v| fmt_f64(v))
        .collect::<Vec<_>>()
        .join(",")
    }
}

impl fmt::Display for IssReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "input-to-state response")?;
        writeln!(
            f,
            "  window         [{:.6}, {:.6})",
            self.window.0, self.window.1
        )?;
        writeln!(f, "  sup ||u||_2    {:.6e}", self.sup_norm_window)?;
        writeln!(
            f,
            "  sup |f|,|d0|,|d1|  {:.6e}, {:.6e}, {:.6e}",
            self.disturbance_sups.f, self.disturbance_sups.d0, self.disturbance_sups.d1
        )?;
        writeln!(f, "  fitted gain    {:.6e}", self.fitted_gain)
    }
}

/// Default ISS window `[0.75 T0, T0)`.
pub fn iss_window(horizon: f64) -> (f64, f64) {
    ((1.0 - ISS_WINDOW_FRACTION) * horizon, horizon)
}

/// Sup of `‖u‖₂` over samples in `[window.0, window.1)`.
pub fn iss_metric(trace: &Trace, window: (f64, f64), sups: SupNorms) -> Result<IssReport> {
    let (start, end) = window;
    let mut sup: Option<f64> = None;
    for (t, n) in trace.times.iter().zip(&trace.l2_u) {
        if *t >= start && *t < end {
            sup = Some(sup.map_or(*n, |s| s.max(*n)));
        }
    }
    let sup_norm_window =
        sup.ok_or_else(|| Error::Domain(format!("no samples in window [{start}, {end})")))?;
    let total = sups.total();
    Ok(IssReport {
        window,
        sup_norm_window,
        disturbance_sups: sups,
        fitted_gain: if total > 0.0 {
            sup_norm_window / total
        } else {
            0.0
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::Sample;
    use std::f64::consts::{LN_2, PI};

    #[test]
    fn truncation_functions() {
        assert_eq!(stampacchia_g(0.0), 0.0);
        assert_eq!(stampacchia_g(-1.0), 0.0);
        assert!((stampacchia_g(1.0) - LN_2).abs() < 1e-15);
        assert_eq!(stampacchia_big_g(0.0), 0.0);
        assert_eq!(stampacchia_big_g(-5.0), 0.0);
        assert!((stampacchia_big_g(1.0) - (LN_2 - 2.0 + PI / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn big_g_matches_quadrature() {
        // Simpson on ∫_0^s ln(1 + τ²) dτ
        for s in [1e-4, 5e-4, 1e-3, 2e-3, 0.0999, 0.1, 0.5, 1.0, 3.0] {
            let n = 2000;
            let h = s / n as f64;
            let mut acc = stampacchia_g(0.0) + stampacchia_g(s);
            for k in 1..n {
                acc += if k % 2 == 1 { 4.0 } else { 2.0 } * stampacchia_g(k as f64 * h);
            }
            let q = acc * h / 3.0;
            assert!(
                (stampacchia_big_g(s) - q).abs() <= 1e-12 * q.max(1e-300) + 1e-20,
                "s = {s}"
            );
        }
        assert!((stampacchia_big_g(1.0) - 0.263_943_507_354_842).abs() < 1e-14);
    }

    #[test]
    fn functional_cases() {
        let g = Grid::uniform(11).unwrap();
        let below = vec![0.5; 11];
        assert_eq!(lyapunov_functional(&below, 0.5, &g).unwrap(), 0.0);
        assert_eq!(lyapunov_functional(&[0.0; 11], 0.0, &g).unwrap(), 0.0);
        let above = vec![3.0; 11];
        assert!(
            (lyapunov_functional(&above, 2.0, &g).unwrap() - stampacchia_big_g(1.0)).abs() < 1e-15
        );
        assert!(lyapunov_functional(&above, -1.0, &g).is_err());
    }

    fn fake_trace() -> Trace {
        let mut t = Trace::new(1.0, false);
        for k in 0..=100 {
            let time = k as f64 * 0.01;
            t.push(Sample {
                t: time,
                l2_u: 2.0 * (-time).exp(),
                ..Default::default()
            });
        }
        t
    }

    #[test]
    fn fts_and_iss() {
        let t = fake_trace();
        let f = fts_metric(&t, 0.01).unwrap();
        assert!((f.terminal_time - 0.99).abs() < 1e-12);
        assert!((f.decay_ratio - (-0.99_f64).exp()).abs() < 1e-12);
        let sups = SupNorms {
            f: 0.0,
            d0: 0.0,
            d1: 2.0,
        };
        let r = iss_metric(&t, iss_window(1.0), sups).unwrap();
        assert!((r.sup_norm_window - 2.0 * (-0.75_f64).exp()).abs() < 1e-12);
        assert!((r.fitted_gain - (-0.75_f64).exp()).abs() < 1e-12);
        assert!(iss_metric(&t, (2.0, 3.0), sups).is_err());
        assert_eq!(
            r.csv_row().split(',').count(),
            IssReport::csv_header().split(',').count()
        );
        assert_eq!(
            f.csv_row().split(',').count(),
            FtsReport::csv_header().split(',').count()
        );
        assert!(format!("{r}").contains("fitted gain"));
    }

    #[test]
    fn zero_trace_ratios() {
        let mut t = Trace::new(1.0, false);
        for k in 0..=10 {
            t.push(Sample {
                t: k as f64 * 0.1,
                ..Default::default()
            });
        }
        assert_eq!(fts_metric(&t, 0.01).unwrap().decay_ratio, 0.0);
        assert_eq!(
            iss_metric(&t, iss_window(1.0), SupNorms::default())
                .unwrap()
                .fitted_gain,
            0.0
        );
    }
}
