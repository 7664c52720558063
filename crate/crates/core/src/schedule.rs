//! Segment times `t_n` and gains `λ_n` of the disturbance-free controller.
//!
//! Case I uses gaps `1/(n+1)^p`, so the horizon is `ζ(p)`; Case II places
//! `t_n = T0 − T0/(n+1)` for a freely chosen `T0`. Only segments
//! `0..=n_max` are realized and the last one is stretched to end at `T0`.

use crate::error::{Error, Result};

/// Riemann zeta `Σ_{i≥1} i^{-p}` to absolute accuracy `tol`.
///
/// The tail past `N` is replaced by `∫_{N+1/2}^∞ x^{-p} dx`. Since `x^{-p}`
/// is convex the midpoint rule over-estimates the tail, by at most
/// `p (N − 1/2)^{-p-1} / 24`; `N` is the smallest power of two meeting `tol`.
pub fn zeta(p: f64, tol: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Divergence { p });
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let bound = |n: f64| p * (n - 0.5).powf(-p - 1.0) / 24.0;
    let mut n = 8.0_f64;
    while bound(n) > tol {
        n *= 2.0;
        if n > 1e12 {
            return Err(Error::Domain(format!(
                "zeta({p}) cannot reach tolerance {tol}"
            )));
        }
    }
    let count = n as u64;
    let head: f64 = (1..=count).rev().map(|i| (i as f64).powf(-p)).sum();
    let tail = (n + 0.5).powf(1.0 - p) / (p - 1.0);
    Ok(head + tail)
}

/// Tolerance used for the Case I horizon.
pub const HORIZON_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Case {
    /// `t_{n+1} − t_n = (n+1)^{-p}`, `λ_n = n^{2(p+1)} + λ0`, `T0 = ζ(p)`.
    ZetaHorizon { p: f64 },
    /// `t_n = T0 − T0/(n+1)`, `λ_n = n^6 + λ0`.
    Prescribed,
    /// Caller-supplied times and gains.
    Custom,
}

/// Segment times, gains, and partial sums `s_n = Σ_{j<n} λ_j (t_{j+1} − t_j)`.
///
/// `t` has `n_max + 2` entries, the last one being `T0`; `lambda` has
/// `n_max + 1`; `s` has `n_max + 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub case: Case,
    pub horizon: f64,
    pub lambda0: f64,
    pub t: Vec<f64>,
    pub lambda: Vec<f64>,
    pub s: Vec<f64>,
    pub n_max: usize,
    pub final_segment_extended: bool,
}

fn partial_sums(t: &[f64], lambda: &[f64]) -> Vec<f64> {
    let mut s = Vec::with_capacity(t.len());
    s.push(0.0);
    let mut acc = 0.0;
    for (n, l) in lambda.iter().enumerate() {
        acc += l * (t[n + 1] - t[n]);
        s.push(acc);
    }
    s
}

fn check_lambda0(lambda0: f64) -> Result<()> {
    if !(lambda0 > 0.0 && lambda0.is_finite()) {
        return Err(Error::Domain(format!(
            "lambda0 must be positive, got {lambda0}"
        )));
    }
    Ok(())
}

impl Schedule {
    /// Riemann-zeta schedule with segments `0..=n_max`.
    pub fn case1(p: f64, lambda0: f64, n_max: usize) -> Result<Self> {
        let horizon = zeta(p, HORIZON_TOL)?;
        check_lambda0(lambda0)?;
        if n_max < 1 {
            return Err(Error::Domain("n_max must be at least 1".into()));
        }
        let mut t = vec![0.0];
        for n in 0..n_max {
            let next = t[n] + ((n + 1) as f64).powf(-p);
            t.push(next);
        }
        t.push(horizon);
        let lambda = (0..=n_max)
            .map(|n| (n as f64).powf(2.0 * (p + 1.0)) + lambda0)
            .collect::<Vec<_>>();
        Self::assemble(Case::ZetaHorizon { p }, horizon, lambda0, t, lambda, true)
    }

    /// Prescribed-time schedule on `[0, horizon)` with segments `0..=n_max`.
    pub fn case2(horizon: f64, lambda0: f64, n_max: usize) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::Domain(format!("T0 must be positive, got {horizon}")));
        }
        check_lambda0(lambda0)?;
        if n_max < 1 {
            return Err(Error::Domain("n_max must be at least 1".into()));
        }
        let mut t: Vec<f64> = (0..=n_max)
            .map(|n| horizon - horizon / (n + 1) as f64)
            .collect();
        t.push(horizon);
        let lambda = (0..=n_max).map(|n| (n as f64).powi(6) + lambda0).collect();
        Self::assemble(Case::Prescribed, horizon, lambda0, t, lambda, true)
    }

    /// Arbitrary schedule; `t` must start at 0, be strictly increasing and
    /// have one more entry than `lambda`. Its last entry is the horizon.
    pub fn custom(t: Vec<f64>, lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() || t.len() != lambda.len() + 1 {
            return Err(Error::Shape {
                expected: lambda.len() + 1,
                got: t.len(),
            });
        }
        let lambda0 = lambda.iter().cloned().fold(f64::INFINITY, f64::min);
        check_lambda0(lambda0)?;
        let horizon = *t.last().expect("non-empty");
        Self::assemble(Case::Custom, horizon, lambda0, t, lambda, false)
    }

    fn assemble(
        case: Case,
        horizon: f64,
        lambda0: f64,
        t: Vec<f64>,
        lambda: Vec<f64>,
        final_segment_extended: bool,
    ) -> Result<Self> {
        if t[0] != 0.0 || t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain(
                "segment times must start at 0 and increase strictly".into(),
            ));
        }
        let s = partial_sums(&t, &lambda);
        Ok(Self {
            case,
            horizon,
            lambda0,
            n_max: lambda.len() - 1,
            t,
            lambda,
            s,
            final_segment_extended,
        })
    }

    pub fn segment_count(&self) -> usize {
        self.lambda.len()
    }

    pub fn segment_bounds(&self, n: usize) -> (f64, f64) {
        (self.t[n], self.t[n + 1])
    }

    /// The `n` with `t_n ≤ time < t_{n+1}`; the gain switches at `t_n`.
    pub fn segment_of(&self, time: f64) -> Result<usize> {
        if !(time >= 0.0 && time < self.horizon) {
            return Err(Error::Horizon {
                time,
                horizon: self.horizon,
            });
        }
        let k = self.t.partition_point(|&tn| tn <= time);
        Ok((k - 1).min(self.n_max))
    }

    /// Gap lengths and gains of the untruncated family, used for the
    /// asymptotic diagnostics. `None` for custom schedules.
    fn family_gap(&self, n: usize) -> Option<f64> {
        match self.case {
            Case::ZetaHorizon { p } => Some(((n + 1) as f64).powf(-p)),
            Case::Prescribed => {
                let t0 = self.horizon;
                Some(t0 / (n + 1) as f64 - t0 / (n + 2) as f64)
            }
            Case::Custom => None,
        }
    }

    fn family_lambda(&self, n: usize) -> Option<f64> {
        match self.case {
            Case::ZetaHorizon { p } => Some((n as f64).powf(2.0 * (p + 1.0)) + self.lambda0),
            Case::Prescribed => Some((n as f64).powi(6) + self.lambda0),
            Case::Custom => None,
        }
    }

    /// Rapid-convergence ratios `r_n = (t_{n+1} − t_n) λ_n / sqrt(λ_{n+1})`
    /// and limit ratios `q_n = s_n / (n + sqrt(λ_{n+1}))`.
    ///
    /// Families are evaluated without the final-segment extension for
    /// `n = 0..=n_max`; custom schedules use their stored entries.
    pub fn check_rapid_convergence(&self, gamma0: f64) -> ConvergenceReport {
        let (gaps, lambdas): (Vec<f64>, Vec<f64>) = match self.case {
            Case::Custom => (
                self.t.windows(2).map(|w| w[1] - w[0]).collect(),
                self.lambda.clone(),
            ),
            _ => (
                (0..=self.n_max + 1)
                    .map(|n| self.family_gap(n).expect("family"))
                    .collect(),
                (0..=self.n_max + 1)
                    .map(|n| self.family_lambda(n).expect("family"))
                    .collect(),
            ),
        };
        let count = lambdas.len() - 1;
        let mut r = Vec::with_capacity(count);
        let mut q = Vec::with_capacity(count);
        let mut s = 0.0;
        for n in 0..count {
            let next = lambdas[n + 1].sqrt();
            r.push(gaps[n] * lambdas[n] / next);
            q.push(s / (n as f64 + next));
            s += lambdas[n] * gaps[n];
        }
        let first_satisfied = r.iter().position(|&v| v >= gamma0);
        let satisfied_from = match r.iter().rposition(|&v| v < gamma0) {
            None if !r.is_empty() => Some(0),
            Some(k) if k + 1 < r.len() => Some(k + 1),
            _ => None,
        };
        let q_increasing_from = (self.lambda0.ceil() as usize).max(1);
        let q_increasing = q.len() > q_increasing_from + 1
            && q[q_increasing_from..].windows(2).all(|w| w[1] > w[0]);
        ConvergenceReport {
            gamma0,
            r,
            q,
            first_satisfied,
            satisfied_from,
            q_increasing_from,
            q_increasing,
        }
    }
}

/// Diagnostic of the gain-growth conditions; not a gate.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub gamma0: f64,
    pub r: Vec<f64>,
    pub q: Vec<f64>,
    /// First `n` with `r_n ≥ γ0`.
    pub first_satisfied: Option<usize>,
    /// Smallest `m` with `r_n ≥ γ0` for every computed `n ≥ m`.
    pub satisfied_from: Option<usize>,
    /// `max(1, ⌈λ0⌉)`, where the growth lower bounds start to hold.
    pub q_increasing_from: usize,
    /// `q_n` strictly increasing for `n ≥ q_increasing_from`.
    pub q_increasing: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zeta_closed_forms() {
        assert!((zeta(2.0, 1e-10).unwrap() - PI * PI / 6.0).abs() < 1e-9);
        assert!((zeta(4.0, 1e-10).unwrap() - PI.powi(4) / 90.0).abs() < 1e-9);
        assert!((zeta(1.9, 1e-10).unwrap() - 1.7497).abs() < 1e-4);
        assert!((zeta(1.9, 1e-10).unwrap() - 1.749_746_435_125_06).abs() < 1e-9);
    }

    #[test]
    fn zeta_diverges() {
        assert!(matches!(zeta(1.0, 1e-6), Err(Error::Divergence { .. })));
        assert!(matches!(zeta(0.5, 1e-6), Err(Error::Divergence { .. })));
        assert!(matches!(
            Schedule::case1(1.0, 3.5, 2),
            Err(Error::Divergence { .. })
        ));
    }

    #[test]
    fn case1_values() {
        let s = Schedule::case1(1.9, 3.5, 2).unwrap();
        assert_eq!(s.t.len(), 4);
        assert_eq!(s.t[0], 0.0);
        assert_eq!(s.t[1], 1.0);
        assert!((s.t[2] - 1.2679).abs() < 1e-4);
        assert_eq!(s.t[3], s.horizon);
        assert!((s.horizon - 1.7497).abs() < 1e-4);
        assert_eq!(s.lambda[0], 3.5);
        assert_eq!(s.lambda[1], 4.5);
        assert!((s.lambda[2] - 59.2152).abs() < 1e-4);
    }

    #[test]
    fn case2_values() {
        let s = Schedule::case2(1.5, 3.5, 2).unwrap();
        assert_eq!(s.t, vec![0.0, 0.75, 1.0, 1.5]);
        assert_eq!(s.lambda, vec![3.5, 4.5, 67.5]);
        let one = Schedule::case2(1.5, 3.5, 1).unwrap();
        assert_eq!(one.t, vec![0.0, 0.75, 1.5]);
    }

    #[test]
    fn partial_sums_fold() {
        let s = Schedule::case1(1.9, 3.5, 6).unwrap();
        assert_eq!(s.s[0], 0.0);
        let mut acc = 0.0;
        for n in 0..s.lambda.len() {
            acc += s.lambda[n] * (s.t[n + 1] - s.t[n]);
            assert_eq!(acc, s.s[n + 1]);
        }
        assert!(s.s.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn segments() {
        let s = Schedule::case1(1.9, 3.5, 2).unwrap();
        assert_eq!(s.segment_of(0.0).unwrap(), 0);
        assert_eq!(s.segment_of(1.1).unwrap(), 1);
        assert_eq!(s.segment_of(1.0).unwrap(), 1);
        assert_eq!(s.segment_of(s.horizon - 1e-9).unwrap(), 2);
        assert!(matches!(
            s.segment_of(s.horizon),
            Err(Error::Horizon { .. })
        ));
        assert!(s.segment_of(-1e-3).is_err());
    }

    #[test]
    fn rapid_convergence_bounds() {
        let p = 1.9;
        let s = Schedule::case1(p, 3.5, 40).unwrap();
        let rep = s.check_rapid_convergence(1.0);
        assert!(rep.q_increasing);
        assert_eq!(rep.first_satisfied, Some(0));
        assert!(rep.satisfied_from.unwrap() > 1);
        for n in 4..rep.q.len() {
            let nf = n as f64;
            let lower = (nf - 1.0).powf(2.0 * (p + 1.0))
                / (2.0 * 2f64.sqrt() * (nf + 1.0).powf(2.0 * p + 1.0));
            assert!(rep.q[n] >= lower, "n = {n}");
        }

        let t0 = 1.5;
        let s = Schedule::case2(t0, 3.5, 40).unwrap();
        let rep = s.check_rapid_convergence(1.0);
        assert!(rep.q_increasing);
        for n in 4..rep.q.len() {
            let nf = n as f64;
            let lower = t0 * (nf - 1.0).powi(6) / (2.0 * 2f64.sqrt() * (nf + 1.0).powi(5));
            assert!(rep.q[n] >= lower, "n = {n}");
        }
    }

    #[test]
    fn degenerate_schedule_fails() {
        let n = 30;
        let mut t = vec![0.0];
        for k in 0..n {
            let next = t[k] + 1.0 / ((k + 1) as f64).powi(2);
            t.push(next);
        }
        let s = Schedule::custom(t, vec![3.5; n]).unwrap();
        let rep = s.check_rapid_convergence(1.0);
        assert_eq!(rep.first_satisfied, Some(0));
        assert_eq!(rep.satisfied_from, None);
        assert!(rep.r.last().unwrap() < &0.01);
        assert!(rep.r.windows(2).all(|w| w[1] < w[0]));
    }
}
