use std::fmt;
use std::sync::Arc;

use super::Grid;

type Forcing = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type Signal = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// In-domain forcing `f(x, t)` and Dirichlet boundary disturbances
/// `d0(t)`, `d1(t)`. Absent components are identically zero.
#[derive(Clone, Default)]
pub struct DisturbanceSpec {
    f: Option<Forcing>,
    d0: Option<Signal>,
    d1: Option<Signal>,
}

impl fmt::Debug for DisturbanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DisturbanceSpec")
            .field("f", &self.f.is_some())
            .field("d0", &self.d0.is_some())
            .field("d1", &self.d1.is_some())
            .finish()
    }
}

impl DisturbanceSpec {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `d1(t) = amplitude * sin(omega * t)`, everything else zero.
    pub fn boundary_sine(amplitude: f64, omega: f64) -> Self {
        if amplitude == 0.0 {
            return Self::zero();
        }
        Self::zero().with_d1(move |t| amplitude * (omega * t).sin())
    }

    pub fn with_f(mut self, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.f = Some(Arc::new(f));
        self
    }

    pub fn with_d0(mut self, d0: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d0 = Some(Arc::new(d0));
        self
    }

    pub fn with_d1(mut self, d1: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d1 = Some(Arc::new(d1));
        self
    }

    /// Every component multiplied by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            f: self
                .f
                .clone()
                .map(|f| -> Forcing { Arc::new(move |x, t| alpha * f(x, t)) }),
            d0: self
                .d0
                .clone()
                .map(|d| -> Signal { Arc::new(move |t| alpha * d(t)) }),
            d1: self
                .d1
                .clone()
                .map(|d| -> Signal { Arc::new(move |t| alpha * d(t)) }),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_none() && self.d0.is_none() && self.d1.is_none()
    }

    pub fn has_forcing(&self) -> bool {
        self.f.is_some()
    }

    pub fn f(&self, x: f64, t: f64) -> f64 {
        self.f.as_ref().map_or(0.0, |f| f(x, t))
    }

    pub fn d0(&self, t: f64) -> f64 {
        self.d0.as_ref().map_or(0.0, |d| d(t))
    }

    pub fn d1(&self, t: f64) -> f64 {
        self.d1.as_ref().map_or(0.0, |d| d(t))
    }

    pub fn monitor(&self) -> DisturbanceMonitor<'_> {
        DisturbanceMonitor {
            dist: self,
            sups: SupNorms::default(),
        }
    }
}

/// Running sup-norms `‖f‖∞`, `‖d0‖∞`, `‖d1‖∞` over the queried samples.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SupNorms {
    pub f: f64,
    pub d0: f64,
    pub d1: f64,
}

impl SupNorms {
    pub fn total(&self) -> f64 {
        self.f + self.d0 + self.d1
    }

    pub fn max(&self) -> f64 {
        self.f.max(self.d0).max(self.d1)
    }
}

/// Queries a [`DisturbanceSpec`] and records the sup-norms of everything
/// it hands out. The trackers never decrease.
#[derive(Debug)]
pub struct DisturbanceMonitor<'a> {
    dist: &'a DisturbanceSpec,
    sups: SupNorms,
}

impl DisturbanceMonitor<'_> {
    pub fn d0(&mut self, t: f64) -> f64 {
        let v = self.dist.d0(t);
        self.sups.d0 = self.sups.d0.max(v.abs());
        v
    }

    pub fn d1(&mut self, t: f64) -> f64 {
        let v = self.dist.d1(t);
        self.sups.d1 = self.sups.d1.max(v.abs());
        v
    }

    /// `f(·, t)` sampled on the grid, or `None` without forcing.
    pub fn forcing(&mut self, grid: &Grid, t: f64) -> Option<Vec<f64>> {
        let f = self.dist.f.as_ref()?;
        let values = grid.sample(|x| f(x, t));
        let sup = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        self.sups.f = self.sups.f.max(sup);
        Some(values)
    }

    pub fn sups(&self) -> SupNorms {
        self.sups
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_spec_reports_zero() {
        let dist = DisturbanceSpec::zero();
        let grid = Grid::uniform(5).unwrap();
        let mut m = dist.monitor();
        for k in 0..10 {
            let t = k as f64 * 0.1;
            assert_eq!(m.d0(t), 0.0);
            assert_eq!(m.d1(t), 0.0);
            assert!(m.forcing(&grid, t).is_none());
        }
        assert_eq!(m.sups(), SupNorms::default());
    }

    #[test]
    fn trackers_monotone() {
        let dist = DisturbanceSpec::boundary_sine(2.0, 30.0);
        let mut m = dist.monitor();
        let mut last = 0.0;
        for k in 0..200 {
            m.d1(k as f64 * 1e-2);
            assert!(m.sups().d1 >= last);
            last = m.sups().d1;
        }
        assert!(last <= 2.0 && last > 1.99);
    }

    #[test]
    fn scaling() {
        let dist = DisturbanceSpec::zero()
            .with_f(|x, t| x + t)
            .with_d0(|t| t)
            .with_d1(|t| 2.0 * t);
        let s = dist.scaled(-3.0);
        assert_eq!(s.f(0.5, 1.0), -4.5);
        assert_eq!(s.d0(2.0), -6.0);
        assert_eq!(s.d1(2.0), -12.0);
    }
}
