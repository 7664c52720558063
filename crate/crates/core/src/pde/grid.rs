use crate::error::{check_len, Error, Result};

/// Uniform mesh on `[0, 1]` with composite-trapezoid weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    h: f64,
    x: Vec<f64>,
    weights: Vec<f64>,
}

impl Grid {
    pub fn uniform(n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::Config(format!(
                "grid needs at least 3 points, got {n_points}"
            )));
        }
        let h = 1.0 / (n_points - 1) as f64;
        let mut x: Vec<f64> = (0..n_points).map(|i| i as f64 * h).collect();
        x[n_points - 1] = 1.0;
        let mut weights = vec![h; n_points];
        weights[0] = 0.5 * h;
        weights[n_points - 1] = 0.5 * h;
        Ok(Self { h, x, weights })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Mesh spacing.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Trapezoid quadrature of `values` over `[0, 1]`.
    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        check_len(self.len(), values.len())?;
        Ok(self.weights.iter().zip(values).map(|(w, v)| w * v).sum())
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.x.iter().map(|&x| f(x)).collect()
    }

    /// True when `other` has the same number of nodes.
    pub fn matches(&self, other: &Grid) -> bool {
        self.len() == other.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_weights() {
        let g = Grid::uniform(11).unwrap();
        assert_eq!(g.nodes()[0], 0.0);
        assert_eq!(g.nodes()[10], 1.0);
        let total: f64 = g.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert!((g.h() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn too_small() {
        assert!(matches!(Grid::uniform(2), Err(Error::Config(_))));
    }

    #[test]
    fn integrate_shape_mismatch() {
        let g = Grid::uniform(5).unwrap();
        assert!(matches!(
            g.integrate(&[1.0; 4]),
            Err(Error::Shape {
                expected: 5,
                got: 4
            })
        ));
    }
}
