use crate::error::{check_len, Error, Result};

/// LU factors of a tridiagonal matrix (Thomas algorithm, no pivoting).
///
/// Factored once and reused for every step that shares `dt`.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    sub: Vec<f64>,
    upper: Vec<f64>,
    inv_pivot: Vec<f64>,
}

impl Tridiagonal {
    /// `sub[i]` multiplies `x[i-1]` in row `i` (`sub[0]` unused), `sup[i]`
    /// multiplies `x[i+1]` (last entry unused).
    pub fn factor(sub: &[f64], diag: &[f64], sup: &[f64]) -> Result<Self> {
        let n = diag.len();
        check_len(n, sub.len())?;
        check_len(n, sup.len())?;
        let mut upper = vec![0.0; n];
        let mut inv_pivot = vec![0.0; n];
        let scale = diag.iter().fold(0.0_f64, |m, d| m.max(d.abs())).max(1.0);
        for i in 0..n {
            let pivot = if i == 0 {
                diag[0]
            } else {
                diag[i] - sub[i] * upper[i - 1]
            };
            if !pivot.is_finite() || pivot.abs() <= 1e-14 * scale {
                return Err(Error::Solver(format!("zero pivot {pivot:e} in row {i}")));
            }
            inv_pivot[i] = 1.0 / pivot;
            upper[i] = sup[i] * inv_pivot[i];
        }
        Ok(Self {
            sub: sub.to_vec(),
            upper,
            inv_pivot,
        })
    }

    pub fn len(&self) -> usize {
        self.inv_pivot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv_pivot.is_empty()
    }

    /// Solves in place; `rhs` holds the solution on return.
    pub fn solve(&self, rhs: &mut [f64]) -> Result<()> {
        let n = self.len();
        check_len(n, rhs.len())?;
        if n == 0 {
            return Ok(());
        }
        rhs[0] *= self.inv_pivot[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.sub[i] * rhs[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= self.upper[i] * rhs[i + 1];
        }
        Ok(())
    }
}
