use super::KernelField;
use crate::error::{Error, Result};

/// Max-norm defects of one kernel against its boundary-value problem.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Residual {
    /// PDE defect on interior triangle nodes (centered differences).
    pub interior: f64,
    /// Defect of `2a d/dx k(x,x) + (λ+c)` along the diagonal.
    pub diagonal: f64,
    /// `max |k(x, 0)|`.
    pub boundary: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KernelResiduals {
    pub k: Residual,
    pub l: Residual,
}

fn residual_of(kf: &KernelField, value: impl Fn(usize, usize) -> f64, reaction: f64) -> Residual {
    let n = kf.grid().len();
    let h = kf.grid().h();
    let a = kf.a();
    let inv_h2 = 1.0 / (h * h);

    let mut interior = 0.0_f64;
    for i in 1..n - 1 {
        for j in 1..i {
            let c = value(i, j);
            let xx = (value(i + 1, j) - 2.0 * c + value(i - 1, j)) * inv_h2;
            let yy = (value(i, j + 1) - 2.0 * c + value(i, j - 1)) * inv_h2;
            interior = interior.max((a * (xx - yy) - reaction * c).abs());
        }
    }

    // total derivative along the diagonal: ∂x one-sided forward (x + h, x),
    // ∂y one-sided backward (x, x − h), both second order and inside D
    let mut diagonal = 0.0_f64;
    for i in 2..n.saturating_sub(2) {
        let d = value(i, i);
        let dx = (-3.0 * d + 4.0 * value(i + 1, i) - value(i + 2, i)) / (2.0 * h);
        let dy = (3.0 * d - 4.0 * value(i, i - 1) + value(i, i - 2)) / (2.0 * h);
        diagonal = diagonal.max((2.0 * a * (dx + dy) + kf.lambda_plus_c()).abs());
    }

    let boundary = (0..n).fold(0.0_f64, |m, i| m.max(value(i, 0).abs()));
    Residual {
        interior,
        diagonal,
        boundary,
    }
}

/// Finite-difference residuals of the sampled `k` (reaction `+(λ+c)`) and
/// `l` (reaction `−(λ+c)`) kernel problems.
pub fn kernel_residual(kf: &KernelField) -> Result<KernelResiduals> {
    let n = kf.grid().len();
    if n < 5 {
        return Err(Error::Config(format!(
            "kernel residual needs at least 5 grid points, got {n}"
        )));
    }
    let lc = kf.lambda_plus_c();
    Ok(KernelResiduals {
        k: residual_of(kf, |i, j| kf.k(i, j), lc),
        l: residual_of(kf, |i, j| kf.l(i, j), -lc),
    })
}
