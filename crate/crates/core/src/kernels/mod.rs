//! Backstepping kernels for constant coefficients.
//!
//! The direct kernel `k` solves
//! `a k_xx − a k_yy = (λ + c) k` on `0 ≤ y ≤ x ≤ 1` with
//! `k(x, x) = −(λ + c) x / (2a)` and `k(x, 0) = 0`; the inverse kernel `l`
//! solves the same problem with the sign of the reaction term flipped.
//! Both have closed forms in `I1` and `J1`.

mod bessel;
mod residual;
mod transform;

use std::io::{self, Write};

pub use bessel::{bessel_i1, bessel_j1, SMALL_ARG};
pub use residual::{kernel_residual, KernelResiduals, Residual};
pub use transform::{direct_transform, inverse_transform, volterra_weights};

use crate::error::{check_len, Error, Result};
use crate::pde::Grid;
use crate::trace::fmt_f64;

/// Gain `λ` and constant plant coefficients `a`, `c` of one kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub lambda: f64,
    pub a: f64,
    pub c: f64,
}

impl KernelParams {
    pub fn new(lambda: f64, a: f64, c: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain(format!(
                "gain lambda must be positive, got {lambda}"
            )));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!(
                "diffusion a must be positive, got {a}"
            )));
        }
        if !c.is_finite() {
            return Err(Error::Domain(format!("reaction c must be finite, got {c}")));
        }
        if lambda + c <= 0.0 {
            return Err(Error::Unsupported(format!(
                "closed-form kernels need lambda + c > 0, got {}",
                lambda + c
            )));
        }
        Ok(Self { lambda, a, c })
    }

    /// `(λ + c) / a`.
    pub fn rate(&self) -> f64 {
        (self.lambda + self.c) / self.a
    }
}

fn check_triangle(x: f64, y: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) || !(0.0..=x).contains(&y) {
        return Err(Error::Domain(format!(
            "kernel point (x, y) = ({x}, {y}) is outside 0 <= y <= x <= 1"
        )));
    }
    Ok(())
}

fn bessel_arg(rate: f64, x: f64, y: f64) -> f64 {
    (rate * (x * x - y * y)).max(0.0).sqrt()
}

/// `k(x, y) = −((λ+c)/a) · y · I1(z)/z`, `z = sqrt(((λ+c)/a)(x² − y²))`.
pub fn kernel_k_const(x: f64, y: f64, p: &KernelParams) -> Result<f64> {
    check_triangle(x, y)?;
    let rate = p.rate();
    Ok(-rate * y * bessel::i1_over_z(bessel_arg(rate, x, y))?)
}

/// `l(x, y) = −((λ+c)/a) · y · J1(z)/z` with the same `z` as [`kernel_k_const`].
pub fn kernel_l_const(x: f64, y: f64, p: &KernelParams) -> Result<f64> {
    check_triangle(x, y)?;
    let rate = p.rate();
    Ok(-rate * y * bessel::j1_over_z(bessel_arg(rate, x, y))?)
}

/// `k` and `l` sampled on the lower triangle `y_j ≤ x_i` of a grid.
///
/// Rows are packed: row `i` holds `i + 1` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelField {
    grid: Grid,
    a: f64,
    lambda_plus_c: f64,
    params: Option<KernelParams>,
    k: Vec<f64>,
    l: Vec<f64>,
}

fn row_offset(i: usize) -> usize {
    i * (i + 1) / 2
}

impl KernelField {
    pub fn build(p: &KernelParams, grid: &Grid) -> Result<Self> {
        let n = grid.len();
        let x = grid.nodes();
        let mut k = Vec::with_capacity(row_offset(n));
        let mut l = Vec::with_capacity(row_offset(n));
        for i in 0..n {
            for j in 0..=i {
                k.push(kernel_k_const(x[i], x[j], p)?);
                l.push(kernel_l_const(x[i], x[j], p)?);
            }
        }
        Ok(Self {
            grid: grid.clone(),
            a: p.a,
            lambda_plus_c: p.lambda + p.c,
            params: Some(*p),
            k,
            l,
        })
    }

    /// Identically zero kernels, i.e. `λ + c = 0`; both transforms are the identity.
    pub fn zero(grid: &Grid, a: f64) -> Self {
        let size = row_offset(grid.len());
        Self {
            grid: grid.clone(),
            a,
            lambda_plus_c: 0.0,
            params: None,
            k: vec![0.0; size],
            l: vec![0.0; size],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn params(&self) -> Option<&KernelParams> {
        self.params.as_ref()
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn lambda_plus_c(&self) -> f64 {
        self.lambda_plus_c
    }

    pub fn k_row(&self, i: usize) -> &[f64] {
        &self.k[row_offset(i)..row_offset(i + 1)]
    }

    pub fn l_row(&self, i: usize) -> &[f64] {
        &self.l[row_offset(i)..row_offset(i + 1)]
    }

    pub fn k(&self, i: usize, j: usize) -> f64 {
        debug_assert!(j <= i);
        self.k[row_offset(i) + j]
    }

    pub fn l(&self, i: usize, j: usize) -> f64 {
        debug_assert!(j <= i);
        self.l[row_offset(i) + j]
    }
}

/// The controller gain `k(1, ·)` with quadrature weights (the same
/// end-corrected rule as the transforms), so that [`GainRow::apply`]
/// approximates `∫_0^1 k(1, y) φ(y) dy`.
#[derive(Debug, Clone, PartialEq)]
pub struct GainRow {
    pub lambda: f64,
    pub nodes: Vec<f64>,
    pub samples: Vec<f64>,
    pub quad_weights: Vec<f64>,
    weighted: Vec<f64>,
}

impl GainRow {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn apply(&self, field: &[f64]) -> Result<f64> {
        check_len(self.weighted.len(), field.len())?;
        Ok(self.weighted.iter().zip(field).map(|(g, v)| g * v).sum())
    }

    /// Two columns `y,k1y` after a one-line header.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "y,k1y")?;
        for (y, k) in self.nodes.iter().zip(&self.samples) {
            writeln!(out, "{},{}", fmt_f64(*y), fmt_f64(*k))?;
        }
        Ok(())
    }
}

pub fn gain_row(p: &KernelParams, grid: &Grid) -> Result<GainRow> {
    let samples = grid
        .nodes()
        .iter()
        .map(|&y| kernel_k_const(1.0, y, p))
        .collect::<Result<Vec<_>>>()?;
    let h = grid.h();
    let quad_weights: Vec<f64> = volterra_weights(grid.len()).iter().map(|w| w * h).collect();
    let weighted = samples
        .iter()
        .zip(&quad_weights)
        .map(|(k, w)| k * w)
        .collect();
    Ok(GainRow {
        lambda: p.lambda,
        nodes: grid.nodes().to_vec(),
        samples,
        quad_weights,
        weighted,
    })
}
