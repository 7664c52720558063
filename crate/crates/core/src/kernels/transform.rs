use super::KernelField;
use crate::error::{check_len, Result};

const GREGORY_END: [f64; 3] = [3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0];

/// Unit-spacing quadrature weights for `points` equispaced nodes.
///
/// Gregory's end-corrected trapezoid rule (fourth order) from six points
/// on; Simpson / three-eighths / trapezoid below that.
pub fn volterra_weights(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        2 => vec![0.5, 0.5],
        3 => vec![1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0],
        4 => vec![3.0 / 8.0, 9.0 / 8.0, 9.0 / 8.0, 3.0 / 8.0],
        5 => vec![1.0 / 3.0, 4.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0],
        n => {
            let mut w = vec![1.0; n];
            for (k, &e) in GREGORY_END.iter().enumerate() {
                w[k] = e;
                w[n - 1 - k] = e;
            }
            w
        }
    }
}

fn volterra_apply(
    h: &[f64],
    kf: &KernelField,
    sign: f64,
    row: impl Fn(&KernelField, usize) -> &[f64],
) -> Result<Vec<f64>> {
    let grid = kf.grid();
    check_len(grid.len(), h.len())?;
    let dx = grid.h();
    let mut out = h.to_vec();
    for (i, o) in out.iter_mut().enumerate().skip(1) {
        let w = volterra_weights(i + 1);
        let integral: f64 = row(kf, i)
            .iter()
            .zip(&w)
            .zip(&h[..=i])
            .map(|((k, w), v)| k * w * v)
            .sum();
        *o += sign * dx * integral;
    }
    Ok(out)
}

/// `h̃(x) = h(x) − ∫_0^x k(x, y) h(y) dy`.
pub fn direct_transform(h: &[f64], kf: &KernelField) -> Result<Vec<f64>> {
    volterra_apply(h, kf, -1.0, KernelField::k_row)
}

/// `h(x) = h̃(x) + ∫_0^x l(x, y) h̃(y) dy`.
pub fn inverse_transform(h_tilde: &[f64], kf: &KernelField) -> Result<Vec<f64>> {
    volterra_apply(h_tilde, kf, 1.0, KernelField::l_row)
}
