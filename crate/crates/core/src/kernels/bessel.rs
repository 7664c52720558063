//! First-order Bessel functions from their power series.
//!
//! Both are entire, so the series converges for every finite argument. The
//! alternating `J1` series loses roughly `log10(I1(z))` digits to
//! cancellation, which stays below 1e-10 absolute for `z < 12`.

use crate::error::{Error, Result};

const REL_TOL: f64 = 1e-15;
const ABS_FLOOR: f64 = 1e-300;
const MAX_TERMS: usize = 1000;

fn first_order_series(z: f64, alternating: bool) -> Result<f64> {
    if !z.is_finite() || z < 0.0 {
        return Err(Error::Domain(format!(
            "Bessel argument must be finite and >= 0, got {z}"
        )));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let half = 0.5 * z;
    let q = if alternating {
        -half * half
    } else {
        half * half
    };
    let mut term = half;
    let mut sum = half;
    for m in 1..MAX_TERMS {
        let m = m as f64;
        term *= q / (m * (m + 1.0));
        sum += term;
        if term.abs() <= (REL_TOL * sum.abs()).max(ABS_FLOOR) {
            break;
        }
    }
    Ok(sum)
}

/// Modified Bessel function `I1(z) = Σ (z/2)^(2m+1) / (m! (m+1)!)`.
pub fn bessel_i1(z: f64) -> Result<f64> {
    first_order_series(z, false)
}

/// Bessel function `J1(z) = Σ (-1)^m (z/2)^(2m+1) / (m! (m+1)!)`.
pub fn bessel_j1(z: f64) -> Result<f64> {
    first_order_series(z, true)
}

/// Below this argument `I1(z)/z` and `J1(z)/z` are replaced by their limit 1/2.
pub const SMALL_ARG: f64 = 1e-6;

pub(crate) fn i1_over_z(z: f64) -> Result<f64> {
    if z < SMALL_ARG {
        Ok(0.5)
    } else {
        Ok(bessel_i1(z)? / z)
    }
}

pub(crate) fn j1_over_z(z: f64) -> Result<f64> {
    if z < SMALL_ARG {
        Ok(0.5)
    } else {
        Ok(bessel_j1(z)? / z)
    }
}
