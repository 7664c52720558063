#![allow(dead_code)]

use backstep_core::{Coefficients, ControllerConfig, Field, Grid, Schedule};

pub const C: f64 = 24.0;
pub const LAMBDA0: f64 = 3.5;
pub const SIGMA: f64 = 1.0;

pub fn initial_datum(grid: &Grid, scale: f64) -> Field {
    Field::from_fn(grid, 0.0, |x| -4.0 * scale * (15.0 * (x - 0.5)).sin()).unwrap()
}

pub fn case1(n: usize) -> ControllerConfig {
    let s = Schedule::case1(1.9, LAMBDA0, 2).unwrap();
    ControllerConfig::new(
        s,
        SIGMA,
        Coefficients::new(1.0, C).unwrap(),
        Grid::uniform(n).unwrap(),
    )
    .unwrap()
}

pub fn case2(n: usize) -> ControllerConfig {
    let s = Schedule::case2(1.5, LAMBDA0, 2).unwrap();
    ControllerConfig::new(
        s,
        SIGMA,
        Coefficients::new(1.0, C).unwrap(),
        Grid::uniform(n).unwrap(),
    )
    .unwrap()
}

/// Composite Simpson rule with `2m` subintervals on `[a, b]`.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let n = 2 * m;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        acc += if k % 2 == 1 { 4.0 } else { 2.0 } * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// Trapezoid with `n` subintervals, refined once by Richardson extrapolation.
pub fn richardson_trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let trap = |n: usize| {
        let h = (b - a) / n as f64;
        let mut acc = 0.5 * (f(a) + f(b));
        for k in 1..n {
            acc += f(a + k as f64 * h);
        }
        acc * h
    };
    let coarse = trap(n);
    let fine = trap(2 * n);
    (4.0 * fine - coarse) / 3.0
}

pub fn rel_l2(a: &[f64], b: &[f64], grid: &Grid) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let nb = backstep_core::pde::l2_norm(b, grid).unwrap();
    backstep_core::pde::l2_norm(&d, grid).unwrap() / nb
}
