mod common;

use backstep_core::pde::{l2_norm, simulate_open_loop, step, OpenLoopBoundary};
use backstep_core::{Coefficients, DisturbanceSpec, Field, Grid};
use proptest::prelude::*;
use std::f64::consts::PI;

fn heat_run(n: usize, dt: f64, t_end: f64) -> (Grid, Vec<f64>) {
    let grid = Grid::uniform(n).unwrap();
    let co = Coefficients::new(1.0, 0.0).unwrap();
    let mut u = Field::from_fn(&grid, 0.0, |x| (PI * x).sin()).unwrap();
    let steps = (t_end / dt).round() as usize;
    for _ in 0..steps {
        u = step(&u, dt, &co, 0.0, 0.0, None, &grid).unwrap();
    }
    (grid, u.values)
}

fn heat_error(n: usize, dt: f64) -> f64 {
    let (grid, u) = heat_run(n, dt, 0.1);
    let exact = grid.sample(|x| (-PI * PI * 0.1).exp() * (PI * x).sin());
    let d: Vec<f64> = u.iter().zip(&exact).map(|(a, b)| a - b).collect();
    l2_norm(&d, &grid).unwrap()
}

#[test]
fn heat_mode_decays_at_the_right_rate() {
    let (grid, u) = heat_run(201, 1e-4, 0.1);
    let expected = (-PI * PI * 0.1).exp() / 2f64.sqrt();
    let got = l2_norm(&u, &grid).unwrap();
    assert!((got / expected - 1.0).abs() < 0.01, "{got} vs {expected}");
}

#[test]
fn refinement_reduces_heat_error() {
    let coarse = heat_error(51, 4e-4);
    let fine = heat_error(101, 2e-4);
    assert!(coarse / fine >= 2.0, "{coarse} -> {fine}");
}

#[test]
fn linear_steady_state() {
    let grid = Grid::uniform(101).unwrap();
    let co = Coefficients::new(1.0, 0.0).unwrap();
    let dist = DisturbanceSpec::zero().with_d1(|_| 1.0);
    let u0 = Field::zeros(&grid, 0.0);
    let trace = simulate_open_loop(
        &grid,
        &co,
        &dist,
        &u0,
        2.0,
        1e-3,
        OpenLoopBoundary::default(),
        100,
    )
    .unwrap();
    let last = *trace.l2_u.last().unwrap();
    assert!((last - 1.0 / 3f64.sqrt()).abs() < 1e-4, "{last}");
}

fn diff_norm(a: &[f64], b: &[f64], grid: &Grid) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    l2_norm(&d, grid).unwrap()
}

#[test]
fn self_convergence_in_time() {
    let runs: Vec<Vec<f64>> = [4e-4, 2e-4, 1e-4]
        .iter()
        .map(|&dt| heat_run(101, dt, 0.1).1)
        .collect();
    let grid = Grid::uniform(101).unwrap();
    let e1 = diff_norm(&runs[0], &runs[1], &grid);
    let e2 = diff_norm(&runs[1], &runs[2], &grid);
    let order = (e1 / e2).log2();
    assert!(order >= 0.95, "time order {order}");
}

#[test]
fn self_convergence_in_space() {
    // nodes of the coarse grid are shared by the finer ones
    let sizes = [21, 41, 81];
    let runs: Vec<Vec<f64>> = sizes.iter().map(|&n| heat_run(n, 1e-4, 0.1).1).collect();
    let coarse = Grid::uniform(21).unwrap();
    let restrict =
        |u: &[f64], stride: usize| -> Vec<f64> { u.iter().step_by(stride).copied().collect() };
    let e1 = diff_norm(&runs[0], &restrict(&runs[1], 2), &coarse);
    let e2 = diff_norm(&restrict(&runs[1], 2), &restrict(&runs[2], 4), &coarse);
    let order = (e1 / e2).log2();
    assert!(order >= 1.95, "space order {order}");
}

fn open_loop_ratio(u0: impl Fn(f64) -> f64, t_end: f64) -> f64 {
    let grid = Grid::uniform(101).unwrap();
    let co = Coefficients::new(1.0, 24.0).unwrap();
    let u0 = Field::from_fn(&grid, 0.0, u0).unwrap();
    let trace = simulate_open_loop(
        &grid,
        &co,
        &DisturbanceSpec::zero(),
        &u0,
        t_end,
        1e-4,
        OpenLoopBoundary::default(),
        100,
    )
    .unwrap();
    trace.l2_u.last().unwrap() / trace.l2_u[0]
}

#[test]
fn first_mode_grows_in_open_loop() {
    // semi-discrete rate 24 - pi^2 (slightly less after backward Euler)
    let ratio = open_loop_ratio(|x| (PI * x).sin(), 0.5);
    let rate = ratio.ln() / 0.5;
    assert!(ratio >= 10.0);
    assert!((rate - (24.0 - PI * PI)).abs() < 0.2, "rate {rate}");
}

#[test]
fn odd_datum_only_excites_stable_modes() {
    // -4 sin(15(x - 1/2)) is odd about x = 1/2, so it has no sin(pi x) component
    let datum = |x: f64| -4.0 * (15.0 * (x - 0.5)).sin();
    assert!(open_loop_ratio(datum, 0.5) < 1e-3);
    // round-off along the unstable mode eventually takes over
    assert!(open_loop_ratio(datum, 3.0) > 10.0);
}

#[test]
fn zero_reaction_open_loop_is_dissipative() {
    let grid = Grid::uniform(101).unwrap();
    let co = Coefficients::new(1.0, 0.0).unwrap();
    let u0 = common::initial_datum(&grid, 1.0);
    let trace = simulate_open_loop(
        &grid,
        &co,
        &DisturbanceSpec::zero(),
        &u0,
        0.2,
        1e-4,
        OpenLoopBoundary::default(),
        10,
    )
    .unwrap();
    assert!(trace.l2_u.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
}

fn profile() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, 21)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn maximum_principle(mut u in profile(), left in -5.0f64..5.0, right in -5.0f64..5.0,
                         c in -10.0f64..=0.0, dt in 1e-4f64..1e-1) {
        let grid = Grid::uniform(21).unwrap();
        let co = Coefficients::new(1.0, c).unwrap();
        u[0] = left;
        u[20] = right;
        let hi = u.iter().cloned().fold(0.0_f64, f64::max);
        let lo = u.iter().cloned().fold(0.0_f64, f64::min);
        let mut f = Field::new(u, 0.0).unwrap();
        for _ in 0..5 {
            f = step(&f, dt, &co, left, right, None, &grid).unwrap();
        }
        prop_assert!(f.values.iter().all(|&v| v <= hi + 1e-12 && v >= lo - 1e-12));
    }

    #[test]
    fn step_is_linear(u in profile(), w in profile(), alpha in -3.0f64..3.0, beta in -3.0f64..3.0,
                      bl in -1.0f64..1.0, br in -1.0f64..1.0) {
        let grid = Grid::uniform(21).unwrap();
        let co = Coefficients::new(1.0, 24.0).unwrap();
        let dt = 1e-3;
        let su = step(&Field::new(u.clone(), 0.0).unwrap(), dt, &co, bl, br, None, &grid).unwrap();
        let sw = step(&Field::new(w.clone(), 0.0).unwrap(), dt, &co, 0.0, 0.0, None, &grid).unwrap();
        let mix: Vec<f64> = u.iter().zip(&w).map(|(a, b)| alpha * a + beta * b).collect();
        let sm = step(&Field::new(mix, 0.0).unwrap(), dt, &co, alpha * bl, alpha * br, None, &grid).unwrap();
        for i in 0..21 {
            let expect = alpha * su.values[i] + beta * sw.values[i];
            prop_assert!((sm.values[i] - expect).abs() <= 1e-10 * (1.0 + expect.abs()));
        }
    }
}
