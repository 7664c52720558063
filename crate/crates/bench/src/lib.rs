//! Shared fixtures for the benchmarks.

use backstep_core::{Coefficients, ControllerConfig, Field, Grid, Schedule};

/// The reference plant (`a = 1`, `c = 24`) under the three-segment Case II
/// schedule with `T0 = 1.5`.
pub fn reference_controller(n_points: usize) -> ControllerConfig {
    let schedule = Schedule::case2(1.5, 3.5, 2).expect("valid schedule");
    let co = Coefficients::new(1.0, 24.0).expect("valid coefficients");
    let grid = Grid::uniform(n_points).expect("valid grid");
    ControllerConfig::new(schedule, 1.0, co, grid).expect("valid controller")
}

pub fn initial_datum(grid: &Grid) -> Field {
    Field::from_fn(grid, 0.0, |x| -4.0 * (15.0 * (x - 0.5)).sin()).expect("finite datum")
}
