mod common;

use backstep_core::analysis::*;
use backstep_core::controller::{closed_loop_simulate, simulate_target_w, RunOptions};
use backstep_core::{DisturbanceSpec, TargetTrace};
use common::{case1, case2, initial_datum};
use proptest::prelude::*;

fn target_w(amplitude: f64) -> (backstep_core::ControllerConfig, TargetTrace) {
    let cfg = case1(201);
    let run = simulate_target_w(
        &cfg,
        &DisturbanceSpec::boundary_sine(amplitude, 30.0),
        &RunOptions::default(),
    )
    .unwrap();
    (cfg, run)
}

#[test]
fn linf_bound_holds_for_boundary_disturbances() {
    for amplitude in [0.0, 1.0, 2.0] {
        let (_, run) = target_w(amplitude);
        let report = check_linf_bound(&run, 1.0);
        assert!(report.pass, "A = {amplitude}: {report:?}");
        assert!(report.max_linf <= amplitude * (1.0 + LINF_REL_TOL));
        assert!((report.bound - amplitude).abs() <= 1e-6 * amplitude);
    }
}

#[test]
fn linf_margin_scales_with_amplitude() {
    let (_, one) = target_w(1.0);
    let (_, two) = target_w(2.0);
    let m1 = check_linf_bound(&one, 1.0).worst_margin;
    let m2 = check_linf_bound(&two, 1.0).worst_margin;
    assert!(m1 > 0.0);
    assert!((m2 / m1 - 2.0).abs() < 1e-9, "{m1} {m2}");
}

#[test]
fn linf_bound_with_forcing_and_left_disturbance() {
    let cfg = case2(101);
    let dist = DisturbanceSpec::boundary_sine(0.5, 30.0)
        .with_d0(|t| 0.3 * (7.0 * t).cos())
        .with_f(|x, t| 2.0 * x * (5.0 * t).sin());
    let run = simulate_target_w(&cfg, &dist, &RunOptions::default()).unwrap();
    let report = check_linf_bound(&run, cfg.sigma);
    assert!(report.pass, "{report:?}");
    let sups = run.final_sups();
    assert!(sups.f > 0.0 && sups.d0 > 0.0 && sups.d1 > 0.0);
}

#[test]
fn truncated_energy_stays_at_zero() {
    let (cfg, run) = target_w(1.0);
    let omega = proof_omega(&run, 1.0);
    let report = check_lyapunov_monotone(&run, omega, &cfg.grid).unwrap();
    assert!(
        report.pass && report.max_functional <= LYAPUNOV_TOL,
        "{report:?}"
    );

    let halved = check_lyapunov_monotone(&run, 0.5 * omega, &cfg.grid).unwrap();
    assert!(
        !halved.pass && halved.max_functional > LYAPUNOV_TOL,
        "{halved:?}"
    );
}

#[test]
fn fixed_time_metric_on_presets() {
    for cfg in [case1(201), case2(201)] {
        let trace = closed_loop_simulate(
            &cfg,
            &DisturbanceSpec::zero(),
            &initial_datum(&cfg.grid, 1.0),
            &RunOptions::default(),
        )
        .unwrap();
        let report = fts_metric(&trace, FTS_EPS_FRACTION * cfg.schedule.horizon).unwrap();
        assert!(report.decay_ratio <= 1e-2, "{report}");
        assert!(report.terminal_time <= cfg.schedule.horizon * (1.0 - FTS_EPS_FRACTION) + 1e-12);
    }
}

#[test]
fn iss_sup_scales_linearly_and_gain_is_invariant() {
    let cfg = case1(201);
    let u0 = initial_datum(&cfg.grid, 1.0);
    let window = iss_window(cfg.schedule.horizon);
    let reports: Vec<IssReport> = [1.0, 2.0]
        .iter()
        .map(|&a| {
            let trace = closed_loop_simulate(
                &cfg,
                &DisturbanceSpec::boundary_sine(a, 30.0),
                &u0,
                &RunOptions::default(),
            )
            .unwrap();
            assert!(trace.l2_u.iter().all(|v| v.is_finite()));
            iss_metric(&trace, window, trace.sups).unwrap()
        })
        .collect();
    let ratio = reports[1].sup_norm_window / reports[0].sup_norm_window;
    assert!((ratio - 2.0).abs() <= 0.2, "{ratio}");
    let gains = reports[1].fitted_gain / reports[0].fitted_gain;
    assert!((gains - 1.0).abs() <= 0.1, "{gains}");
}

#[test]
fn report_rows_match_headers() {
    let (_, run) = target_w(1.0);
    assert_eq!(run.times.len(), run.profiles.len());
    let cfg = case2(51);
    let trace = closed_loop_simulate(
        &cfg,
        &DisturbanceSpec::boundary_sine(1.0, 30.0),
        &initial_datum(&cfg.grid, 1.0),
        &RunOptions::default(),
    )
    .unwrap();
    let fts = fts_metric(&trace, 0.015).unwrap();
    let iss = iss_metric(&trace, iss_window(1.5), trace.sups).unwrap();
    assert_eq!(
        FtsReport::csv_header().split(',').count(),
        fts.csv_row().split(',').count()
    );
    assert_eq!(
        IssReport::csv_header().split(',').count(),
        iss.csv_row().split(',').count()
    );
}

proptest! {
    #[test]
    fn truncation_function_shape(s in 0.0f64..50.0, t in 0.0f64..50.0) {
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        prop_assert!(stampacchia_g(lo) <= stampacchia_g(hi));
        prop_assert!(stampacchia_big_g(lo) <= stampacchia_big_g(hi) + 1e-15);
        prop_assert!(stampacchia_big_g(s) >= 0.0);
        // G(s) ≤ s g(s) since g is nondecreasing
        prop_assert!(stampacchia_big_g(s) <= s * stampacchia_g(s) + 1e-12);
    }

    #[test]
    fn big_g_is_antiderivative(s in 0.01f64..20.0) {
        let h = 1e-5 * s.max(1.0);
        let derivative = (stampacchia_big_g(s + h) - stampacchia_big_g(s - h)) / (2.0 * h);
        prop_assert!((derivative - stampacchia_g(s)).abs() <= 1e-6 * (1.0 + stampacchia_g(s)));
    }
}
