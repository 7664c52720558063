use backstep_core::schedule::{zeta, HORIZON_TOL};
use backstep_core::Schedule;
use proptest::prelude::*;

/// Direct sum with a crude integral tail, good to ~1e-6 for p ≥ 1.5.
fn zeta_oracle(p: f64) -> f64 {
    let n = 200_000;
    let head: f64 = (1..=n).rev().map(|k| (k as f64).powf(-p)).sum();
    head + (n as f64 + 0.5).powf(1.0 - p) / (p - 1.0)
}

#[test]
fn zeta_against_direct_sum() {
    for p in [1.5, 1.9, 2.5, 4.0] {
        let z = zeta(p, HORIZON_TOL).unwrap();
        assert!((z - zeta_oracle(p)).abs() < 1e-6, "p = {p}");
    }
}

proptest! {
    #[test]
    fn case1_schedule_shape(p in 1.2f64..4.0, lambda0 in 0.1f64..20.0, n_max in 1usize..12) {
        let s = Schedule::case1(p, lambda0, n_max).unwrap();
        prop_assert_eq!(s.t.len(), n_max + 2);
        prop_assert_eq!(s.lambda.len(), n_max + 1);
        prop_assert_eq!(s.s.len(), n_max + 2);
        prop_assert!(s.t.windows(2).all(|w| w[1] > w[0]));
        prop_assert!(s.lambda.windows(2).all(|w| w[1] > w[0]));
        prop_assert_eq!(*s.t.last().unwrap(), s.horizon);
        prop_assert!(s.lambda.iter().all(|&l| l >= lambda0));
        // partial sums are increasing and start at zero
        prop_assert_eq!(s.s[0], 0.0);
        prop_assert!(s.s.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn case2_schedule_shape(horizon in 0.1f64..10.0, lambda0 in 0.1f64..20.0, n_max in 1usize..12) {
        let s = Schedule::case2(horizon, lambda0, n_max).unwrap();
        for n in 0..=n_max {
            let expected = horizon - horizon / (n as f64 + 1.0);
            prop_assert!((s.t[n] - expected).abs() <= 1e-12 * horizon);
            prop_assert_eq!(s.lambda[n], (n as f64).powi(6) + lambda0);
        }
        for n in 0..=n_max {
            let (a, b) = s.segment_bounds(n);
            let mid = 0.5 * (a + b);
            prop_assert_eq!(s.segment_of(mid).unwrap(), n);
        }
        prop_assert!(s.segment_of(horizon).is_err());
    }

    #[test]
    fn zeta_decreases_in_p(p in 1.1f64..6.0, dp in 0.01f64..1.0) {
        let a = zeta(p, 1e-9).unwrap();
        let b = zeta(p + dp, 1e-9).unwrap();
        prop_assert!(b < a);
        // integral comparison: 1/(p-1) < ζ(p) < 1 + 1/(p-1)
        prop_assert!(a > 1.0 / (p - 1.0) && a < 1.0 + 1.0 / (p - 1.0));
    }
}
