//! Property-based invariants across modules.

use proptest::prelude::*;

use tlac::analysis::{coherence, exceedance, quantile, segment_stats, CaseSeries, SpectralConfig};
use tlac::controller::derate_fraction;
use tlac::estimator::nonrotating_transform;
use tlac::turbine::blade_effective_wind;

fn spectral() -> SpectralConfig {
    SpectralConfig {
        segment_len: 64,
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coherence_is_bounded(x in prop::collection::vec(-1.0f64..1.0, 512), y in prop::collection::vec(-1.0f64..1.0, 512)) {
        let c = coherence(&x, &y, &spectral()).unwrap();
        for v in c.coherence.iter().flatten() {
            prop_assert!(*v >= -1e-9 && *v <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn scaled_copy_is_fully_coherent(x in prop::collection::vec(-1.0f64..1.0, 512), a in 0.1f64..10.0) {
        let y: Vec<f64> = x.iter().map(|v| a * v).collect();
        let c = coherence(&x, &y, &spectral()).unwrap();
        for v in c.coherence.iter().flatten() {
            prop_assert!((v - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn exceedance_is_a_survival_function(x in prop::collection::vec(-5.0f64..5.0, 10..60)) {
        let c = exceedance(&x, "ch", "set");
        prop_assert!(c.values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(c.probability.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(c.probability.iter().all(|&p| p > 0.0 && p <= 1.0));
    }

    #[test]
    fn quantile_monotone_and_affine(x in prop::collection::vec(-5.0f64..5.0, 5..50), q1 in 0.0f64..1.0, q2 in 0.0f64..1.0, a in 0.1f64..10.0, b in -3.0f64..3.0) {
        let (lo, hi) = if q1 <= q2 { (q1, q2) } else { (q2, q1) };
        prop_assert!(quantile(&x, lo).unwrap() <= quantile(&x, hi).unwrap());
        let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let expect = a * quantile(&x, q1).unwrap() + b;
        prop_assert!((quantile(&y, q1).unwrap() - expect).abs() < 1e-9 * (1.0 + expect.abs()));
    }

    #[test]
    fn derating_is_monotone_and_bounded(dt in 0.001f64..0.1, k in 1.05f64..4.0, p in 0.5f64..0.99, x1 in 0.0f64..0.5, x2 in 0.0f64..0.5) {
        let ub = dt * k;
        let (a, b) = (derate_fraction(x1.min(x2), dt, ub, p), derate_fraction(x1.max(x2), dt, ub, p));
        prop_assert!(a >= b);
        prop_assert!((p..=1.0).contains(&a) && (p..=1.0).contains(&b));
    }

    #[test]
    fn transform_inverts_composition(u in 3.0f64..25.0, dv in -0.05f64..0.05, dh in -0.05f64..0.05, az in 0.0f64..std::f64::consts::TAU, r in 20.0f64..80.0) {
        let ub = std::array::from_fn(|i| blade_effective_wind(u, dh, dv, az, r, i));
        let (u1, dv1, dh1) = nonrotating_transform(ub, az, r);
        prop_assert!((u1 - u).abs() < 1e-12 && (dv1 - dv).abs() < 1e-12 && (dh1 - dh).abs() < 1e-12);
    }

    #[test]
    fn segments_of_repeated_case_repeat(amp in 0.5f64..5.0, period in 5usize..50) {
        let one = series(amp, period, 0.0);
        let mut two = one.clone();
        let shifted = series(amp, period, 100.0);
        for k in 0..shifted.len() {
            let row: Vec<f64> = CaseSeries::COLUMNS.iter().map(|c| shifted.column(c).unwrap()[k]).collect();
            two.push_row(&row);
        }
        let a = segment_stats(&one, 100.0).unwrap();
        let b = segment_stats(&two, 100.0).unwrap();
        prop_assert_eq!(b.len(), 2 * a.len());
        for (x, y) in a.iter().zip(&b[a.len()..]) {
            prop_assert_eq!(x.m_tower_fa, y.m_tower_fa);
            prop_assert_eq!(x.m_oop, y.m_oop);
            prop_assert_eq!(x.truth, y.truth);
            prop_assert_eq!(x.estimate, y.estimate);
        }
    }
}

/// 100 s at 10 Hz starting at `t0`; the signals do not depend on `t0`.
fn series(amp: f64, period: usize, t0: f64) -> CaseSeries {
    let mut s = CaseSeries::default();
    for k in 0..1000 {
        let ph = ((k % period) as f64 / period as f64 * std::f64::consts::TAU).sin();
        let row: Vec<f64> = CaseSeries::COLUMNS
            .iter()
            .map(|&c| match c {
                "time" => t0 + k as f64 * 0.1,
                "u_eff_true" | "u_eff_est" => 12.0 + amp * ph,
                "delta_true" | "delta_est" => 0.02 + 0.001 * amp * ph,
                "m_tower_fa" | "m_oop1" | "m_oop2" | "m_oop3" | "m_hub_tilt" | "thrust" => 1e6 * amp * ph,
                "p_sp" => 1.0,
                _ => 0.0,
            })
            .collect();
        s.push_row(&row);
    }
    s
}
