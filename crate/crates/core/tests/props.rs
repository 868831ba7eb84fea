//! Property tests for the small algebraic invariants.

use proptest::prelude::*;
use std::f64::consts::PI;

use v2x_coverage::analytic::laplace_los_ppp;
use v2x_coverage::channel::{blockage_loss, pathloss_los, AntennaPattern};
use v2x_coverage::harness::{csv_string, parse_csv, CoverageCurve, CurvePoint};
use v2x_coverage::units::{dbm_to_mw, mw_to_dbm, wrap_angle};
use v2x_coverage::{Carrier, QuadratureSpec, ScenarioConfig};

proptest! {
    #[test]
    fn wrapped_angles_stay_in_range(theta in -1e6f64..1e6) {
        let w = wrap_angle(theta);
        prop_assert!(w > -PI && w <= PI);
        // wrapping is idempotent
        prop_assert!((wrap_angle(w) - w).abs() < 1e-9);
    }

    #[test]
    fn power_units_round_trip(dbm in -150.0f64..60.0) {
        let back = mw_to_dbm(dbm_to_mw(dbm));
        prop_assert!((back - dbm).abs() < 1e-9);
    }

    #[test]
    fn pathloss_decreases_with_distance(r in 0.01f64..50.0, step in 0.01f64..10.0, alpha in 0.5f64..4.0) {
        let near = pathloss_los(r, alpha).unwrap();
        let far = pathloss_los(r + step, alpha).unwrap();
        prop_assert!(far < near);
    }

    #[test]
    fn blockage_loss_decreases_with_crossings(l in 1e-6f64..0.999, k in 1u32..40) {
        let a = blockage_loss(l, k).unwrap();
        let b = blockage_loss(l, k + 1).unwrap();
        prop_assert!(b < a);
        prop_assert!(a <= l && a > 0.0);
    }

    #[test]
    fn gaussian_patterns_stay_normalized(
        boresight in 0.0f64..(2.0 * PI),
        sigma_deg in 5.0f64..120.0,
    ) {
        let pattern = AntennaPattern::gaussian_mainlobe(
            boresight,
            sigma_deg * PI / 180.0,
        ).unwrap();
        let n = 1 << 14;
        let h = 2.0 * PI / n as f64;
        let integral: f64 = (0..n).map(|j| pattern.gain((j as f64 + 0.5) * h)).sum::<f64>() * h;
        prop_assert!((integral - 2.0 * PI).abs() / (2.0 * PI) < 1e-6, "integral {integral}");
        prop_assert!(pattern.gain(boresight) >= pattern.gain(boresight + 1.0));
    }

    #[test]
    fn csv_round_trips_arbitrary_points(
        rows in prop::collection::vec(
            (0.0f64..100.0, 0.0f64..1.0, prop::option::of(0.0f64..1.0)),
            0..12,
        ),
    ) {
        let points: Vec<CurvePoint> = rows
            .iter()
            .enumerate()
            .map(|(i, &(value, p_out, mc))| CurvePoint {
                value: value + i as f64, // keep x strictly increasing per series
                series_id: format!("series-{}", i % 3),
                p_out_analytic: p_out,
                p_out_mc: mc,
                ci99: mc.map(|m| m / 10.0),
            })
            .collect();
        let curve = CoverageCurve {
            sweep_var: "r0",
            points,
            base_config: ScenarioConfig::default(),
            seed: 1,
            tool_version: "test",
        };
        let parsed = parse_csv(&csv_string(&curve)).unwrap();
        prop_assert_eq!(parsed, curve.points);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn los_factor_lies_in_unit_interval(
        s in 0.0f64..10.0,
        interference_prob in 0.0f64..1.0,
        vehicle_density in 0.0f64..4.0,
    ) {
        let cfg = ScenarioConfig {
            tx_power: 1.0,
            interference_prob,
            vehicle_density,
            matched_density: false,
            frequency_profile: Carrier::Sub6,
            ..ScenarioConfig::default()
        };
        let f = laplace_los_ppp(s, &cfg, &QuadratureSpec::default()).unwrap().value;
        prop_assert!(f > 0.0 && f <= 1.0, "factor {f}");
        if s == 0.0 {
            prop_assert!(f == 1.0);
        }
    }
}
