//! Independent-oracle checks for the Laplace transforms: fixed-grid Riemann
//! sums for the LoS factors and a direct Monte Carlo average for the NLoS
//! blockage kernel.

mod common;

use std::f64::consts::PI;

use common::{riemann_los_pcp, riemann_los_ppp, riemann_nlos_pcp, OracleGain, OracleScenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use v2x_coverage::analytic::{laplace_los_pcp, laplace_los_ppp, laplace_nlos_with_profile};
use v2x_coverage::channel::FrequencyProfile;
use v2x_coverage::units::deg_to_rad;
use v2x_coverage::{Carrier, QuadratureSpec, ScenarioConfig, VehicleModel};

/// Normalized-power scenario (Pt = 1) so the spot `s` values apply directly.
fn spot_config(carrier: Carrier, cluster_stddev: f64) -> ScenarioConfig {
    ScenarioConfig {
        tx_power: 1.0,
        noise_power: 1e-12,
        frequency_profile: carrier,
        cluster_stddev,
        ..ScenarioConfig::default()
    }
}

fn oracle_scenario(s: f64, cfg: &ScenarioConfig) -> OracleScenario {
    let gain = match cfg.frequency_profile {
        Carrier::Sub6 => OracleGain::Omni,
        Carrier::MmWave => OracleGain::Gaussian {
            boresight: deg_to_rad(cfg.antenna_boresight_deg),
            sigma: deg_to_rad(cfg.antenna_sigma_deg),
        },
    };
    OracleScenario {
        s,
        tx_power: cfg.tx_power,
        alpha: cfg.pathloss_exponent,
        grid_half_range: cfg.grid_half_range,
        cluster_half_range: cfg.cluster_half_range,
        cluster_stddev: cfg.cluster_stddev,
        parent_density: cfg.parent_density,
        vehicle_density: cfg.vehicle_density,
        mean_cluster_size: cfg.mean_cluster_size,
        interference_prob: cfg.interference_prob,
        gain,
    }
}

const SPOTS: [(Carrier, f64, f64); 3] = [
    // (carrier, s, sigma_c)
    (Carrier::Sub6, 0.4, 0.5),
    (Carrier::MmWave, 0.4, 0.5),
    (Carrier::MmWave, 2.5, 0.8),
];

#[test]
fn los_ppp_matches_riemann_oracle() {
    let quad = QuadratureSpec::default();
    for (carrier, s, sigma_c) in SPOTS {
        let cfg = spot_config(carrier, sigma_c);
        let implementation = laplace_los_ppp(s, &cfg, &quad).unwrap().value;
        let oracle = riemann_los_ppp(&oracle_scenario(s, &cfg));
        assert!(
            (implementation - oracle).abs() < 1e-3,
            "{carrier:?} s={s}: impl {implementation} vs oracle {oracle}"
        );
    }
}

#[test]
fn los_pcp_matches_riemann_oracle() {
    let quad = QuadratureSpec::default();
    for (carrier, s, sigma_c) in SPOTS {
        let cfg = spot_config(carrier, sigma_c);
        let implementation = laplace_los_pcp(s, &cfg, &quad).unwrap().value;
        let oracle = riemann_los_pcp(&oracle_scenario(s, &cfg));
        assert!(
            (implementation - oracle).abs() < 1e-3,
            "{carrier:?} s={s}: impl {implementation} vs oracle {oracle}"
        );
    }
}

#[test]
fn nlos_pcp_matches_riemann_oracle() {
    let quad = QuadratureSpec::default();
    // the last spot weakens the blockage so deep series terms matter
    for (carrier, s, penetration) in [
        (Carrier::Sub6, 40.0, 1e-3),
        (Carrier::MmWave, 2.5, 1e-4),
        (Carrier::MmWave, 2.5, 0.5),
    ] {
        let cfg = spot_config(carrier, 0.5);
        let mut profile = FrequencyProfile::from_config(&cfg).unwrap();
        profile.penetration_loss = penetration;
        let implementation =
            laplace_nlos_with_profile(s, &cfg, VehicleModel::Pcp, &profile, &quad)
                .unwrap()
                .value;
        let oracle = riemann_nlos_pcp(&oracle_scenario(s, &cfg), penetration);
        assert!(
            (implementation - oracle).abs() < 1e-3,
            "{carrier:?} s={s} L={penetration}: impl {implementation} vs oracle {oracle}"
        );
    }
}

/// Monte Carlo oracle for the NLoS kernel expectation: draws (x, theta, K)
/// directly and averages the blockage-attenuated Laplace kernel, then maps
/// it onto the PPP factor.
fn mc_nlos_factor(s: f64, cfg: &ScenarioConfig, penetration: f64, draws: u64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = cfg.grid_half_range;
    let blockage_coeff = r * cfg.parent_density * cfg.mean_cluster_size;
    let profile = FrequencyProfile::from_config(cfg).unwrap();

    let mut deficit_sum = 0.0;
    for _ in 0..draws {
        let x: f64 = rng.random_range(-r..=r);
        let theta: f64 = rng.random_range(0.0..2.0 * PI);
        let mu = blockage_coeff * x.abs() * (theta.cos().abs() + theta.sin().abs());
        let extra = if mu > 0.0 {
            let p: f64 = Poisson::new(mu).unwrap().sample(&mut rng);
            p as i32
        } else {
            0
        };
        let coupled =
            s * cfg.tx_power * profile.antenna.gain(theta) * penetration.powi(1 + extra);
        deficit_sum += coupled / (1.0 + coupled);
    }
    let mean_deficit = deficit_sum / draws as f64;
    (-cfg.interference_prob * cfg.vehicle_density * 2.0 * r * mean_deficit).exp()
}

#[test]
fn nlos_kernel_matches_mc_expectation() {
    let quad = QuadratureSpec::default();
    for (i, (carrier, s)) in [
        (Carrier::MmWave, 0.4),
        (Carrier::Sub6, 40.0),
        (Carrier::MmWave, 2.5),
    ]
    .into_iter()
    .enumerate()
    {
        let cfg = spot_config(carrier, 0.5);
        let profile = FrequencyProfile::from_config(&cfg).unwrap();
        let implementation =
            laplace_nlos_with_profile(s, &cfg, VehicleModel::Ppp, &profile, &quad)
                .unwrap()
                .value;
        let oracle = mc_nlos_factor(s, &cfg, profile.penetration_loss, 1_000_000, 77 + i as u64);
        assert!(
            (implementation - oracle).abs() < 1e-3,
            "{carrier:?} s={s}: impl {implementation} vs oracle {oracle}"
        );
    }
}
