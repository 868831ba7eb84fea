//! Scenario parameters for the urban grid model.
//!
//! All powers are stored linearly in mW and the SINR threshold as a linear
//! ratio; the config-file layer (`cfgfile`) converts from dBm/dB. Lengths are
//! in grid units of 100 m.

use crate::error::{Error, Result};
use crate::units::dbm_to_mw;

/// How vehicles are placed along a road.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VehicleModel {
    /// Homogeneous 1D Poisson point process.
    Ppp,
    /// 1D Thomas cluster process (Poisson parents, Gaussian daughters).
    Pcp,
}

/// Which road populations contribute interference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoadCase {
    OnlyLos,
    OnlyNlos,
    Both,
}

/// Carrier band; selects penetration loss and antenna pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Carrier {
    MmWave,
    Sub6,
}

/// How the number of non-typical (NLoS) roads is determined per scene.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NlosRoadMode {
    /// Deterministic road count.
    Fixed(u32),
    /// Poisson-distributed count with the given mean (both axes combined).
    PoissonMean(f64),
}

/// Default mean NLoS road count (both axes combined), chosen so the default
/// grid carries about ten roads in total. Consistent with the default
/// per-axis road density: `4 * R * ROAD_DENSITY = 8` at `R = 5`.
pub const DEFAULT_NLOS_MEAN_ROADS: f64 = 8.0;

/// Minimum admissible distance between an interferer and the typical
/// vehicle; scenes violating it are resampled by the simulator.
pub const MIN_INTERFERER_SEPARATION: f64 = 1e-3;

/// Full parameter set for one scenario evaluation.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    /// Half-extent `R` of the grid; roads span `[-R, R]`.
    pub grid_half_range: f64,
    /// Half-extent `Rc` of a cluster; daughter displacements stay in `[-Rc, Rc]`.
    pub cluster_half_range: f64,
    /// Road density per unit length on each axis.
    pub road_density: f64,
    /// Cluster-parent density per unit length.
    pub parent_density: f64,
    /// Vehicle density per unit length in PPP mode.
    pub vehicle_density: f64,
    /// True when `vehicle_density` is derived as `parent_density * mean_cluster_size`
    /// so PPP and PCP runs carry the same mean vehicle count. Kept in sync on
    /// cluster-size overrides.
    pub matched_density: bool,
    /// Mean daughter count per cluster.
    pub mean_cluster_size: f64,
    /// Std deviation of the Gaussian daughter displacement.
    pub cluster_stddev: f64,
    /// LoS path-loss exponent.
    pub pathloss_exponent: f64,
    /// Transmit power, linear mW.
    pub tx_power: f64,
    /// Probability that a vehicle is an active interferer.
    pub interference_prob: f64,
    /// Noise power, linear mW.
    pub noise_power: f64,
    /// Number of typical (LoS) roads; the model fixes this at 2.
    pub n_los: u32,
    /// NLoS road count model.
    pub nlos_road_mode: NlosRoadMode,
    /// Serving-link distance `r0`.
    pub serving_distance: f64,
    /// SINR threshold, linear ratio.
    pub threshold: f64,
    /// Carrier selection (antenna pattern + penetration loss).
    pub frequency_profile: Carrier,
    /// Mainlobe direction of the mmWave pattern, degrees.
    pub antenna_boresight_deg: f64,
    /// Mainlobe width (Gaussian sigma) of the mmWave pattern, degrees.
    pub antenna_sigma_deg: f64,
    /// Master seed for every stochastic component.
    pub rng_seed: u64,
}

impl Default for ScenarioConfig {
    /// The reference urban parameter set: R=5, Rc=1, alpha=2, lambda_p=0.5,
    /// c-bar=5, sigma_c=0.5, Pt=43 dBm, P_I=0.3, noise=-104.5 dBm, two
    /// typical roads, Poisson NLoS road count with mean 8.
    fn default() -> Self {
        ScenarioConfig {
            grid_half_range: 5.0,
            cluster_half_range: 1.0,
            road_density: 0.4,
            parent_density: 0.5,
            vehicle_density: 2.5,
            matched_density: true,
            mean_cluster_size: 5.0,
            cluster_stddev: 0.5,
            pathloss_exponent: 2.0,
            tx_power: dbm_to_mw(43.0),
            interference_prob: 0.3,
            noise_power: dbm_to_mw(-104.5),
            n_los: 2,
            nlos_road_mode: NlosRoadMode::PoissonMean(DEFAULT_NLOS_MEAN_ROADS),
            serving_distance: 0.5,
            threshold: 0.1,
            frequency_profile: Carrier::MmWave,
            antenna_boresight_deg: 180.0,
            antenna_sigma_deg: 50.0,
            rng_seed: 42,
        }
    }
}

impl ScenarioConfig {
    /// Checks every scenario invariant; the error names the one violated.
    pub fn validate(&self) -> Result<()> {
        let fail = |inv: &str, detail: String| -> Result<()> {
            Err(Error::Invariant(format!("{inv} ({detail})")))
        };
        if !(self.grid_half_range > 0.0 && self.grid_half_range.is_finite()) {
            return fail(
                "grid_half_range > 0 and finite",
                format!("got {}", self.grid_half_range),
            );
        }
        if !(self.cluster_half_range > 0.0 && self.cluster_half_range <= self.grid_half_range) {
            return fail(
                "0 < cluster_half_range <= grid_half_range",
                format!(
                    "got Rc={}, R={}",
                    self.cluster_half_range, self.grid_half_range
                ),
            );
        }
        for (name, v) in [
            ("road_density", self.road_density),
            ("parent_density", self.parent_density),
            ("vehicle_density", self.vehicle_density),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return fail(&format!("{name} >= 0 and finite"), format!("got {v}"));
            }
        }
        if !(self.mean_cluster_size > 0.0 && self.mean_cluster_size.is_finite()) {
            return fail(
                "mean_cluster_size > 0",
                format!("got {}", self.mean_cluster_size),
            );
        }
        if !(self.cluster_stddev > 0.0 && self.cluster_stddev.is_finite()) {
            return fail(
                "cluster_stddev > 0",
                format!("got {}", self.cluster_stddev),
            );
        }
        if !(self.pathloss_exponent > 0.0 && self.pathloss_exponent.is_finite()) {
            return fail(
                "pathloss_exponent > 0",
                format!("got {}", self.pathloss_exponent),
            );
        }
        if !(self.tx_power > 0.0 && self.tx_power.is_finite()) {
            return fail("tx_power > 0", format!("got {}", self.tx_power));
        }
        if !(0.0..=1.0).contains(&self.interference_prob) {
            return fail(
                "interference_prob in [0, 1]",
                format!("got {}", self.interference_prob),
            );
        }
        if !(self.noise_power >= 0.0 && self.noise_power.is_finite()) {
            return fail("noise_power >= 0", format!("got {}", self.noise_power));
        }
        if self.n_los != 2 {
            return fail("n_los fixed at 2", format!("got {}", self.n_los));
        }
        match self.nlos_road_mode {
            NlosRoadMode::PoissonMean(m) if !(m >= 0.0) => {
                return fail("nlos_mean_roads >= 0", format!("got {m}"));
            }
            _ => {}
        }
        if !(self.serving_distance > 0.0 && self.serving_distance.is_finite()) {
            return fail(
                "serving_distance > 0",
                format!("got {}", self.serving_distance),
            );
        }
        if !(self.threshold >= 0.0 && self.threshold.is_finite()) {
            return fail("threshold >= 0", format!("got {}", self.threshold));
        }
        Ok(())
    }

    /// Sets the mean cluster size, re-deriving the PPP vehicle density when
    /// the config is in matched-density mode so both models keep the same
    /// mean vehicle count per road.
    pub fn set_mean_cluster_size(&mut self, c_bar: f64) {
        self.mean_cluster_size = c_bar;
        if self.matched_density {
            self.vehicle_density = self.parent_density * c_bar;
        }
    }

    /// Mean number of vehicles on one road under the given model.
    pub fn mean_vehicles_per_road(&self, model: VehicleModel) -> f64 {
        let len = 2.0 * self.grid_half_range;
        match model {
            VehicleModel::Ppp => len * self.vehicle_density,
            VehicleModel::Pcp => len * self.parent_density * self.mean_cluster_size,
        }
    }
}
