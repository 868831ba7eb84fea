//! Road-grid and vehicle point-process sampling.
//!
//! Roads form a perpendicular cross grid: two fixed typical roads through the
//! origin (one per axis, LoS toward the typical vehicle) plus a random number
//! of NLoS roads at uniform perpendicular offsets. Vehicles are placed along
//! each road independently, either as a homogeneous 1D PPP or as a 1D Thomas
//! cluster process, and are thinned into interferers with probability `P_I`.

use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson};

use crate::config::{NlosRoadMode, ScenarioConfig, VehicleModel};
use crate::error::{Error, Result};

/// Grid axis a road runs parallel to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// One road of the grid.
#[derive(Debug, Clone, Copy)]
pub struct Road {
    pub axis: Axis,
    /// Perpendicular offset from the origin; 0 for the typical roads.
    pub offset: f64,
    /// Typical roads carry LoS interference links, all others NLoS.
    pub is_los: bool,
}

/// A sampled road grid: exactly two typical roads intersecting at the origin
/// (the typical vehicle position) plus the NLoS roads.
#[derive(Debug, Clone)]
pub struct RoadGrid {
    pub los_roads: [Road; 2],
    pub nlos_roads: Vec<Road>,
}

impl RoadGrid {
    pub fn road_count(&self) -> usize {
        2 + self.nlos_roads.len()
    }

    /// Road by the `road_index` convention of [`Vehicle`]: 0 and 1 are the
    /// typical roads, 2.. the NLoS roads.
    pub fn road(&self, index: usize) -> &Road {
        if index < 2 {
            &self.los_roads[index]
        } else {
            &self.nlos_roads[index - 2]
        }
    }
}

/// One vehicle (or RSU — both are just process points) on some road.
#[derive(Debug, Clone, Copy)]
pub struct Vehicle {
    /// 0 and 1 are the typical roads, 2.. index `nlos_roads`.
    pub road_index: usize,
    /// Along-road coordinate in `[-R, R]`.
    pub position: f64,
    /// Whether this node actively interferes in the current scene.
    pub is_interferer: bool,
    /// Parent-point position for cluster daughters, `None` in PPP mode.
    pub cluster_parent: Option<f64>,
}

/// All vehicles of one scene.
#[derive(Debug, Clone, Default)]
pub struct VehicleSet {
    pub vehicles: Vec<Vehicle>,
}

impl VehicleSet {
    pub fn interferers(&self) -> impl Iterator<Item = &Vehicle> {
        self.vehicles.iter().filter(|v| v.is_interferer)
    }
}

/// A cluster of the Thomas process: parent position and daughter positions.
#[derive(Debug, Clone)]
pub struct Cluster {
    pub parent: f64,
    pub daughters: Vec<f64>,
}

const MAX_REJECTION_ITERS: u32 = 1_000_000;

/// Samples a homogeneous 1D PPP of the given density on `[-half_range, half_range]`:
/// a Poisson(2 * half_range * density) count of i.i.d. uniform positions.
pub fn sample_ppp_1d<R: Rng + ?Sized>(
    density: f64,
    half_range: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !(density >= 0.0) {
        return Err(Error::Parameter(format!(
            "point process density must be >= 0, got {density}"
        )));
    }
    if !(half_range > 0.0) {
        return Err(Error::Parameter(format!(
            "half_range must be > 0, got {half_range}"
        )));
    }
    let mean = 2.0 * half_range * density;
    if mean == 0.0 {
        return Ok(Vec::new());
    }
    let count = poisson_count(mean, rng)?;
    let positions = (0..count)
        .map(|_| rng.random_range(-half_range..=half_range))
        .collect();
    Ok(positions)
}

/// Samples a 1D Thomas cluster process on `[-half_range, half_range]`.
///
/// Parents follow a PPP of density `parent_density`; each parent gets a
/// Poisson(`mean_cluster_size`) number of daughters displaced by a zero-mean
/// Gaussian of std `cluster_stddev`, truncated to `[-cluster_half_range,
/// cluster_half_range]` and kept inside the grid by rejection.
pub fn sample_thomas_1d<R: Rng + ?Sized>(
    parent_density: f64,
    mean_cluster_size: f64,
    cluster_stddev: f64,
    half_range: f64,
    cluster_half_range: f64,
    rng: &mut R,
) -> Result<Vec<Cluster>> {
    if !(cluster_stddev > 0.0) {
        return Err(Error::Parameter(format!(
            "cluster_stddev must be > 0, got {cluster_stddev}"
        )));
    }
    if !(mean_cluster_size >= 0.0) {
        return Err(Error::Parameter(format!(
            "mean_cluster_size must be >= 0, got {mean_cluster_size}"
        )));
    }
    if !(cluster_half_range > 0.0 && cluster_half_range <= half_range) {
        return Err(Error::Parameter(format!(
            "need 0 < cluster_half_range <= half_range, got {cluster_half_range} vs {half_range}"
        )));
    }
    let parents = sample_ppp_1d(parent_density, half_range, rng)?;
    let displacement = Normal::new(0.0, cluster_stddev)
        .map_err(|e| Error::Parameter(format!("daughter displacement: {e}")))?;
    let mut clusters = Vec::with_capacity(parents.len());
    for parent in parents {
        let n = if mean_cluster_size == 0.0 {
            0
        } else {
            poisson_count(mean_cluster_size, rng)?
        };
        let mut daughters = Vec::with_capacity(n);
        for _ in 0..n {
            daughters.push(sample_daughter(
                parent,
                &displacement,
                cluster_half_range,
                half_range,
                rng,
            )?);
        }
        clusters.push(Cluster { parent, daughters });
    }
    Ok(clusters)
}

/// Rejection-samples one daughter position: displacement within the cluster
/// range, absolute position within the grid.
fn sample_daughter<R: Rng + ?Sized>(
    parent: f64,
    displacement: &Normal<f64>,
    cluster_half_range: f64,
    half_range: f64,
    rng: &mut R,
) -> Result<f64> {
    for _ in 0..MAX_REJECTION_ITERS {
        let d = displacement.sample(rng);
        if d.abs() <= cluster_half_range && (parent + d).abs() <= half_range {
            return Ok(parent + d);
        }
    }
    Err(Error::Numeric(format!(
        "daughter rejection sampling did not accept after {MAX_REJECTION_ITERS} draws \
         (parent {parent}, sigma {})",
        displacement.std_dev()
    )))
}

/// Samples one full scene: the road grid plus vehicles on every road.
///
/// The typical vehicle at the origin is the receiver and is not part of the
/// returned set. Every generated vehicle is independently flagged as an
/// interferer with probability `interference_prob`.
pub fn build_scene<R: Rng + ?Sized>(
    config: &ScenarioConfig,
    model: VehicleModel,
    rng: &mut R,
) -> Result<(RoadGrid, VehicleSet)> {
    config.validate()?;
    let half = config.grid_half_range;

    let nlos_count = match config.nlos_road_mode {
        NlosRoadMode::Fixed(n) => n as usize,
        NlosRoadMode::PoissonMean(mean) => {
            if mean == 0.0 {
                0
            } else {
                poisson_count(mean, rng)?
            }
        }
    };
    let nlos_roads: Vec<Road> = (0..nlos_count)
        .map(|_| Road {
            axis: if rng.random_bool(0.5) { Axis::X } else { Axis::Y },
            offset: rng.random_range(-half..=half),
            is_los: false,
        })
        .collect();
    let grid = RoadGrid {
        los_roads: [
            Road { axis: Axis::X, offset: 0.0, is_los: true },
            Road { axis: Axis::Y, offset: 0.0, is_los: true },
        ],
        nlos_roads,
    };

    let mut vehicles = Vec::new();
    for road_index in 0..grid.road_count() {
        match model {
            VehicleModel::Ppp => {
                for position in sample_ppp_1d(config.vehicle_density, half, rng)? {
                    vehicles.push(Vehicle {
                        road_index,
                        position,
                        is_interferer: rng.random_bool(config.interference_prob),
                        cluster_parent: None,
                    });
                }
            }
            VehicleModel::Pcp => {
                let clusters = sample_thomas_1d(
                    config.parent_density,
                    config.mean_cluster_size,
                    config.cluster_stddev,
                    half,
                    config.cluster_half_range,
                    rng,
                )?;
                for cluster in clusters {
                    for position in cluster.daughters {
                        vehicles.push(Vehicle {
                            road_index,
                            position,
                            is_interferer: rng.random_bool(config.interference_prob),
                            cluster_parent: Some(cluster.parent),
                        });
                    }
                }
            }
        }
    }
    Ok((grid, VehicleSet { vehicles }))
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<usize> {
    let dist = Poisson::new(mean)
        .map_err(|e| Error::Parameter(format!("poisson mean {mean}: {e}")))?;
    let draw: f64 = dist.sample(rng);
    Ok(draw as usize)
}
