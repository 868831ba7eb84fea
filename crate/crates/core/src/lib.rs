//! Downlink coverage analysis for urban V2X networks.
//!
//! The network is a perpendicular cross-line road grid with the typical
//! vehicle at the origin. Vehicles (and RSUs) are placed along each road as
//! either a 1D Poisson point process or a 1D Thomas cluster process;
//! interference arrives over LoS links from the two typical roads and over
//! building-blocked NLoS links from the remaining roads. Coverage
//! probability is available along two independent routes:
//!
//! * [`analytic::coverage`] evaluates the Laplace-transform product form by
//!   nested adaptive quadrature, and
//! * [`montecarlo::estimate_coverage`] simulates full scenes and counts SINR
//!   threshold crossings.
//!
//! The [`harness`] module adds config files, parameter sweeps, CSV/SVG
//! output, and the oracle-agreement validation grid used by the CLI.

// `!(x >= 0.0)` is used throughout parameter checks so NaN is rejected
// along with negatives.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod channel;
pub mod config;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod montecarlo;
pub mod quad;
pub mod units;

pub use analytic::{coverage, CoverageResult};
pub use config::{Carrier, NlosRoadMode, RoadCase, ScenarioConfig, VehicleModel};
pub use error::{Error, Result};
pub use montecarlo::{estimate_coverage, CoverageEstimate};
pub use quad::QuadratureSpec;

/// Version string stamped into emitted curve metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
