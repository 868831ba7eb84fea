//! Coverage probability in closed-to-quadrature form.
//!
//! With Rayleigh fading the coverage probability factorizes into a noise term
//! `exp(-s * sigma^2)` and one Laplace-transform factor per interfering road.
//! Each per-road factor is the probability generating functional of the
//! vehicle process applied to the per-interferer kernel
//! `E_h[exp(-s Pt G(theta) h loss)] = 1 / (1 + s Pt G(theta) loss)`,
//! averaged over the uniform angle of arrival. LoS roads use the distance
//! loss `|x|^-alpha`; NLoS roads replace it with the blockage loss `L^K`
//! and take the expectation over the Poisson building count.
//!
//! Interferer thinning is applied inside the functional: each point is kept
//! with probability `P_I`, which for the cluster process acts on daughters
//! (matching the per-vehicle interferer marking of the scene sampler), not
//! on the parent intensity.

use std::f64::consts::{PI, SQRT_2};

use statrs::function::erf::erf;

use crate::channel::FrequencyProfile;
use crate::config::{NlosRoadMode, RoadCase, ScenarioConfig, VehicleModel};
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadratureSpec};

/// Node count of the fixed periodic rule used for the inner angular average.
const ANGULAR_NODES: usize = 256;

/// Hard ceiling on blockage-series length, independent of the mass guard.
const MAX_SERIES_TERMS: f64 = 100_000.0;

/// Which link population a Laplace transform describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkKind {
    Los,
    Nlos,
}

/// One per-road Laplace-transform evaluation request.
#[derive(Debug, Clone, Copy)]
pub struct LaplaceQuery<'a> {
    /// Laplace argument `s = T / (Pt G(theta0) r0^-alpha)`; nonnegative.
    pub s: f64,
    pub vehicle_model: VehicleModel,
    pub link_kind: LinkKind,
    pub config: &'a ScenarioConfig,
}

impl LaplaceQuery<'_> {
    pub fn evaluate(&self, quad: &QuadratureSpec) -> Result<LaplaceFactor> {
        match (self.link_kind, self.vehicle_model) {
            (LinkKind::Los, VehicleModel::Ppp) => laplace_los_ppp(self.s, self.config, quad),
            (LinkKind::Los, VehicleModel::Pcp) => laplace_los_pcp(self.s, self.config, quad),
            (LinkKind::Nlos, model) => laplace_nlos(self.s, self.config, model, quad),
        }
    }
}

/// A per-road Laplace-transform factor in (0, 1] with its propagated
/// quadrature error.
#[derive(Debug, Clone, Copy)]
pub struct LaplaceFactor {
    pub value: f64,
    pub error_estimate: f64,
}

impl LaplaceFactor {
    const EXACT_ONE: LaplaceFactor = LaplaceFactor { value: 1.0, error_estimate: 0.0 };
}

/// Coverage probability with its factor decomposition.
#[derive(Debug, Clone, Copy)]
pub struct CoverageResult {
    pub p_cov: f64,
    pub p_out: f64,
    /// `exp(-s sigma^2)`.
    pub noise_factor: f64,
    /// Product of the per-LoS-road transforms (1 when masked out).
    pub los_factor: f64,
    /// NLoS aggregate over the fixed or Poisson road count (1 when masked).
    pub nlos_factor: f64,
    /// Propagated quadrature error on `p_cov`.
    pub quad_error: f64,
}

/// Laplace argument `s = T / (Pt * G0 * r0^-alpha)`.
pub fn laplace_s(
    threshold: f64,
    tx_power: f64,
    boresight_gain: f64,
    serving_distance: f64,
    alpha: f64,
) -> Result<f64> {
    if !(threshold >= 0.0) {
        return Err(Error::Parameter(format!("threshold must be >= 0, got {threshold}")));
    }
    if !(tx_power > 0.0 && boresight_gain > 0.0 && serving_distance > 0.0) {
        return Err(Error::Parameter(format!(
            "tx_power, boresight gain and serving distance must be > 0, \
             got {tx_power}, {boresight_gain}, {serving_distance}"
        )));
    }
    Ok(threshold / (tx_power * boresight_gain * serving_distance.powf(-alpha)))
}

/// Angular kernels shared by all transforms: the coupling `s Pt G(theta)` and
/// blockage geometry evaluated on a fixed midpoint grid over one turn.
struct AngularKernel {
    coupling: Vec<f64>,
    /// `|cos theta| + |sin theta|` per node.
    widths: Vec<f64>,
    alpha: f64,
    /// `R * lambda_p * c_bar`, the blockage-mean coefficient.
    blockage_coeff: f64,
    penetration: f64,
    mass_tol: f64,
}

impl AngularKernel {
    fn new(s: f64, config: &ScenarioConfig, profile: &FrequencyProfile, quad: &QuadratureSpec) -> Self {
        let n = ANGULAR_NODES;
        let mut coupling = Vec::with_capacity(n);
        let mut widths = Vec::with_capacity(n);
        for j in 0..n {
            let theta = (j as f64 + 0.5) * 2.0 * PI / n as f64;
            coupling.push(s * config.tx_power * profile.antenna.gain(theta));
            widths.push(theta.cos().abs() + theta.sin().abs());
        }
        AngularKernel {
            coupling,
            widths,
            alpha: config.pathloss_exponent,
            blockage_coeff: config.grid_half_range
                * config.parent_density
                * config.mean_cluster_size,
            penetration: profile.penetration_loss,
            mass_tol: quad.poisson_series_mass_tol,
        }
    }

    /// `E_theta[1 - 1/(1 + s Pt G(theta) |u|^-alpha)]` for a LoS interferer
    /// at along-road coordinate `u`. Bounded by 1 and tends to 1 as u -> 0.
    fn one_minus_v_los(&self, u: f64) -> f64 {
        let d = u.abs().powf(self.alpha);
        let mut acc = 0.0;
        for &a in &self.coupling {
            if a > 0.0 {
                acc += a / (d + a);
            }
        }
        acc / self.coupling.len() as f64
    }

    /// NLoS analogue with `E_K` over the Poisson building count:
    /// `E_theta[sum_k pois(k-1; mu(|u|, theta)) * aL^k / (1 + aL^k)]`.
    fn one_minus_v_nlos(&self, u: f64) -> Result<f64> {
        let r = u.abs();
        let mut acc = 0.0;
        for (&a, &w) in self.coupling.iter().zip(&self.widths) {
            if a > 0.0 {
                acc += self.blockage_series(a, self.blockage_coeff * r * w)?;
            }
        }
        Ok(acc / self.coupling.len() as f64)
    }

    /// `sum_{k>=1} pois(k-1; mu) * aL^k / (1 + aL^k)`, truncated once the
    /// residual Poisson mass drops below the configured tolerance. The
    /// summand decreases geometrically in `k`, so the neglected tail is also
    /// bounded by the residual mass times the last summand.
    fn blockage_series(&self, coupling: f64, mu: f64) -> Result<f64> {
        let penetration = self.penetration;
        let cap = mu + 12.0 * mu.sqrt() + 30.0;
        if !cap.is_finite() || cap > MAX_SERIES_TERMS {
            return Err(Error::Numeric(format!(
                "blockage series: Poisson mean {mu} exceeds the term budget"
            )));
        }
        let cap = cap.ceil() as u64;
        // pmf recurrence; log-space once exp(-mu) would lose all precision
        let log_space = mu > 600.0;
        let mut pmf = if log_space { 0.0 } else { (-mu).exp() };
        let mut log_pmf = -mu;
        let log_mu = if mu > 0.0 { mu.ln() } else { 0.0 };
        let mut attenuated = coupling * penetration;
        let mut acc = 0.0;
        let mut mass = 0.0;
        for k in 1..=cap {
            let p = if log_space { log_pmf.exp() } else { pmf };
            let term = attenuated / (1.0 + attenuated);
            acc += p * term;
            mass += p;
            let residual = 1.0 - mass;
            if residual < self.mass_tol || residual * term <= acc * 1e-16 + f64::MIN_POSITIVE {
                return Ok(acc);
            }
            attenuated *= penetration;
            if log_space {
                log_pmf += log_mu - (k as f64).ln();
            } else {
                pmf *= mu / k as f64;
            }
        }
        Err(Error::Numeric(format!(
            "blockage series truncation failed: mean {mu}, residual mass {:.3e} \
             after {cap} terms",
            1.0 - mass
        )))
    }
}

/// Truncated-renormalized Gaussian daughter-displacement density on
/// `[-Rc, Rc]`.
fn truncated_gaussian_pdf(config: &ScenarioConfig) -> impl Fn(f64) -> f64 {
    let sigma = config.cluster_stddev;
    let mass = erf(config.cluster_half_range / (sigma * SQRT_2));
    let norm = sigma * (2.0 * PI).sqrt() * mass;
    move |y: f64| (-y * y / (2.0 * sigma * sigma)).exp() / norm
}

/// Exponential PGFL shape shared by the PPP transforms:
/// `exp(-P_I lambda int_{-R}^{R} w(x) dx)` with `w` even in `x`.
fn ppp_factor<W>(
    config: &ScenarioConfig,
    intensity: f64,
    quad: &QuadratureSpec,
    w: W,
) -> Result<LaplaceFactor>
where
    W: Fn(f64) -> Result<f64>,
{
    let half = integrate(w, 0.0, config.grid_half_range, quad)?;
    let exponent = intensity * 2.0 * half.value;
    let value = (-exponent).exp();
    Ok(LaplaceFactor {
        value,
        error_estimate: value * intensity * 2.0 * half.error_estimate,
    })
}

/// Thinned-PGFL shape shared by the cluster transforms:
/// `exp(-lambda_p int_{-R}^{R} [1 - exp(-c_bar P_I W(x))] dx)` where
/// `W(x) = int f(y) w(x+y) dy` averages the kernel over the daughter
/// displacement. Even symmetry of `w` makes the outer integrand even.
fn pcp_factor<W>(
    config: &ScenarioConfig,
    quad: &QuadratureSpec,
    w: W,
) -> Result<LaplaceFactor>
where
    W: Fn(f64) -> Result<f64>,
{
    let pdf = truncated_gaussian_pdf(config);
    let rc = config.cluster_half_range;
    let inner_quad = quad.inner();
    let thinned_size = config.mean_cluster_size * config.interference_prob;
    let outer = |x: f64| -> Result<f64> {
        let avg = integrate(|y| Ok(pdf(y) * w(x + y)?), -rc, rc, &inner_quad)?;
        Ok(1.0 - (-thinned_size * avg.value).exp())
    };
    let half = integrate(outer, 0.0, config.grid_half_range, quad)?;
    let exponent = config.parent_density * 2.0 * half.value;
    let value = (-exponent).exp();
    Ok(LaplaceFactor {
        value,
        error_estimate: value * config.parent_density * 2.0 * half.error_estimate,
    })
}

fn check_laplace_args(s: f64, config: &ScenarioConfig) -> Result<()> {
    if !(s >= 0.0) {
        return Err(Error::Parameter(format!("laplace argument must be >= 0, got {s}")));
    }
    config.validate()
}

/// Per-road Laplace transform of LoS interference from PPP vehicles.
pub fn laplace_los_ppp(
    s: f64,
    config: &ScenarioConfig,
    quad: &QuadratureSpec,
) -> Result<LaplaceFactor> {
    check_laplace_args(s, config)?;
    let intensity = config.interference_prob * config.vehicle_density;
    if s == 0.0 || intensity == 0.0 {
        return Ok(LaplaceFactor::EXACT_ONE);
    }
    let profile = FrequencyProfile::from_config(config)?;
    let kernel = AngularKernel::new(s, config, &profile, quad);
    ppp_factor(config, intensity, quad, |x| Ok(kernel.one_minus_v_los(x)))
}

/// Per-road Laplace transform of LoS interference from Thomas-cluster
/// vehicles.
pub fn laplace_los_pcp(
    s: f64,
    config: &ScenarioConfig,
    quad: &QuadratureSpec,
) -> Result<LaplaceFactor> {
    check_laplace_args(s, config)?;
    if s == 0.0 || config.parent_density == 0.0 || config.interference_prob == 0.0 {
        return Ok(LaplaceFactor::EXACT_ONE);
    }
    let profile = FrequencyProfile::from_config(config)?;
    let kernel = AngularKernel::new(s, config, &profile, quad);
    pcp_factor(config, quad, |u| Ok(kernel.one_minus_v_los(u)))
}

/// Per-road Laplace transform of NLoS (blockage-loss) interference for
/// either vehicle model.
pub fn laplace_nlos(
    s: f64,
    config: &ScenarioConfig,
    vehicle_model: VehicleModel,
    quad: &QuadratureSpec,
) -> Result<LaplaceFactor> {
    let profile = FrequencyProfile::from_config(config)?;
    laplace_nlos_with_profile(s, config, vehicle_model, &profile, quad)
}

/// As [`laplace_nlos`] with an explicit frequency profile, so penetration
/// loss and pattern can be varied independently of the carrier presets.
pub fn laplace_nlos_with_profile(
    s: f64,
    config: &ScenarioConfig,
    vehicle_model: VehicleModel,
    profile: &FrequencyProfile,
    quad: &QuadratureSpec,
) -> Result<LaplaceFactor> {
    check_laplace_args(s, config)?;
    if s == 0.0 || config.interference_prob == 0.0 {
        return Ok(LaplaceFactor::EXACT_ONE);
    }
    let kernel = AngularKernel::new(s, config, profile, quad);
    match vehicle_model {
        VehicleModel::Ppp => {
            let intensity = config.interference_prob * config.vehicle_density;
            if intensity == 0.0 {
                return Ok(LaplaceFactor::EXACT_ONE);
            }
            ppp_factor(config, intensity, quad, |x| kernel.one_minus_v_nlos(x))
        }
        VehicleModel::Pcp => {
            if config.parent_density == 0.0 {
                return Ok(LaplaceFactor::EXACT_ONE);
            }
            pcp_factor(config, quad, |u| kernel.one_minus_v_nlos(u))
        }
    }
}

/// Downlink coverage probability for the typical vehicle.
///
/// `p_cov = exp(-s sigma^2) * L_LoS^n_L * A_NLoS` where the NLoS aggregate is
/// `L_NLoS^n` for a fixed road count or `exp(-Lambda (1 - L_NLoS))` for a
/// Poisson-distributed one. The road case masks factors to 1.
pub fn coverage(
    config: &ScenarioConfig,
    vehicle_model: VehicleModel,
    road_case: RoadCase,
    quad: &QuadratureSpec,
) -> Result<CoverageResult> {
    config.validate()?;
    quad.validate()?;
    let profile = FrequencyProfile::from_config(config)?;
    let s = laplace_s(
        config.threshold,
        config.tx_power,
        profile.antenna.boresight_gain(),
        config.serving_distance,
        config.pathloss_exponent,
    )?;
    let noise_factor = (-s * config.noise_power).exp();
    let mut rel_err = 0.0;

    let los_factor = if road_case == RoadCase::OnlyNlos {
        1.0
    } else {
        let per_road = match vehicle_model {
            VehicleModel::Ppp => laplace_los_ppp(s, config, quad)?,
            VehicleModel::Pcp => laplace_los_pcp(s, config, quad)?,
        };
        rel_err += config.n_los as f64 * per_road.error_estimate / per_road.value;
        per_road.value.powi(config.n_los as i32)
    };

    let nlos_factor = if road_case == RoadCase::OnlyLos {
        1.0
    } else {
        let per_road = laplace_nlos_with_profile(s, config, vehicle_model, &profile, quad)?;
        match config.nlos_road_mode {
            NlosRoadMode::Fixed(n) => {
                rel_err += n as f64 * per_road.error_estimate / per_road.value;
                per_road.value.powi(n as i32)
            }
            NlosRoadMode::PoissonMean(mean) => {
                // E[L^n] over n ~ Pois(mean): the Poisson PGF
                rel_err += mean * per_road.error_estimate;
                (-mean * (1.0 - per_road.value)).exp()
            }
        }
    };

    let p_cov = noise_factor * los_factor * nlos_factor;
    Ok(CoverageResult {
        p_cov,
        p_out: 1.0 - p_cov,
        noise_factor,
        los_factor,
        nlos_factor,
        quad_error: p_cov * rel_err,
    })
}
