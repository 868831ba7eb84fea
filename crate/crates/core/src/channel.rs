//! Channel primitives: distance path loss, building-penetration blockage
//! loss, Rayleigh fading draws, and the frequency-dependent antenna patterns.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp, Poisson};
use statrs::function::erf::erf;

use crate::config::{Carrier, ScenarioConfig};
use crate::error::{Error, Result};
use crate::units::{db_to_linear, deg_to_rad, wrap_angle};

/// Receive/transmit gain as a function of the link angle.
///
/// Both variants integrate to `2*pi` over a full turn, so the total radiated
/// gain is identical across carriers and only its angular concentration
/// differs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AntennaPattern {
    /// Gaussian mainlobe approximation of a lens antenna.
    GaussianMainlobe {
        /// Mainlobe direction, radians.
        boresight: f64,
        /// Mainlobe width, radians.
        sigma: f64,
        /// Peak gain; fixed by the normalization contract.
        scale: f64,
    },
    /// Uniform gain for all angles.
    Omni { gain: f64 },
}

impl AntennaPattern {
    /// Gaussian mainlobe with peak gain chosen so the pattern integrates to
    /// `2*pi` over one turn, matching the omni pattern's total gain.
    pub fn gaussian_mainlobe(boresight: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::Parameter(format!(
                "antenna sigma must be > 0, got {sigma}"
            )));
        }
        // integral over one wrapped turn: sigma * sqrt(2*pi) * erf(pi / (sigma*sqrt(2)))
        let integral = sigma * (2.0 * PI).sqrt() * erf(PI / (sigma * std::f64::consts::SQRT_2));
        Ok(AntennaPattern::GaussianMainlobe {
            boresight,
            sigma,
            scale: 2.0 * PI / integral,
        })
    }

    pub fn omni() -> Self {
        AntennaPattern::Omni { gain: 1.0 }
    }

    /// Gain at angle `theta`; 2*pi-periodic and nonnegative.
    pub fn gain(&self, theta: f64) -> f64 {
        match *self {
            AntennaPattern::Omni { gain } => gain,
            AntennaPattern::GaussianMainlobe { boresight, sigma, scale } => {
                let d = wrap_angle(theta - boresight);
                scale * (-d * d / (2.0 * sigma * sigma)).exp()
            }
        }
    }

    /// Peak gain, attained at the boresight. The serving link is assumed
    /// boresight-aligned.
    pub fn boresight_gain(&self) -> f64 {
        match *self {
            AntennaPattern::Omni { gain } => gain,
            AntennaPattern::GaussianMainlobe { scale, .. } => scale,
        }
    }
}

/// Carrier-dependent channel selection: penetration loss per building plus
/// the antenna pattern.
#[derive(Debug, Clone)]
pub struct FrequencyProfile {
    pub carrier: Carrier,
    /// Linear power ratio lost per penetrated building, in (0, 1).
    pub penetration_loss: f64,
    pub antenna: AntennaPattern,
}

impl FrequencyProfile {
    /// mmWave: -40 dB per building, Gaussian mainlobe antenna.
    pub fn mmwave(boresight: f64, sigma: f64) -> Result<Self> {
        Ok(FrequencyProfile {
            carrier: Carrier::MmWave,
            penetration_loss: db_to_linear(-40.0),
            antenna: AntennaPattern::gaussian_mainlobe(boresight, sigma)?,
        })
    }

    /// Sub-6 GHz: -30 dB per building, omnidirectional antenna.
    pub fn sub6() -> Self {
        FrequencyProfile {
            carrier: Carrier::Sub6,
            penetration_loss: db_to_linear(-30.0),
            antenna: AntennaPattern::omni(),
        }
    }

    pub fn from_config(config: &ScenarioConfig) -> Result<Self> {
        match config.frequency_profile {
            Carrier::MmWave => FrequencyProfile::mmwave(
                deg_to_rad(config.antenna_boresight_deg),
                deg_to_rad(config.antenna_sigma_deg),
            ),
            Carrier::Sub6 => Ok(FrequencyProfile::sub6()),
        }
    }
}

/// Stochastic state of one link.
#[derive(Debug, Clone, Copy)]
pub struct LinkDraw {
    /// Rayleigh power fading, Exp(1).
    pub fading: f64,
    /// Angle of arrival, uniform on [0, 2*pi).
    pub aoa: f64,
    /// Buildings crossed (NLoS links only); at least 1.
    pub blockage_count: u32,
}

impl LinkDraw {
    /// Draws the state of one NLoS link of length `r` crossing a random
    /// number of buildings.
    pub fn nlos<R: Rng + ?Sized>(
        r: f64,
        grid_half_range: f64,
        parent_density: f64,
        mean_cluster_size: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let fading = sample_fading(rng);
        let aoa = sample_aoa(rng);
        let mu = blockage_mean(r, aoa, grid_half_range, parent_density, mean_cluster_size);
        Ok(LinkDraw {
            fading,
            aoa,
            blockage_count: 1 + sample_poisson_u32(mu, rng)?,
        })
    }
}

pub fn sample_fading<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp::new(1.0).unwrap().sample(rng)
}

pub fn sample_aoa<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(0.0..2.0 * PI)
}

pub fn sample_poisson_u32<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<u32> {
    if mean == 0.0 {
        return Ok(0);
    }
    let dist =
        Poisson::new(mean).map_err(|e| Error::Parameter(format!("poisson mean {mean}: {e}")))?;
    let draw: f64 = dist.sample(rng);
    Ok(draw as u32)
}

/// LoS distance path loss `r^(-alpha)`.
pub fn pathloss_los(r: f64, alpha: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!(
            "pathloss distance must be > 0, got {r}"
        )));
    }
    Ok(r.powf(-alpha))
}

/// Mean number of extra buildings crossed by an NLoS link of length `r` at
/// angle `theta`: `R * lambda_p * c_bar * r * (|cos theta| + |sin theta|)`.
pub fn blockage_mean(
    r: f64,
    theta: f64,
    grid_half_range: f64,
    parent_density: f64,
    mean_cluster_size: f64,
) -> f64 {
    grid_half_range
        * parent_density
        * mean_cluster_size
        * r
        * (theta.cos().abs() + theta.sin().abs())
}

/// Aggregate penetration loss `L^k` through `k >= 1` buildings.
pub fn blockage_loss(penetration: f64, crossings: u32) -> Result<f64> {
    if !(penetration > 0.0 && penetration < 1.0) {
        return Err(Error::Parameter(format!(
            "penetration loss must lie in (0, 1), got {penetration}"
        )));
    }
    if crossings < 1 {
        return Err(Error::Parameter(
            "an NLoS link crosses at least one building".into(),
        ));
    }
    Ok(penetration.powi(crossings as i32))
}

/// Received power of a boresight-aligned serving link:
/// `Pt * G(theta0) * h * r^(-alpha)`.
pub fn received_power(
    tx_power: f64,
    pattern: &AntennaPattern,
    theta0: f64,
    fading: f64,
    distance: f64,
    alpha: f64,
) -> Result<f64> {
    if !(fading >= 0.0) {
        return Err(Error::Parameter(format!(
            "fading must be >= 0, got {fading}"
        )));
    }
    Ok(tx_power * pattern.gain(theta0) * fading * pathloss_los(distance, alpha)?)
}
