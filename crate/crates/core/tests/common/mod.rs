//! Brute-force fixed-grid oracles for the per-road Laplace transforms.
//!
//! These deliberately share no code with the library: gains, truncated
//! Gaussian weights, and the angular average are all recomputed here from
//! first principles on midpoint grids, so they form an independent route to
//! the same integrals.

use std::f64::consts::PI;

/// Antenna gain for the oracle: either unit omni or a wrapped Gaussian
/// mainlobe normalized numerically so the total gain over one turn is 2*pi.
#[derive(Clone, Copy)]
pub enum OracleGain {
    Omni,
    Gaussian { boresight: f64, sigma: f64 },
}

impl OracleGain {
    fn scale(&self) -> f64 {
        match *self {
            OracleGain::Omni => 1.0,
            OracleGain::Gaussian { boresight, sigma } => {
                let n = 100_000;
                let dt = 2.0 * PI / n as f64;
                let mut sum = 0.0;
                for j in 0..n {
                    let theta = (j as f64 + 0.5) * dt;
                    sum += unnormalized_gain(theta, boresight, sigma) * dt;
                }
                2.0 * PI / sum
            }
        }
    }

    fn values(&self, nodes: usize) -> Vec<f64> {
        let scale = self.scale();
        (0..nodes)
            .map(|j| {
                let theta = (j as f64 + 0.5) * 2.0 * PI / nodes as f64;
                match *self {
                    OracleGain::Omni => 1.0,
                    OracleGain::Gaussian { boresight, sigma } => {
                        scale * unnormalized_gain(theta, boresight, sigma)
                    }
                }
            })
            .collect()
    }
}

fn unnormalized_gain(theta: f64, boresight: f64, sigma: f64) -> f64 {
    let mut d = (theta - boresight) % (2.0 * PI);
    if d > PI {
        d -= 2.0 * PI;
    } else if d <= -PI {
        d += 2.0 * PI;
    }
    (-d * d / (2.0 * sigma * sigma)).exp()
}

/// Scenario slice the oracles need.
pub struct OracleScenario {
    pub s: f64,
    pub tx_power: f64,
    pub alpha: f64,
    pub grid_half_range: f64,
    pub cluster_half_range: f64,
    pub cluster_stddev: f64,
    pub parent_density: f64,
    pub vehicle_density: f64,
    pub mean_cluster_size: f64,
    pub interference_prob: f64,
    pub gain: OracleGain,
}

/// Fixed-grid Riemann evaluation of the LoS PPP transform:
/// `exp(-P_I lambda_v int int p_AoA / (1 + (s Pt G l)^-1) dtheta dx)`
/// on a 10^4 x 10^3 midpoint grid.
pub fn riemann_los_ppp(sc: &OracleScenario) -> f64 {
    let nx = 10_000;
    let ntheta = 1_000;
    let r = sc.grid_half_range;
    let dx = 2.0 * r / nx as f64;
    let gains = sc.gain.values(ntheta);

    let mut integral = 0.0;
    for i in 0..nx {
        let x = -r + (i as f64 + 0.5) * dx;
        let loss = x.abs().powf(-sc.alpha);
        let mut theta_avg = 0.0;
        for g in &gains {
            let coupled = sc.s * sc.tx_power * g * loss;
            theta_avg += 1.0 / (1.0 + 1.0 / coupled);
        }
        integral += theta_avg / ntheta as f64 * dx;
    }
    (-sc.interference_prob * sc.vehicle_density * integral).exp()
}

/// Nested fixed-grid Riemann evaluation of the LoS cluster transform with
/// per-daughter thinning:
/// `exp(-lambda_p int [1 - exp(-c_bar P_I (1 - inner(x)))] dx)` where
/// `inner(x) = int f(y) E_theta[(1 + s Pt G l(|x+y|))^-1] dy`.
///
/// The x and y grids share one step so the kernel can be tabulated over the
/// sum coordinate once.
pub fn riemann_los_pcp(sc: &OracleScenario) -> f64 {
    let r = sc.grid_half_range;
    let rc = sc.cluster_half_range;
    let nx = 4_000usize;
    let step = 2.0 * r / nx as f64;
    let ny = (2.0 * rc / step).round() as usize;
    let ntheta = 512;
    let gains = sc.gain.values(ntheta);

    // kernel deficit 1 - E_theta[(1 + s Pt G l)^-1] tabulated over the sum
    // coordinate u = x_i + y_j = -(r + rc) + (i + j + 1) * step
    let nu = nx + ny - 1;
    let mut deficit = vec![0.0; nu];
    for (k, d) in deficit.iter_mut().enumerate() {
        let u = -(r + rc) + (k as f64 + 1.0) * step;
        let denom = u.abs().powf(sc.alpha);
        let mut acc = 0.0;
        for g in &gains {
            let a = sc.s * sc.tx_power * g;
            acc += a / (denom + a);
        }
        *d = acc / ntheta as f64;
    }

    // truncated Gaussian weights, normalized on the grid
    let mut weights = vec![0.0; ny];
    let mut mass = 0.0;
    for (j, w) in weights.iter_mut().enumerate() {
        let y = -rc + (j as f64 + 0.5) * step;
        *w = (-y * y / (2.0 * sc.cluster_stddev * sc.cluster_stddev)).exp();
        mass += *w * step;
    }
    for w in &mut weights {
        *w /= mass;
    }

    let thinned = sc.mean_cluster_size * sc.interference_prob;
    let mut outer = 0.0;
    for i in 0..nx {
        let mut avg_deficit = 0.0;
        for (j, w) in weights.iter().enumerate() {
            avg_deficit += w * deficit[i + j] * step;
        }
        outer += (1.0 - (-thinned * avg_deficit).exp()) * step;
    }
    (-sc.parent_density * outer).exp()
}

/// Nested fixed-grid Riemann evaluation of the NLoS cluster transform: the
/// LoS kernel is replaced by the expectation of the blockage-attenuated
/// kernel over the Poisson building count, summed to a fixed 400 terms.
pub fn riemann_nlos_pcp(sc: &OracleScenario, penetration: f64) -> f64 {
    let r = sc.grid_half_range;
    let rc = sc.cluster_half_range;
    let nx = 2_000usize;
    let step = 2.0 * r / nx as f64;
    let ny = (2.0 * rc / step).round() as usize;
    let ntheta = 256;
    let gains = sc.gain.values(ntheta);
    let blockage_coeff = r * sc.parent_density * sc.mean_cluster_size;

    let nu = nx + ny - 1;
    let mut deficit = vec![0.0; nu];
    for (k, d) in deficit.iter_mut().enumerate() {
        let u = -(r + rc) + (k as f64 + 1.0) * step;
        let mut acc = 0.0;
        for (j, g) in gains.iter().enumerate() {
            let theta = (j as f64 + 0.5) * 2.0 * PI / ntheta as f64;
            let a = sc.s * sc.tx_power * g;
            let mu = blockage_coeff * u.abs() * (theta.cos().abs() + theta.sin().abs());
            let mut pmf = (-mu).exp();
            let mut attenuated = a * penetration;
            let mut series = 0.0;
            for n in 1..=400u32 {
                series += pmf * attenuated / (1.0 + attenuated);
                pmf *= mu / n as f64;
                attenuated *= penetration;
            }
            acc += series;
        }
        *d = acc / ntheta as f64;
    }

    let mut weights = vec![0.0; ny];
    let mut mass = 0.0;
    for (j, w) in weights.iter_mut().enumerate() {
        let y = -rc + (j as f64 + 0.5) * step;
        *w = (-y * y / (2.0 * sc.cluster_stddev * sc.cluster_stddev)).exp();
        mass += *w * step;
    }
    for w in &mut weights {
        *w /= mass;
    }

    let thinned = sc.mean_cluster_size * sc.interference_prob;
    let mut outer = 0.0;
    for i in 0..nx {
        let mut avg_deficit = 0.0;
        for (j, w) in weights.iter().enumerate() {
            avg_deficit += w * deficit[i + j] * step;
        }
        outer += (1.0 - (-thinned * avg_deficit).exp()) * step;
    }
    (-sc.parent_density * outer).exp()
}
