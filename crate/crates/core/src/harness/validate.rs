//! Oracle-agreement validation: the analytic coverage value must sit inside
//! the Monte Carlo confidence interval across a grid of scenarios.

use rayon::prelude::*;
use statrs::distribution::{Beta, ContinuousCDF};

use crate::analytic::coverage;
use crate::config::{Carrier, RoadCase, ScenarioConfig, VehicleModel};
use crate::error::{Error, Result};
use crate::montecarlo::{estimate_coverage, CoverageEstimate};
use crate::quad::QuadratureSpec;
use crate::units::db_to_linear;

/// One evaluated cell of the agreement grid.
#[derive(Debug, Clone)]
pub struct ValidationCell {
    pub road_case: RoadCase,
    pub vehicle_model: VehicleModel,
    pub frequency: Carrier,
    pub threshold_db: f64,
    pub analytic_p_cov: f64,
    pub estimate: CoverageEstimate,
    /// Exact binomial (Clopper–Pearson) 99% interval on the coverage
    /// probability; unlike the Wald half-width this stays informative when
    /// every trial lands on one side.
    pub ci_low: f64,
    pub ci_high: f64,
    pub agrees: bool,
}

impl ValidationCell {
    pub fn label(&self) -> String {
        format!(
            "{:?}/{:?}/{:?}/T={}dB",
            self.road_case, self.vehicle_model, self.frequency, self.threshold_db
        )
    }
}

/// Outcome of the full grid.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub cells: Vec<ValidationCell>,
    pub agreeing: usize,
    pub required: usize,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.agreeing >= self.required
    }
}

/// Exact binomial 99% confidence interval for `successes` out of `trials`.
pub fn clopper_pearson_ci99(successes: u64, trials: u64) -> (f64, f64) {
    let alpha = 0.01_f64;
    let k = successes as f64;
    let n = trials as f64;
    let low = if successes == 0 {
        0.0
    } else {
        Beta::new(k, n - k + 1.0)
            .expect("valid beta parameters")
            .inverse_cdf(alpha / 2.0)
    };
    let high = if successes == trials {
        1.0
    } else {
        Beta::new(k + 1.0, n - k)
            .expect("valid beta parameters")
            .inverse_cdf(1.0 - alpha / 2.0)
    };
    (low, high)
}

/// Runs the 3 x 2 x 2 x 3 grid (road case x vehicle model x frequency x
/// threshold in {-10, 0, 10} dB) against `base`, requiring agreement in at
/// least 33 of the 36 cells.
pub fn oracle_agreement_grid(
    base: &ScenarioConfig,
    trials: u64,
    quad: &QuadratureSpec,
) -> Result<ValidationReport> {
    base.validate()?;
    let road_cases = [RoadCase::OnlyLos, RoadCase::OnlyNlos, RoadCase::Both];
    let models = [VehicleModel::Ppp, VehicleModel::Pcp];
    let carriers = [Carrier::MmWave, Carrier::Sub6];
    let thresholds_db = [-10.0, 0.0, 10.0];

    let mut grid = Vec::new();
    for road_case in road_cases {
        for model in models {
            for carrier in carriers {
                for t_db in thresholds_db {
                    grid.push((road_case, model, carrier, t_db));
                }
            }
        }
    }

    let cells: Vec<ValidationCell> = grid
        .par_iter()
        .map(|&(road_case, model, carrier, t_db)| -> Result<ValidationCell> {
            let cfg = ScenarioConfig {
                frequency_profile: carrier,
                threshold: db_to_linear(t_db),
                ..base.clone()
            };
            let analytic = coverage(&cfg, model, road_case, quad)?.p_cov;
            let estimate = estimate_coverage(&cfg, model, road_case, trials, base.rng_seed)?;
            let (ci_low, ci_high) =
                clopper_pearson_ci99(estimate.covered_count(), estimate.trials);
            Ok(ValidationCell {
                road_case,
                vehicle_model: model,
                frequency: carrier,
                threshold_db: t_db,
                analytic_p_cov: analytic,
                estimate,
                ci_low,
                ci_high,
                agrees: ci_low <= analytic && analytic <= ci_high,
            })
        })
        .collect::<Result<_>>()?;

    let agreeing = cells.iter().filter(|c| c.agrees).count();
    let required = (cells.len() * 33).div_ceil(36);
    Ok(ValidationReport { cells, agreeing, required })
}

/// Convenience entry for the CLI: errors if the grid disagrees.
pub fn require_oracle_agreement(
    base: &ScenarioConfig,
    trials: u64,
    quad: &QuadratureSpec,
) -> Result<ValidationReport> {
    let report = oracle_agreement_grid(base, trials, quad)?;
    if report.passed() {
        Ok(report)
    } else {
        Err(Error::Numeric(format!(
            "oracle agreement failed: {}/{} cells inside the 99% CI, need {}",
            report.agreeing,
            report.cells.len(),
            report.required
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn clopper_pearson_degenerate_counts() {
        let (lo, hi) = clopper_pearson_ci99(0, 100_000);
        assert_eq!(lo, 0.0);
        // upper bound 1 - (alpha/2)^(1/n)
        assert_relative_eq!(hi, 1.0 - (0.005f64).powf(1.0 / 1e5), max_relative = 1e-6);
        let (lo, hi) = clopper_pearson_ci99(100_000, 100_000);
        assert_eq!(hi, 1.0);
        assert_relative_eq!(lo, (0.005f64).powf(1.0 / 1e5), max_relative = 1e-6);
    }

    #[test]
    fn clopper_pearson_contains_point_estimate() {
        for (k, n) in [(1u64, 1000u64), (500, 1000), (999, 1000), (30, 100_000)] {
            let (lo, hi) = clopper_pearson_ci99(k, n);
            let p = k as f64 / n as f64;
            assert!(lo < p && p < hi, "k={k} n={n}: [{lo}, {hi}] vs {p}");
            // near-Wald width for interior counts
            if (0.1..0.9).contains(&p) {
                let wald = 2.576 * (p * (1.0 - p) / n as f64).sqrt();
                assert!((hi - lo) < 3.0 * wald);
            }
        }
    }

    #[test]
    fn small_grid_agrees() {
        // trimmed-down version of the full agreement run (the acceptance
        // suite exercises the real one at 1e5 trials)
        let base = ScenarioConfig::default();
        let quad = QuadratureSpec::default();
        let report = oracle_agreement_grid(&base, 20_000, &quad).unwrap();
        assert_eq!(report.cells.len(), 36);
        assert!(
            report.agreeing >= report.required,
            "{}/{} cells agreed",
            report.agreeing,
            report.cells.len()
        );
    }
}
