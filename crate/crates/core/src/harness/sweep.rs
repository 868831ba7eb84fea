//! Parameter sweeps: evaluate analytic coverage (and optionally the Monte
//! Carlo estimate) over a grid of one variable for several scenario series.

use rayon::prelude::*;

use crate::analytic::coverage;
use crate::config::{Carrier, RoadCase, ScenarioConfig, VehicleModel};
use crate::error::{Error, Result};
use crate::montecarlo::estimate_coverage;
use crate::quad::QuadratureSpec;
use crate::units::db_to_linear;

/// Variable swept along the x axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// Serving distance `r0`, grid units.
    ServingDistance,
    /// SINR threshold, dB.
    ThresholdDb,
    /// Mean cluster size; re-derives the PPP density in matched mode.
    MeanClusterSize,
}

impl SweepVariable {
    pub fn column_name(&self) -> &'static str {
        match self {
            SweepVariable::ServingDistance => "r0",
            SweepVariable::ThresholdDb => "threshold_db",
            SweepVariable::MeanClusterSize => "c_bar",
        }
    }
}

/// One curve of a sweep: a model/frequency/road-case combination, optionally
/// pinning a serving distance or cluster size so one figure can carry several
/// parameterizations.
#[derive(Debug, Clone, Copy)]
pub struct SeriesSpec {
    pub vehicle_model: VehicleModel,
    pub frequency: Carrier,
    pub road_case: RoadCase,
    pub serving_distance: Option<f64>,
    pub mean_cluster_size: Option<f64>,
}

impl SeriesSpec {
    pub fn new(vehicle_model: VehicleModel, frequency: Carrier, road_case: RoadCase) -> Self {
        SeriesSpec {
            vehicle_model,
            frequency,
            road_case,
            serving_distance: None,
            mean_cluster_size: None,
        }
    }

    /// Stable identifier used in CSV rows and legends, e.g.
    /// `pcp-mmwave-both-r0=0.5`.
    pub fn id(&self) -> String {
        let model = match self.vehicle_model {
            VehicleModel::Ppp => "ppp",
            VehicleModel::Pcp => "pcp",
        };
        let freq = match self.frequency {
            Carrier::MmWave => "mmwave",
            Carrier::Sub6 => "sub6",
        };
        let case = match self.road_case {
            RoadCase::OnlyLos => "only-los",
            RoadCase::OnlyNlos => "only-nlos",
            RoadCase::Both => "both",
        };
        let mut id = format!("{model}-{freq}-{case}");
        if let Some(r0) = self.serving_distance {
            id.push_str(&format!("-r0={r0}"));
        }
        if let Some(c) = self.mean_cluster_size {
            id.push_str(&format!("-cbar={c}"));
        }
        id
    }

    /// Parses the compact `model:freq:case[:r0=..][:cbar=..]` form used in
    /// config files.
    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = text.split(':');
        let bad = |detail: &str| Error::Config(format!("series '{text}': {detail}"));
        let model = match parts.next() {
            Some("ppp") => VehicleModel::Ppp,
            Some("pcp") => VehicleModel::Pcp,
            other => return Err(bad(&format!("vehicle model must be ppp|pcp, got {other:?}"))),
        };
        let freq = match parts.next() {
            Some("mmwave") => Carrier::MmWave,
            Some("sub6") => Carrier::Sub6,
            other => return Err(bad(&format!("frequency must be mmwave|sub6, got {other:?}"))),
        };
        let case = match parts.next() {
            Some("both") => RoadCase::Both,
            Some("only-los") | Some("only_los") => RoadCase::OnlyLos,
            Some("only-nlos") | Some("only_nlos") => RoadCase::OnlyNlos,
            other => {
                return Err(bad(&format!(
                    "road case must be both|only-los|only-nlos, got {other:?}"
                )))
            }
        };
        let mut series = SeriesSpec::new(model, freq, case);
        for extra in parts {
            if let Some(v) = extra.strip_prefix("r0=") {
                series.serving_distance =
                    Some(v.parse().map_err(|_| bad(&format!("bad r0 value '{v}'")))?);
            } else if let Some(v) = extra.strip_prefix("cbar=") {
                series.mean_cluster_size =
                    Some(v.parse().map_err(|_| bad(&format!("bad cbar value '{v}'")))?);
            } else {
                return Err(bad(&format!("unknown series option '{extra}'")));
            }
        }
        Ok(series)
    }
}

/// A sweep request: the variable, its grid, and the series to evaluate.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    /// Values in natural units (dB for thresholds); strictly increasing.
    pub values: Vec<f64>,
    pub series: Vec<SeriesSpec>,
    /// Monte Carlo trials per point; 0 evaluates analytically only.
    pub mc_trials: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Invariant("sweep values nonempty".into()));
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invariant("sweep values strictly increasing".into()));
        }
        Ok(())
    }
}

/// One evaluated sweep point of one series.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub value: f64,
    pub series_id: String,
    pub p_out_analytic: f64,
    pub p_out_mc: Option<f64>,
    pub ci99: Option<f64>,
}

/// A completed sweep with the metadata needed to reproduce it.
#[derive(Debug, Clone)]
pub struct CoverageCurve {
    pub sweep_var: &'static str,
    pub points: Vec<CurvePoint>,
    pub base_config: ScenarioConfig,
    pub seed: u64,
    pub tool_version: &'static str,
}

fn configure_point(
    base: &ScenarioConfig,
    series: &SeriesSpec,
    variable: SweepVariable,
    value: f64,
) -> ScenarioConfig {
    let mut cfg = base.clone();
    cfg.frequency_profile = series.frequency;
    if let Some(r0) = series.serving_distance {
        cfg.serving_distance = r0;
    }
    if let Some(c) = series.mean_cluster_size {
        cfg.set_mean_cluster_size(c);
    }
    match variable {
        SweepVariable::ServingDistance => cfg.serving_distance = value,
        SweepVariable::ThresholdDb => cfg.threshold = db_to_linear(value),
        SweepVariable::MeanClusterSize => cfg.set_mean_cluster_size(value),
    }
    cfg
}

/// Evaluates the sweep. Points are dispatched to the worker pool; output
/// order is (series, value) regardless of scheduling, and a fixed seed gives
/// identical results run to run.
pub fn run_sweep(
    config: &ScenarioConfig,
    sweep: &SweepSpec,
    quad: &QuadratureSpec,
) -> Result<CoverageCurve> {
    config.validate()?;
    sweep.validate()?;

    let tasks: Vec<(usize, &SeriesSpec, f64)> = sweep
        .series
        .iter()
        .flat_map(|series| sweep.values.iter().map(move |&v| (series, v)))
        .enumerate()
        .map(|(i, (s, v))| (i, s, v))
        .collect();

    let mut points: Vec<(usize, CurvePoint)> = tasks
        .par_iter()
        .map(|&(index, series, value)| -> Result<(usize, CurvePoint)> {
            let cfg = configure_point(config, series, sweep.variable, value);
            let analytic =
                coverage(&cfg, series.vehicle_model, series.road_case, quad).map_err(|e| {
                    Error::Numeric(format!(
                        "sweep point {}={} series {}: {e}",
                        sweep.variable.column_name(),
                        value,
                        series.id()
                    ))
                })?;
            let (p_out_mc, ci99) = if sweep.mc_trials > 0 {
                let est = estimate_coverage(
                    &cfg,
                    series.vehicle_model,
                    series.road_case,
                    sweep.mc_trials,
                    config.rng_seed,
                )
                .map_err(|e| {
                    Error::Numeric(format!(
                        "sweep point {}={} series {}: {e}",
                        sweep.variable.column_name(),
                        value,
                        series.id()
                    ))
                })?;
                (Some(1.0 - est.p_hat), Some(est.ci99_half_width))
            } else {
                (None, None)
            };
            Ok((
                index,
                CurvePoint {
                    value,
                    series_id: series.id(),
                    p_out_analytic: analytic.p_out,
                    p_out_mc,
                    ci99,
                },
            ))
        })
        .collect::<Result<_>>()?;
    points.sort_by_key(|(i, _)| *i);

    Ok(CoverageCurve {
        sweep_var: sweep.variable.column_name(),
        points: points.into_iter().map(|(_, p)| p).collect(),
        base_config: config.clone(),
        seed: config.rng_seed,
        tool_version: crate::VERSION,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn series_parsing_and_ids() {
        for (text, id) in [
            ("pcp:mmwave:both", "pcp-mmwave-both"),
            ("ppp:sub6:only-los", "ppp-sub6-only-los"),
            ("pcp:mmwave:both:r0=0.5", "pcp-mmwave-both-r0=0.5"),
            ("ppp:mmwave:only-nlos:cbar=2", "ppp-mmwave-only-nlos-cbar=2"),
            ("pcp:sub6:both:r0=1:cbar=10", "pcp-sub6-both-r0=1-cbar=10"),
        ] {
            assert_eq!(SeriesSpec::parse(text).unwrap().id(), id);
        }
        assert!(SeriesSpec::parse("pcp:mmwave").is_err());
        assert!(SeriesSpec::parse("suv:mmwave:both").is_err());
        assert!(SeriesSpec::parse("pcp:mmwave:both:bogus=1").is_err());
        assert!(SeriesSpec::parse("pcp:mmwave:both:r0=abc").is_err());
    }

    #[test]
    fn sweep_values_must_increase() {
        let sweep = SweepSpec {
            variable: SweepVariable::ThresholdDb,
            values: vec![0.0, 0.0],
            series: vec![SeriesSpec::new(
                VehicleModel::Ppp,
                Carrier::Sub6,
                RoadCase::OnlyLos,
            )],
            mc_trials: 0,
        };
        assert!(sweep.validate().is_err());
        let empty = SweepSpec { values: vec![], ..sweep };
        assert!(empty.validate().is_err());
    }

    #[test]
    fn threshold_sweep_outage_is_nondecreasing() {
        let cfg = ScenarioConfig::default();
        let sweep = SweepSpec {
            variable: SweepVariable::ThresholdDb,
            values: vec![-10.0, -5.0, 0.0, 5.0, 10.0],
            series: vec![SeriesSpec::new(
                VehicleModel::Pcp,
                Carrier::MmWave,
                RoadCase::Both,
            )],
            mc_trials: 0,
        };
        let curve = run_sweep(&cfg, &sweep, &quick_quad()).unwrap();
        let outages: Vec<f64> = curve.points.iter().map(|p| p.p_out_analytic).collect();
        assert!(outages.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{outages:?}");
    }

    #[test]
    fn single_point_sweep_matches_direct_evaluation() {
        let cfg = ScenarioConfig::default();
        let sweep = SweepSpec {
            variable: SweepVariable::ServingDistance,
            values: vec![0.75],
            series: vec![SeriesSpec::new(
                VehicleModel::Ppp,
                Carrier::MmWave,
                RoadCase::Both,
            )],
            mc_trials: 0,
        };
        let curve = run_sweep(&cfg, &sweep, &quick_quad()).unwrap();
        let direct_cfg = ScenarioConfig { serving_distance: 0.75, ..cfg };
        let direct =
            coverage(&direct_cfg, VehicleModel::Ppp, RoadCase::Both, &quick_quad()).unwrap();
        assert_eq!(curve.points.len(), 1);
        assert_eq!(curve.points[0].p_out_analytic, direct.p_out);
    }

    #[test]
    fn pcp_curves_sit_at_or_below_ppp() {
        // clustering should never increase outage along an r0 sweep
        let cfg = ScenarioConfig::default();
        let series: Vec<SeriesSpec> = vec![
            SeriesSpec::new(VehicleModel::Pcp, Carrier::MmWave, RoadCase::Both),
            SeriesSpec::new(VehicleModel::Ppp, Carrier::MmWave, RoadCase::Both),
        ];
        let sweep = SweepSpec {
            variable: SweepVariable::ServingDistance,
            values: vec![0.25, 0.75, 1.5],
            series,
            mc_trials: 0,
        };
        let curve = run_sweep(&cfg, &sweep, &quick_quad()).unwrap();
        let (pcp, ppp): (Vec<_>, Vec<_>) = curve
            .points
            .iter()
            .partition(|p| p.series_id.starts_with("pcp"));
        for (a, b) in pcp.iter().zip(&ppp) {
            assert!(
                a.p_out_analytic <= b.p_out_analytic + 1e-12,
                "r0={}: pcp {} vs ppp {}",
                a.value,
                a.p_out_analytic,
                b.p_out_analytic
            );
        }
    }

    #[test]
    fn failures_identify_the_sweep_point() {
        let cfg = ScenarioConfig::default();
        let sweep = SweepSpec {
            variable: SweepVariable::ServingDistance,
            values: vec![-1.0, 0.5],
            series: vec![SeriesSpec::new(
                VehicleModel::Ppp,
                Carrier::Sub6,
                RoadCase::OnlyLos,
            )],
            mc_trials: 0,
        };
        let msg = run_sweep(&cfg, &sweep, &quick_quad()).unwrap_err().to_string();
        assert!(msg.contains("r0=-1"), "{msg}");
        assert!(msg.contains("ppp-sub6-only-los"), "{msg}");
    }

    #[test]
    fn mc_columns_populated_when_requested() {
        let cfg = ScenarioConfig::default();
        let sweep = SweepSpec {
            variable: SweepVariable::ThresholdDb,
            values: vec![-10.0, 0.0],
            series: vec![SeriesSpec::new(
                VehicleModel::Ppp,
                Carrier::Sub6,
                RoadCase::OnlyLos,
            )],
            mc_trials: 3000,
        };
        let curve = run_sweep(&cfg, &sweep, &quick_quad()).unwrap();
        for p in &curve.points {
            let mc = p.p_out_mc.unwrap();
            let ci = p.ci99.unwrap();
            assert!((0.0..=1.0).contains(&mc));
            assert!(ci >= 0.0);
            assert!((p.p_out_analytic - mc).abs() < 0.05);
        }
    }
}
