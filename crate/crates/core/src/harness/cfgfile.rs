//! Flat key-value config files (TOML syntax) and named presets.
//!
//! Powers are given in dBm, the SINR threshold in dB, and angles in degrees;
//! resolution converts to the linear/radian units of [`ScenarioConfig`].
//! Unknown keys are a hard error. Every key is optional: an empty file
//! resolves to the reference parameter set.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::config::{Carrier, NlosRoadMode, RoadCase, ScenarioConfig, VehicleModel};
use crate::error::{Error, Result};
use crate::harness::sweep::{SeriesSpec, SweepSpec, SweepVariable};
use crate::units::{dbm_to_mw, db_to_linear};

/// The raw file schema; see the README for per-key documentation.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    // scenario
    pub grid_half_range: Option<f64>,
    pub cluster_half_range: Option<f64>,
    pub road_density: Option<f64>,
    pub parent_density: Option<f64>,
    pub vehicle_density: Option<f64>,
    pub mean_cluster_size: Option<f64>,
    pub cluster_stddev: Option<f64>,
    pub pathloss_exponent: Option<f64>,
    pub tx_power_dbm: Option<f64>,
    pub interference_prob: Option<f64>,
    pub noise_power_dbm: Option<f64>,
    pub n_los: Option<u32>,
    pub nlos_road_mode: Option<String>,
    pub nlos_mean_roads: Option<f64>,
    pub nlos_road_count: Option<u32>,
    pub serving_distance: Option<f64>,
    pub threshold_db: Option<f64>,
    pub frequency_profile: Option<String>,
    pub antenna_boresight_deg: Option<f64>,
    pub antenna_sigma_deg: Option<f64>,
    pub rng_seed: Option<u64>,
    // sweep
    pub sweep_variable: Option<String>,
    pub sweep_values: Option<Vec<f64>>,
    pub sweep_series: Option<Vec<String>>,
    pub mc_trials: Option<u64>,
}

impl RawConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Resolves the file against the defaults and validates the result.
    pub fn resolve(&self) -> Result<(ScenarioConfig, SweepSpec)> {
        let mut cfg = ScenarioConfig::default();
        if let Some(v) = self.grid_half_range {
            cfg.grid_half_range = v;
        }
        if let Some(v) = self.cluster_half_range {
            cfg.cluster_half_range = v;
        }
        if let Some(v) = self.road_density {
            cfg.road_density = v;
        }
        if let Some(v) = self.parent_density {
            cfg.parent_density = v;
        }
        if let Some(v) = self.mean_cluster_size {
            cfg.mean_cluster_size = v;
        }
        if let Some(v) = self.cluster_stddev {
            cfg.cluster_stddev = v;
        }
        if let Some(v) = self.pathloss_exponent {
            cfg.pathloss_exponent = v;
        }
        if let Some(v) = self.tx_power_dbm {
            cfg.tx_power = dbm_to_mw(v);
        }
        if let Some(v) = self.interference_prob {
            cfg.interference_prob = v;
        }
        if let Some(v) = self.noise_power_dbm {
            cfg.noise_power = dbm_to_mw(v);
        }
        if let Some(v) = self.n_los {
            cfg.n_los = v;
        }
        if let Some(v) = self.serving_distance {
            cfg.serving_distance = v;
        }
        if let Some(v) = self.threshold_db {
            cfg.threshold = db_to_linear(v);
        }
        if let Some(v) = self.antenna_boresight_deg {
            cfg.antenna_boresight_deg = v;
        }
        if let Some(v) = self.antenna_sigma_deg {
            cfg.antenna_sigma_deg = v;
        }
        if let Some(v) = self.rng_seed {
            cfg.rng_seed = v;
        }
        if let Some(v) = &self.frequency_profile {
            cfg.frequency_profile = match v.as_str() {
                "mmwave" => Carrier::MmWave,
                "sub6" => Carrier::Sub6,
                other => {
                    return Err(Error::Config(format!(
                        "frequency_profile must be mmwave|sub6, got '{other}'"
                    )))
                }
            };
        }
        // vehicle density: explicit value breaks the matched-density link
        if let Some(v) = self.vehicle_density {
            cfg.vehicle_density = v;
            cfg.matched_density = false;
        } else {
            cfg.vehicle_density = cfg.parent_density * cfg.mean_cluster_size;
            cfg.matched_density = true;
        }
        cfg.nlos_road_mode = match self.nlos_road_mode.as_deref() {
            None => match (self.nlos_road_count, self.nlos_mean_roads) {
                (Some(_), Some(_)) => {
                    return Err(Error::Config(
                        "nlos_road_count and nlos_mean_roads are mutually exclusive".into(),
                    ))
                }
                (Some(n), None) => NlosRoadMode::Fixed(n),
                (None, Some(m)) => NlosRoadMode::PoissonMean(m),
                (None, None) => cfg.nlos_road_mode,
            },
            Some("fixed") => NlosRoadMode::Fixed(self.nlos_road_count.ok_or_else(|| {
                Error::Config("nlos_road_mode = \"fixed\" requires nlos_road_count".into())
            })?),
            Some("poisson") => NlosRoadMode::PoissonMean(
                self.nlos_mean_roads
                    .unwrap_or(crate::config::DEFAULT_NLOS_MEAN_ROADS),
            ),
            Some(other) => {
                return Err(Error::Config(format!(
                    "nlos_road_mode must be fixed|poisson, got '{other}'"
                )))
            }
        };
        cfg.validate()?;

        let variable = match self.sweep_variable.as_deref() {
            None | Some("r0") => SweepVariable::ServingDistance,
            Some("threshold_db") => SweepVariable::ThresholdDb,
            Some("c_bar") => SweepVariable::MeanClusterSize,
            Some(other) => {
                return Err(Error::Config(format!(
                    "sweep_variable must be r0|threshold_db|c_bar, got '{other}'"
                )))
            }
        };
        let values = match &self.sweep_values {
            Some(v) => v.clone(),
            None => default_values(variable),
        };
        let series = match &self.sweep_series {
            Some(texts) => texts
                .iter()
                .map(|t| SeriesSpec::parse(t))
                .collect::<Result<Vec<_>>>()?,
            None => default_series(),
        };
        let sweep = SweepSpec {
            variable,
            values,
            series,
            mc_trials: self.mc_trials.unwrap_or(0),
        };
        sweep.validate()?;
        Ok((cfg, sweep))
    }
}

fn default_values(variable: SweepVariable) -> Vec<f64> {
    match variable {
        SweepVariable::ServingDistance => (1..=20).map(|i| i as f64 / 10.0).collect(),
        SweepVariable::ThresholdDb => (-5..=5).map(|i| 2.0 * i as f64).collect(),
        SweepVariable::MeanClusterSize => vec![2.0, 5.0, 10.0],
    }
}

fn default_series() -> Vec<SeriesSpec> {
    vec![
        SeriesSpec::new(VehicleModel::Pcp, Carrier::MmWave, RoadCase::Both),
        SeriesSpec::new(VehicleModel::Ppp, Carrier::MmWave, RoadCase::Both),
        SeriesSpec::new(VehicleModel::Pcp, Carrier::Sub6, RoadCase::Both),
        SeriesSpec::new(VehicleModel::Ppp, Carrier::Sub6, RoadCase::Both),
    ]
}

/// Parses config text and resolves it.
pub fn parse_config(text: &str) -> Result<(ScenarioConfig, SweepSpec)> {
    RawConfig::from_toml(text)?.resolve()
}

/// Loads and resolves a config file.
pub fn load_config(path: &Path) -> Result<(ScenarioConfig, SweepSpec)> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

macro_rules! merge_optional_fields {
    ($dst:expr, $src:expr, [$($field:ident),* $(,)?]) => {
        $( if $src.$field.is_some() { $dst.$field = $src.$field.clone(); } )*
    };
}

impl RawConfig {
    /// Overlays every key present in `other` onto `self`.
    fn merge_from(&mut self, other: &RawConfig) {
        merge_optional_fields!(
            self,
            other,
            [
                grid_half_range,
                cluster_half_range,
                road_density,
                parent_density,
                vehicle_density,
                mean_cluster_size,
                cluster_stddev,
                pathloss_exponent,
                tx_power_dbm,
                interference_prob,
                noise_power_dbm,
                n_los,
                nlos_road_mode,
                nlos_mean_roads,
                nlos_road_count,
                serving_distance,
                threshold_db,
                frequency_profile,
                antenna_boresight_deg,
                antenna_sigma_deg,
                rng_seed,
                sweep_variable,
                sweep_values,
                sweep_series,
                mc_trials,
            ]
        );
    }
}

/// Incremental builder over the same schema, re-validating the merged
/// document on every change. Used by the C API.
#[derive(Debug, Clone, Default)]
pub struct ConfigBuilder {
    raw: RawConfig,
}

impl ConfigBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Merges a whole config document; rejected documents leave the builder
    /// untouched.
    pub fn set_document(&mut self, text: &str) -> Result<()> {
        let parsed = RawConfig::from_toml(text)?;
        let mut merged = self.raw.clone();
        merged.merge_from(&parsed);
        merged.resolve()?;
        self.raw = merged;
        Ok(())
    }

    /// Sets one key to a raw TOML value (`"0.5"`, `"\"mmwave\""`, `"[1, 2]"`).
    /// Bare words that are not valid TOML are retried as strings, so
    /// `set("frequency_profile", "mmwave")` works as expected.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let line = format!("{} = {}", key.trim(), value.trim());
        match self.set_document(&line) {
            Ok(()) => Ok(()),
            Err(first_err) => {
                let quoted = format!("{} = \"{}\"", key.trim(), value.trim());
                self.set_document(&quoted).map_err(|_| first_err)
            }
        }
    }

    pub fn resolve(&self) -> Result<(ScenarioConfig, SweepSpec)> {
        self.raw.resolve()
    }
}

/// Named presets: `table2` is the reference parameter set; `fig4` and `fig5`
/// are wider-cluster (`sigma_c = 0.8`) sweep layouts for the standard outage
/// plots.
pub fn preset(name: &str) -> Result<(ScenarioConfig, SweepSpec)> {
    let combos = [
        (VehicleModel::Pcp, Carrier::MmWave),
        (VehicleModel::Ppp, Carrier::MmWave),
        (VehicleModel::Pcp, Carrier::Sub6),
        (VehicleModel::Ppp, Carrier::Sub6),
    ];
    match name {
        "table2" => {
            let cfg = ScenarioConfig::default();
            let sweep = SweepSpec {
                variable: SweepVariable::ServingDistance,
                values: default_values(SweepVariable::ServingDistance),
                series: default_series(),
                mc_trials: 0,
            };
            Ok((cfg, sweep))
        }
        "fig4" => {
            // outage vs r0 for c_bar in {2, 5, 10}; this layout widens the
            // clusters to sigma_c = 0.8, the table2 preset keeps 0.5
            let cfg = ScenarioConfig {
                cluster_stddev: 0.8,
                ..ScenarioConfig::default()
            };
            let mut series = Vec::new();
            for c_bar in [2.0, 5.0, 10.0] {
                for (model, freq) in combos {
                    series.push(SeriesSpec {
                        mean_cluster_size: Some(c_bar),
                        ..SeriesSpec::new(model, freq, RoadCase::Both)
                    });
                }
            }
            let sweep = SweepSpec {
                variable: SweepVariable::ServingDistance,
                values: default_values(SweepVariable::ServingDistance),
                series,
                mc_trials: 0,
            };
            Ok((cfg, sweep))
        }
        "fig5" => {
            // outage vs threshold for r0 in {0.5, 1.0}
            let cfg = ScenarioConfig {
                cluster_stddev: 0.8,
                ..ScenarioConfig::default()
            };
            let mut series = Vec::new();
            for r0 in [0.5, 1.0] {
                for (model, freq) in combos {
                    series.push(SeriesSpec {
                        serving_distance: Some(r0),
                        ..SeriesSpec::new(model, freq, RoadCase::Both)
                    });
                }
            }
            let sweep = SweepSpec {
                variable: SweepVariable::ThresholdDb,
                values: default_values(SweepVariable::ThresholdDb),
                series,
                mc_trials: 0,
            };
            Ok((cfg, sweep))
        }
        other => Err(Error::Config(format!(
            "unknown preset '{other}', expected table2|fig4|fig5"
        ))),
    }
}
