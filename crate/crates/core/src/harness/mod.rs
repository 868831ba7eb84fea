//! Sweep orchestration, config files, output emitters, and validation.

pub mod cfgfile;
pub mod output;
pub mod sweep;
pub mod validate;

pub use cfgfile::{load_config, parse_config, preset, ConfigBuilder, RawConfig};
pub use output::{csv_string, emit_csv, emit_svg, parse_csv, svg_string};
pub use sweep::{run_sweep, CoverageCurve, CurvePoint, SeriesSpec, SweepSpec, SweepVariable};
pub use validate::{
    clopper_pearson_ci99, oracle_agreement_grid, require_oracle_agreement, ValidationCell,
    ValidationReport,
};
