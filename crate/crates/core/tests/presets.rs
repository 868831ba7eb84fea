//! Preset layouts drive the emitters end to end.

use v2x_coverage::harness::{preset, run_sweep, svg_string};
use v2x_coverage::QuadratureSpec;

#[test]
fn fig5_layout_emits_four_polylines_per_serving_distance() {
    let (cfg, mut sweep) = preset("fig5").unwrap();
    // keep the check fast: two threshold points are enough for the count
    sweep.values.truncate(2);
    let curve = run_sweep(&cfg, &sweep, &QuadratureSpec::default()).unwrap();
    let svg = svg_string(&curve);

    // 2 models x 2 frequencies per r0 value, r0 in {0.5, 1.0}
    assert_eq!(svg.matches("<polyline").count(), 8);
    for r0 in ["r0=0.5", "r0=1"] {
        let per_r0 = curve
            .points
            .iter()
            .filter(|p| p.series_id.ends_with(r0))
            .map(|p| &p.series_id)
            .collect::<std::collections::BTreeSet<_>>()
            .len();
        assert_eq!(per_r0, 4, "{r0}");
    }

    // byte-stable rendering
    assert_eq!(svg, svg_string(&curve));
}
