//! CSV and SVG emitters for coverage curves.
//!
//! Both formats are rendered through deterministic string building so a
//! fixed config and seed produce byte-identical files.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::sweep::{CoverageCurve, CurvePoint};

const CSV_HEADER: &str = "sweep_var,value,series_id,p_out_analytic,p_out_mc,ci99";

/// Renders the curve as CSV text (header plus one row per point).
pub fn csv_string(curve: &CoverageCurve) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in &curve.points {
        let mc = p.p_out_mc.map(|v| v.to_string()).unwrap_or_default();
        let ci = p.ci99.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            curve.sweep_var, p.value, p.series_id, p.p_out_analytic, mc, ci
        ));
    }
    out
}

pub fn emit_csv(curve: &CoverageCurve, path: &Path) -> Result<()> {
    fs::write(path, csv_string(curve)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses CSV text produced by [`csv_string`] back into curve points.
/// Round-trips exactly: float formatting is shortest-round-trip.
pub fn parse_csv(text: &str) -> Result<Vec<CurvePoint>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => {
            return Err(Error::Config(format!(
                "unexpected CSV header: {other:?}"
            )))
        }
    }
    let mut points = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::Config(format!(
                "CSV row {} has {} fields, expected 6",
                i + 2,
                fields.len()
            )));
        }
        let num = |f: &str| -> Result<f64> {
            f.parse()
                .map_err(|_| Error::Config(format!("CSV row {}: bad number '{f}'", i + 2)))
        };
        let opt = |f: &str| -> Result<Option<f64>> {
            if f.is_empty() { Ok(None) } else { num(f).map(Some) }
        };
        points.push(CurvePoint {
            value: num(fields[1])?,
            series_id: fields[2].to_string(),
            p_out_analytic: num(fields[3])?,
            p_out_mc: opt(fields[4])?,
            ci99: opt(fields[5])?,
        });
    }
    Ok(points)
}

const SVG_WIDTH: f64 = 900.0;
const SVG_HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 230.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 55.0;
const PALETTE: [&str; 12] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
    "#bcbd22", "#7f7f7f", "#aec7e8", "#ff9896",
];
/// Outage probabilities below this floor are clamped onto the axis edge.
const LOG_FLOOR: f64 = 1e-12;

/// Renders the curve as a standalone SVG: linear sweep axis, log-scale
/// outage axis, one polyline per series, legend keyed by series id.
pub fn svg_string(curve: &CoverageCurve) -> String {
    let series_ids: Vec<String> = {
        let mut ids = Vec::new();
        for p in &curve.points {
            if !ids.contains(&p.series_id) {
                ids.push(p.series_id.clone());
            }
        }
        ids
    };

    let xs: Vec<f64> = curve.points.iter().map(|p| p.value).collect();
    let (x_min, x_max) = bounds(&xs).unwrap_or((0.0, 1.0));
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };

    let mut y_lo: f64 = f64::INFINITY;
    for p in &curve.points {
        for v in [Some(p.p_out_analytic), p.p_out_mc].into_iter().flatten() {
            if v > LOG_FLOOR {
                y_lo = y_lo.min(v);
            }
        }
    }
    if !y_lo.is_finite() {
        y_lo = LOG_FLOOR;
    }
    let decade_lo = y_lo.log10().floor() as i32;
    let decade_hi = 0;
    let log_lo = decade_lo as f64;
    let log_span = (decade_hi - decade_lo).max(1) as f64;

    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_px = |x: f64| MARGIN_LEFT + (x - x_min) / x_span * plot_w;
    let y_px = |p_out: f64| {
        let clamped = p_out.max(LOG_FLOOR).log10().clamp(log_lo, 0.0);
        MARGIN_TOP + (0.0 - clamped) / log_span * plot_h
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" \
         viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // decade gridlines + y labels
    for d in decade_lo..=decade_hi {
        let y = y_px(10f64.powi(d));
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            MARGIN_LEFT,
            MARGIN_LEFT + plot_w,
            y = y
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\" \
             font-family=\"sans-serif\">1e{d}</text>\n",
            MARGIN_LEFT - 8.0,
            y + 4.0
        ));
    }

    // x ticks: each value if few, else about eight
    let tick_stride = (xs.len() / series_ids.len().max(1)).div_ceil(8).max(1);
    let mut seen = Vec::new();
    for p in &curve.points {
        if !seen.contains(&p.value.to_bits()) {
            seen.push(p.value.to_bits());
        }
    }
    for (i, bits) in seen.iter().enumerate() {
        if i % tick_stride != 0 && i + 1 != seen.len() {
            continue;
        }
        let v = f64::from_bits(*bits);
        let x = x_px(v);
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            MARGIN_TOP,
            MARGIN_TOP + plot_h
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\" \
             font-family=\"sans-serif\">{v}</text>\n",
            MARGIN_TOP + plot_h + 18.0
        ));
    }

    // axes
    svg.push_str(&format!(
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" \
         fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\" \
         font-family=\"sans-serif\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        SVG_HEIGHT - 12.0,
        curve.sweep_var
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\" \
         font-family=\"sans-serif\" transform=\"rotate(-90 16 {:.2})\">p_out</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    ));

    // one polyline per series, plus markers for Monte Carlo estimates
    for (si, id) in series_ids.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let pts: Vec<&CurvePoint> = curve.points.iter().filter(|p| &p.series_id == id).collect();
        let path: Vec<String> = pts
            .iter()
            .map(|p| format!("{:.2},{:.2}", x_px(p.value), y_px(p.p_out_analytic)))
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>\n",
            path.join(" ")
        ));
        for p in &pts {
            if let Some(mc) = p.p_out_mc {
                svg.push_str(&format!(
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"none\" \
                     stroke=\"{color}\" stroke-width=\"1.2\"/>\n",
                    x_px(p.value),
                    y_px(mc)
                ));
            }
        }
        let ly = MARGIN_TOP + 14.0 + 18.0 * si as f64;
        svg.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"14\" height=\"4\" fill=\"{color}\"/>\n",
            MARGIN_LEFT + plot_w + 14.0,
            ly - 4.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" font-family=\"sans-serif\">{id}</text>\n",
            MARGIN_LEFT + plot_w + 34.0,
            ly
        ));
    }

    svg.push_str(&format!(
        "<text x=\"{MARGIN_LEFT}\" y=\"18\" font-size=\"12\" fill=\"#666666\" \
         font-family=\"sans-serif\">seed {} | v{}</text>\n",
        curve.seed, curve.tool_version
    ));
    svg.push_str("</svg>\n");
    svg
}

pub fn emit_svg(curve: &CoverageCurve, path: &Path) -> Result<()> {
    fs::write(path, svg_string(curve)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn bounds(values: &[f64]) -> Option<(f64, f64)> {
    let mut it = values.iter().copied();
    let first = it.next()?;
    Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScenarioConfig;

    fn sample_curve(points: Vec<CurvePoint>) -> CoverageCurve {
        CoverageCurve {
            sweep_var: "r0",
            points,
            base_config: ScenarioConfig::default(),
            seed: 42,
            tool_version: crate::VERSION,
        }
    }

    fn point(value: f64, series: &str, p_out: f64) -> CurvePoint {
        CurvePoint {
            value,
            series_id: series.to_string(),
            p_out_analytic: p_out,
            p_out_mc: Some(p_out * 1.01),
            ci99: Some(1e-3),
        }
    }

    #[test]
    fn empty_curve_is_header_only() {
        let csv = csv_string(&sample_curve(vec![]));
        assert_eq!(csv, format!("{CSV_HEADER}\n"));
        assert!(parse_csv(&csv).unwrap().is_empty());
    }

    #[test]
    fn csv_round_trips_exactly() {
        let curve = sample_curve(vec![
            point(0.1, "pcp-mmwave-both", 0.12345678901234567),
            point(0.2, "pcp-mmwave-both", 0.3),
            CurvePoint {
                value: 0.30000000000000004,
                series_id: "ppp-sub6-both".into(),
                p_out_analytic: 1e-9,
                p_out_mc: None,
                ci99: None,
            },
        ]);
        let parsed = parse_csv(&csv_string(&curve)).unwrap();
        assert_eq!(parsed, curve.points);
    }

    #[test]
    fn csv_is_byte_stable() {
        let curve = sample_curve(vec![point(0.5, "a", 0.25), point(1.0, "a", 0.5)]);
        assert_eq!(csv_string(&curve), csv_string(&curve.clone()));
    }

    #[test]
    fn svg_has_one_polyline_per_series() {
        let mut pts = Vec::new();
        for series in ["a", "b", "c", "d"] {
            for v in [0.1, 0.2, 0.3] {
                pts.push(point(v, series, 0.1 * v));
            }
        }
        let svg = svg_string(&sample_curve(pts));
        assert_eq!(svg.matches("<polyline").count(), 4);
        assert!(svg.contains("p_out"));
        // legend carries every series id
        for series in ["a", "b", "c", "d"] {
            assert!(svg.contains(&format!(">{series}</text>")));
        }
    }

    #[test]
    fn svg_survives_zero_outage() {
        let svg = svg_string(&sample_curve(vec![CurvePoint {
            value: 1.0,
            series_id: "a".into(),
            p_out_analytic: 0.0,
            p_out_mc: None,
            ci99: None,
        }]));
        assert!(svg.contains("<polyline"));
        assert!(!svg.contains("NaN"));
        assert!(!svg.contains("inf"));
    }

    #[test]
    fn bad_csv_is_rejected() {
        assert!(parse_csv("nope\n").is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\n1,2,3\n")).is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\nr0,x,a,0.1,,\n")).is_err());
    }
}
