//! Self-contained SVG rendering of iteration traces: an iterate panel and an
//! energy panel, one polyline per trace in each. Output is a pure function
//! of the input files, byte for byte.

use std::path::{Path, PathBuf};

use super::write_atomic;
use crate::error::{Error, Result};
use crate::solvers::{parse_trace_csv, ParsedRow};

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 420.0;
const PALETTE: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

struct Panel {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    title: &'static str,
}

const LEFT: Panel = Panel {
    x0: 60.0,
    y0: 30.0,
    w: 380.0,
    h: 340.0,
    title: "iterate vs iteration",
};
const RIGHT: Panel = Panel {
    x0: 540.0,
    y0: 30.0,
    w: 380.0,
    h: 340.0,
    title: "energy vs iteration",
};

/// Renders the given trace files into one SVG document at `out`.
pub fn plot_traces(paths: &[PathBuf], out: &Path) -> Result<()> {
    let svg = render_traces(paths)?;
    write_atomic(out, svg.as_bytes())
}

/// Same as [`plot_traces`] but returns the document.
pub fn render_traces(paths: &[PathBuf]) -> Result<String> {
    if paths.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one trace file is required".into(),
        ));
    }
    let mut series = Vec::new();
    for p in paths {
        let rows = parse_trace_csv(p)?;
        let name = p
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| p.display().to_string());
        series.push((name, rows));
    }
    Ok(render(&series))
}

fn iterate_value(row: &ParsedRow) -> f64 {
    row.iterate.iter().fold(0.0_f64, |a, v| a.max(v.abs()))
}

fn render(series: &[(String, Vec<ParsedRow>)]) -> String {
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // energies are drawn on a log axis when every finite value is positive
    let log_energy = series
        .iter()
        .flat_map(|(_, rows)| rows.iter())
        .filter(|r| r.energy.is_finite())
        .all(|r| r.energy > 0.0);

    let iterate_points: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|(_, rows)| {
            rows.iter()
                .map(|r| (r.iter as f64, iterate_value(r)))
                .filter(|(_, v)| v.is_finite())
                .collect()
        })
        .collect();
    let energy_points: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|(_, rows)| {
            rows.iter()
                .filter(|r| r.energy.is_finite() && (!log_energy || r.energy > 0.0))
                .map(|r| {
                    let e = if log_energy { r.energy.log10() } else { r.energy };
                    (r.iter as f64, e)
                })
                .collect()
        })
        .collect();

    draw_panel(&mut svg, &LEFT, &iterate_points, "iterate magnitude");
    draw_panel(
        &mut svg,
        &RIGHT,
        &energy_points,
        if log_energy { "log10 energy" } else { "energy" },
    );

    // legend, keyed by input order
    for (i, (name, _)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = 16.0 + 14.0 * i as f64;
        svg.push_str(&format!(
            "<text x=\"448\" y=\"{y:.2}\" font-family=\"monospace\" font-size=\"11\" fill=\"{color}\">{}</text>\n",
            escape(name)
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

fn draw_panel(svg: &mut String, panel: &Panel, series: &[Vec<(f64, f64)>], axis_label: &str) {
    let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for pts in series {
        for &(x, y) in pts {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }
    if !xmin.is_finite() {
        xmin = 0.0;
        xmax = 1.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    if xmax - xmin < 1e-300 {
        xmax = xmin + 1.0;
    }
    if ymax - ymin < 1e-300 {
        ymax = ymin + 1.0;
    }

    let map_x = |x: f64| panel.x0 + (x - xmin) / (xmax - xmin) * panel.w;
    let map_y = |y: f64| panel.y0 + panel.h - (y - ymin) / (ymax - ymin) * panel.h;

    // frame and labels
    svg.push_str(&format!(
        "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
        panel.x0, panel.y0, panel.w, panel.h
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\" fill=\"#333333\">{}</text>\n",
        panel.x0,
        panel.y0 - 8.0,
        panel.title
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"10\" fill=\"#555555\">{}</text>\n",
        panel.x0,
        panel.y0 + panel.h + 28.0,
        escape(&format!(
            "{axis_label}: [{:.3e}, {:.3e}]  iterations: [{xmin:.0}, {xmax:.0}]",
            ymin, ymax
        ))
    ));

    for (i, pts) in series.iter().enumerate() {
        if pts.is_empty() {
            continue;
        }
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", map_x(x), map_y(y)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            coords.join(" ")
        ));
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
