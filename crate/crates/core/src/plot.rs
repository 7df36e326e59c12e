//! Minimal SVG time-series plots: one stacked panel per channel.

use std::fmt::Write as _;
use std::path::Path;

use crate::engine::SimulationResult;
use crate::error::{Error, Result};

const WIDTH: f64 = 800.0;
const PANEL_HEIGHT: f64 = 180.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const PANEL_GAP: f64 = 40.0;
/// Upper bound on points drawn per trace.
const MAX_POINTS: usize = 2000;
const COLOURS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];

/// Writes one panel per channel of `result` to an SVG file.
pub fn emit_plot(result: &SimulationResult, channels: &[&str], path: &Path) -> Result<()> {
    let svg = render_overlay(&[result], channels)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}

/// Writes the channels of several runs on shared panels, one colour per run.
pub fn emit_overlay(results: &[&SimulationResult], channels: &[&str], path: &Path) -> Result<()> {
    let svg = render_overlay(results, channels)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}

pub fn render_overlay(results: &[&SimulationResult], channels: &[&str]) -> Result<String> {
    if channels.is_empty() || results.is_empty() {
        return Err(Error::EmptyChannels);
    }
    let mut series = Vec::with_capacity(channels.len());
    for &c in channels {
        let mut traces = Vec::with_capacity(results.len());
        for r in results {
            let y = r
                .channel(c)
                .ok_or_else(|| Error::UnknownChannel(c.to_string()))?;
            traces.push((&r.t_s[..], y));
        }
        series.push((c, traces));
    }

    let height = MARGIN_TOP + channels.len() as f64 * (PANEL_HEIGHT + PANEL_GAP);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{height}" fill="white"/>"#
    );
    if results.len() > 1 {
        for (i, r) in results.iter().enumerate() {
            let x = MARGIN_LEFT + 150.0 * i as f64;
            let _ = writeln!(
                out,
                r#"<text x="{x}" y="16" fill="{}">{}</text>"#,
                COLOURS[i % COLOURS.len()],
                escape(&r.name)
            );
        }
    }

    for (p, (name, traces)) in series.iter().enumerate() {
        let top = MARGIN_TOP + p as f64 * (PANEL_HEIGHT + PANEL_GAP);
        let (t0, t1) = bounds(traces.iter().flat_map(|(t, _)| t.iter()));
        let (y0, y1) = bounds(traces.iter().flat_map(|(_, y)| y.iter()));
        let (y0, y1) = if y1 - y0 < 1e-12 * y0.abs().max(1.0) {
            (y0 - 0.5, y1 + 0.5)
        } else {
            let pad = 0.05 * (y1 - y0);
            (y0 - pad, y1 + pad)
        };
        let t1 = if t1 > t0 { t1 } else { t0 + 1.0 };
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let sx = |t: f64| MARGIN_LEFT + (t - t0) / (t1 - t0) * plot_w;
        let sy = |y: f64| top + (1.0 - (y - y0) / (y1 - y0)) * PANEL_HEIGHT;

        let _ = writeln!(
            out,
            r#"<rect x="{MARGIN_LEFT}" y="{top}" width="{plot_w}" height="{PANEL_HEIGHT}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{MARGIN_LEFT}" y="{:.1}">{}</text>"#,
            top - 6.0,
            escape(name)
        );
        for (v, y) in [(y1, top + 10.0), (y0, top + PANEL_HEIGHT)] {
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{y:.1}" text-anchor="end">{}</text>"#,
                MARGIN_LEFT - 4.0,
                tick(v)
            );
        }
        for (v, anchor) in [(t0, "start"), (t1, "end")] {
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="{anchor}">{} s</text>"#,
                sx(v),
                top + PANEL_HEIGHT + 14.0,
                tick(v)
            );
        }
        for (i, (t, y)) in traces.iter().enumerate() {
            let step = (t.len() / MAX_POINTS).max(1);
            let mut points = String::new();
            let mut k = 0;
            while k < t.len() {
                let _ = write!(points, "{:.2},{:.2} ", sx(t[k]), sy(y[k]));
                if k + 1 == t.len() {
                    break;
                }
                k = (k + step).min(t.len() - 1);
            }
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.2" points="{}"/>"#,
                COLOURS[i % COLOURS.len()],
                points.trim_end()
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn bounds<'a>(values: impl Iterator<Item = &'a f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if lo.is_finite() {
        (lo, hi)
    } else {
        (0.0, 1.0)
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
