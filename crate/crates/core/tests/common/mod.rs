#![allow(dead_code)]

use std::path::PathBuf;

use hydro_inertia::config::load_config;
use hydro_inertia::engine::{
    dominant_oscillation, least_squares_slope, ramp_responses, run_scenario, Scenario,
    SimulationResult,
};

pub fn config_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

pub fn scenario(name: &str) -> Scenario {
    load_config(&config_dir().join(format!("{name}.cfg")))
        .unwrap_or_else(|e| panic!("{name}.cfg: {e}"))
}

/// Centred moving average over `window_s`, shrinking at the edges.
pub fn moving_average(r: &SimulationResult, y: &[f64], window_s: f64) -> Vec<f64> {
    let half = ((window_s / r.dt_s) / 2.0).round() as usize;
    let mut prefix = Vec::with_capacity(y.len() + 1);
    prefix.push(0.0);
    for v in y {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..y.len())
        .map(|k| {
            let a = k.saturating_sub(half);
            let b = (k + half).min(y.len() - 1);
            (prefix[b + 1] - prefix[a]) / (b + 1 - a) as f64
        })
        .collect()
}

pub fn rms(v: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x * x, n + 1));
    (s / n as f64).sqrt()
}

/// Largest relative change of the headline metrics when dt is halved.
pub fn step_doubling_error(name: &str) -> f64 {
    let s = scenario(name);
    let fine = s.with_dt(s.dt_s / 2.0);
    let (a, b) = (run_scenario(&s).unwrap(), run_scenario(&fine).unwrap());
    let mut worst: f64 = 0.0;
    let mut cmp = |x: f64, y: f64, scale: f64| worst = worst.max((x - y).abs() / scale);
    let ra = ramp_responses(&a, &s).unwrap();
    let rb = ramp_responses(&b, &fine).unwrap();
    for (x, y) in ra.iter().zip(&rb) {
        cmp(x.mean_dp_mw, y.mean_dp_mw, x.mean_dp_mw.abs());
    }
    if ra.is_empty() {
        let ia = (a.index_at(1.0), a.index_at(1.5));
        let ib = (b.index_at(1.0), b.index_at(1.5));
        let sa = least_squares_slope(&a.t_s[ia.0..=ia.1], &a.f_grid_hz[ia.0..=ia.1]);
        let sb = least_squares_slope(&b.t_s[ib.0..=ib.1], &b.f_grid_hz[ib.0..=ib.1]);
        cmp(sa, sb, sa.abs());
        let peak = |r: &SimulationResult| {
            r.p_unit_mw
                .iter()
                .map(|p| p - r.p_unit_mw[0])
                .fold(0.0_f64, |m, d| if d.abs() > m.abs() { d } else { m })
        };
        let (pa, pb) = (peak(&a), peak(&b));
        if pa.abs() > 1.0 {
            cmp(pa, pb, pa.abs());
        }
    }
    let end = *a.t_s.last().unwrap();
    let osc = |r: &SimulationResult| {
        let k = r.index_at(end - 4.0);
        dominant_oscillation(&r.t_s[k..], &r.p_unit_mw[k..])
    };
    if let (Some(x), Some(y)) = (osc(&a), osc(&b)) {
        cmp(x.frequency_hz, y.frequency_hz, x.frequency_hz);
    }
    worst
}
