use std::f64::consts::PI;

use super::{Scenario, SimulationResult};
use crate::error::{Error, Result};

/// Shortest window giving 0.25 Hz spectral resolution around 1 Hz.
pub const MIN_SPECTRAL_WINDOW_S: f64 = 4.0;

/// Time window [s], start inclusive, end inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub start_s: f64,
    pub end_s: f64,
}

impl Window {
    pub fn new(start_s: f64, end_s: f64) -> Self {
        Window { start_s, end_s }
    }

    pub fn length(&self) -> f64 {
        self.end_s - self.start_s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillation {
    pub frequency_hz: f64,
    /// Half peak-to-peak of the detrended signal over the whole window.
    pub amplitude: f64,
    pub first_half_amplitude: f64,
    pub second_half_amplitude: f64,
}

impl Oscillation {
    pub fn is_decaying(&self) -> bool {
        self.second_half_amplitude < 0.5 * self.first_half_amplitude
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    /// Mean of P_unit over the power window minus its mean over the
    /// baseline window [MW].
    pub mean_dp_mw: f64,
    /// Least-squares slope of f_grid over the RoCoF window [Hz/s].
    pub rocof_hz_per_s: f64,
    /// Dominant oscillation of P_unit; `None` when the window is too short.
    pub oscillation: Option<Oscillation>,
    pub max_speed_rpm: f64,
    pub min_speed_rpm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricWindows {
    pub baseline: Window,
    pub power: Window,
    pub rocof: Window,
    pub oscillation: Window,
}

fn slice<'a>(
    result: &'a SimulationResult,
    channel: &'a [f64],
    w: &Window,
) -> Result<(&'a [f64], &'a [f64])> {
    let (t0, t1) = (result.t_s[0], *result.t_s.last().unwrap());
    let tol = 1e-9 * result.dt_s;
    if !(w.start_s >= t0 - tol && w.end_s <= t1 + tol && w.start_s < w.end_s) {
        return Err(Error::domain(format!(
            "window [{}, {}] s is not inside the run [{t0}, {t1}] s",
            w.start_s, w.end_s
        )));
    }
    let a = result.index_at(w.start_s);
    let b = result.index_at(w.end_s);
    let b = if result.t_s[b] > w.end_s + tol {
        b - 1
    } else {
        b
    };
    Ok((&result.t_s[a..=b], &channel[a..=b]))
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Trapezoidal integral of uniformly sampled data.
pub fn trapezoid(t: &[f64], y: &[f64]) -> f64 {
    t.windows(2)
        .zip(y.windows(2))
        .map(|(t, y)| 0.5 * (t[1] - t[0]) * (y[0] + y[1]))
        .sum()
}

/// Slope and intercept of the least-squares line through (t, y).
pub fn least_squares_fit(t: &[f64], y: &[f64]) -> (f64, f64) {
    let tm = mean(t);
    let ym = mean(y);
    let (mut num, mut den) = (0.0, 0.0);
    for (a, b) in t.iter().zip(y) {
        num += (a - tm) * (b - ym);
        den += (a - tm) * (a - tm);
    }
    let slope = if den > 0.0 { num / den } else { 0.0 };
    (slope, ym - slope * tm)
}

pub fn least_squares_slope(t: &[f64], y: &[f64]) -> f64 {
    least_squares_fit(t, y).0
}

fn half_peak_to_peak(v: &[f64]) -> f64 {
    let (lo, hi) = v
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    0.5 * (hi - lo)
}

/// Magnitude of the discrete-time Fourier sum of `y` at frequency `f`.
fn dft_magnitude(t: &[f64], y: &[f64], f: f64) -> f64 {
    let w = 2.0 * PI * f;
    let (mut re, mut im) = (0.0, 0.0);
    for (a, b) in t.iter().zip(y) {
        re += b * (w * a).cos();
        im -= b * (w * a).sin();
    }
    re.hypot(im)
}

/// Dominant oscillation of a signal between 0.2 and 5 Hz after removing its
/// linear trend. Returns `None` below [`MIN_SPECTRAL_WINDOW_S`].
pub fn dominant_oscillation(t: &[f64], y: &[f64]) -> Option<Oscillation> {
    if t.len() < 8 || t[t.len() - 1] - t[0] < MIN_SPECTRAL_WINDOW_S - 1e-9 {
        return None;
    }
    let (slope, icept) = least_squares_fit(t, y);
    let detrended: Vec<f64> = t
        .iter()
        .zip(y)
        .map(|(a, b)| b - (slope * a + icept))
        .collect();
    let scan = |lo: f64, hi: f64, step: f64, best: (f64, f64)| {
        let n = ((hi - lo) / step).round() as usize;
        (0..=n).fold(best, |best, i| {
            let f = lo + i as f64 * step;
            let m = dft_magnitude(t, &detrended, f);
            if m > best.1 {
                (f, m)
            } else {
                best
            }
        })
    };
    let (coarse, _) = scan(0.2, 5.0, 0.05, (0.2, -1.0));
    let (frequency_hz, _) = scan(
        (coarse - 0.05).max(0.2),
        (coarse + 0.05).min(5.0),
        0.001,
        (coarse, -1.0),
    );
    let half = detrended.len() / 2;
    Some(Oscillation {
        frequency_hz,
        amplitude: half_peak_to_peak(&detrended),
        first_half_amplitude: half_peak_to_peak(&detrended[..half]),
        second_half_amplitude: half_peak_to_peak(&detrended[half..]),
    })
}

pub fn extract_metrics(result: &SimulationResult, windows: &MetricWindows) -> Result<Metrics> {
    if result.is_empty() {
        return Err(Error::domain("empty result"));
    }
    let (_, base) = slice(result, &result.p_unit_mw, &windows.baseline)?;
    let (_, power) = slice(result, &result.p_unit_mw, &windows.power)?;
    let (tf, f) = slice(result, &result.f_grid_hz, &windows.rocof)?;
    let (to, po) = slice(result, &result.p_unit_mw, &windows.oscillation)?;
    let (max_speed_rpm, min_speed_rpm) = result
        .n_rpm
        .iter()
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), &n| {
            (hi.max(n), lo.min(n))
        });
    Ok(Metrics {
        mean_dp_mw: mean(power) - mean(base),
        rocof_hz_per_s: least_squares_slope(tf, f),
        oscillation: dominant_oscillation(to, po),
        max_speed_rpm,
        min_speed_rpm,
    })
}

/// Power response to one imposed frequency ramp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RampResponse {
    pub start_s: f64,
    pub rocof_hz_per_s: f64,
    pub duration_s: f64,
    /// Pre-ramp level of P_unit [MW].
    pub baseline_mw: f64,
    /// Energy-equivalent mean deviation [MW]: the area of P_unit above the
    /// pre-ramp level from ramp start to the next ramp (or the end of the
    /// hold), divided by the ramp duration. This counts the energy the
    /// rotor or controller delivers late because of filter lag or the
    /// electromechanical swing.
    pub mean_dp_mw: f64,
}

/// Default settling span after a final ramp when no later ramp bounds it [s].
pub const DEFAULT_HOLD_S: f64 = 2.0;
/// Span before a ramp used for its baseline: one period of the ~1 Hz mode.
const BASELINE_SPAN_S: f64 = 1.0;

pub fn ramp_responses(result: &SimulationResult, scenario: &Scenario) -> Result<Vec<RampResponse>> {
    let ramps = scenario.frequency_ramps();
    let end = *result
        .t_s
        .last()
        .ok_or_else(|| Error::domain("empty result"))?;
    let mut out = Vec::with_capacity(ramps.len());
    for (i, r) in ramps.iter().enumerate() {
        let base_start = (r.start_s - BASELINE_SPAN_S).max(0.0);
        let baseline_mw = if r.start_s > 0.0 {
            mean(
                slice(
                    result,
                    &result.p_unit_mw,
                    &Window::new(base_start, r.start_s),
                )?
                .1,
            )
        } else {
            result.p_unit_mw[0]
        };
        let stop = ramps
            .get(i + 1)
            .map(|n| n.start_s)
            .unwrap_or(r.start_s + r.duration_s + DEFAULT_HOLD_S)
            .min(end);
        let (t, p) = slice(result, &result.p_unit_mw, &Window::new(r.start_s, stop))?;
        let dev: Vec<f64> = p.iter().map(|v| v - baseline_mw).collect();
        out.push(RampResponse {
            start_s: r.start_s,
            rocof_hz_per_s: r.rocof_hz_per_s,
            duration_s: r.duration_s,
            baseline_mw,
            mean_dp_mw: trapezoid(t, &dev) / r.duration_s,
        });
    }
    Ok(out)
}
