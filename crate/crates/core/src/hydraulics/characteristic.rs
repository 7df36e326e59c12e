//! Pump-turbine characteristic surfaces in unit quantities.
//!
//! n11 = n·D/√H [min⁻¹·m^½], q11 = Q/(D²·√H), t11 = T/(D³·H).
//! Both surfaces live on one rectangular (n11, y) grid and are queried by
//! bilinear interpolation.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Axis, Error, Result};

use super::{G, RHO};

#[derive(Debug, Clone, PartialEq)]
pub struct PumpTurbineCharacteristic {
    /// Reference runner diameter [m].
    pub diameter: f64,
    /// Strictly increasing unit-speed axis.
    pub n11_axis: Vec<f64>,
    /// Strictly increasing guide-vane opening axis [pu].
    pub y_axis: Vec<f64>,
    /// Unit discharge, row-major with one row per n11 node.
    pub q11: Vec<f64>,
    /// Unit torque, same layout as `q11`.
    pub t11: Vec<f64>,
}

/// Parameters of the analytic surfaces used when no manufacturer data is
/// available.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticParams {
    pub diameter: f64,
    /// Unit speed of best efficiency.
    pub n11_best: f64,
    /// Opening of best efficiency [pu].
    pub y_best: f64,
    /// Peak hydraulic efficiency.
    pub efficiency_best: f64,
    /// Unit discharge at full opening and n11_best.
    pub q11_full: f64,
    /// Relative drop of q11 per relative rise of n11.
    pub discharge_speed_slope: f64,
    /// Part-load efficiency curvature in y.
    pub opening_curvature: f64,
    /// No-flow loss torque at n11_best, in unit torque.
    pub windage_t11: f64,
    pub n11_range: (f64, f64),
    pub n11_step: f64,
    pub y_step: f64,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        SyntheticParams {
            diameter: 4.5,
            n11_best: 81.5,
            y_best: 0.7,
            efficiency_best: 0.92,
            q11_full: 0.28,
            discharge_speed_slope: 0.05,
            opening_curvature: 0.4,
            windage_t11: 1.5,
            n11_range: (40.0, 130.0),
            n11_step: 1.0,
            y_step: 0.025,
        }
    }
}

impl SyntheticParams {
    /// Unit discharge of the analytic model.
    pub fn q11_at(&self, n11: f64, y: f64) -> f64 {
        let x = n11 / self.n11_best;
        self.q11_full * y * (1.0 - self.discharge_speed_slope * (x - 1.0))
    }

    /// Unit torque of the analytic model.
    ///
    /// Euler-equation form: the runner torque is the flow times a swirl term
    /// that falls linearly with speed (inlet swirl minus blade speed), scaled
    /// so that hydraulic efficiency peaks at n11_best, minus a windage loss.
    pub fn t11_at(&self, n11: f64, y: f64) -> f64 {
        let x = n11 / self.n11_best;
        // η = t11·n11·(2π/60)/(ρ·g·q11) peaks at efficiency_best for x = 1.
        let k = self.efficiency_best * RHO * G * 60.0 / (2.0 * PI * self.n11_best);
        let part_load = 1.0 - self.opening_curvature * (y - self.y_best).powi(2);
        k * self.q11_at(n11, y) * (2.0 - x) * part_load - self.windage_t11 * x * x
    }
}

impl PumpTurbineCharacteristic {
    pub fn new(
        diameter: f64,
        n11_axis: Vec<f64>,
        y_axis: Vec<f64>,
        q11: Vec<f64>,
        t11: Vec<f64>,
    ) -> Result<Self> {
        let c = PumpTurbineCharacteristic {
            diameter,
            n11_axis,
            y_axis,
            q11,
            t11,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.diameter > 0.0) {
            return Err(Error::config("characteristic diameter must be > 0"));
        }
        for (name, axis) in [("n11", &self.n11_axis), ("y", &self.y_axis)] {
            if axis.len() < 2 {
                return Err(Error::config(format!(
                    "characteristic {name} axis needs at least 2 points"
                )));
            }
            if axis.windows(2).any(|w| !(w[1] > w[0])) || axis.iter().any(|v| !v.is_finite()) {
                return Err(Error::config(format!(
                    "characteristic {name} axis must be strictly increasing"
                )));
            }
        }
        let n = self.n11_axis.len() * self.y_axis.len();
        if self.q11.len() != n || self.t11.len() != n {
            return Err(Error::config(format!(
                "characteristic surfaces need {n} values, got q11 {} and t11 {}",
                self.q11.len(),
                self.t11.len()
            )));
        }
        if self.q11.iter().chain(&self.t11).any(|v| !v.is_finite()) {
            return Err(Error::config("characteristic contains non-finite values"));
        }
        Ok(())
    }

    /// Samples the analytic surfaces onto a grid.
    pub fn synthetic(p: &SyntheticParams) -> Self {
        let n_count = ((p.n11_range.1 - p.n11_range.0) / p.n11_step).round() as usize + 1;
        let y_count = (1.0 / p.y_step).round() as usize + 1;
        let n11_axis: Vec<f64> = (0..n_count)
            .map(|i| p.n11_range.0 + i as f64 * p.n11_step)
            .collect();
        let y_axis: Vec<f64> = (0..y_count)
            .map(|j| j as f64 / (y_count - 1) as f64)
            .collect();
        let mut q11 = Vec::with_capacity(n_count * y_count);
        let mut t11 = Vec::with_capacity(n_count * y_count);
        for &n11 in &n11_axis {
            for &y in &y_axis {
                q11.push(p.q11_at(n11, y));
                t11.push(p.t11_at(n11, y));
            }
        }
        PumpTurbineCharacteristic {
            diameter: p.diameter,
            n11_axis,
            y_axis,
            q11,
            t11,
        }
    }

    pub fn n11_bounds(&self) -> (f64, f64) {
        (self.n11_axis[0], *self.n11_axis.last().unwrap())
    }

    pub fn y_bounds(&self) -> (f64, f64) {
        (self.y_axis[0], *self.y_axis.last().unwrap())
    }

    fn node(&self, i: usize, j: usize) -> (f64, f64) {
        let k = i * self.y_axis.len() + j;
        (self.q11[k], self.t11[k])
    }

    /// Bilinear interpolation of (q11, t11).
    pub fn interpolate(&self, n11: f64, y: f64) -> Result<(f64, f64)> {
        let (i, a) = locate(&self.n11_axis, n11).ok_or_else(|| {
            let (min, max) = self.n11_bounds();
            Error::OutOfEnvelope {
                axis: Axis::UnitSpeed,
                value: n11,
                min,
                max,
            }
        })?;
        let (j, b) = locate(&self.y_axis, y).ok_or_else(|| {
            let (min, max) = self.y_bounds();
            Error::OutOfEnvelope {
                axis: Axis::Opening,
                value: y,
                min,
                max,
            }
        })?;
        let (q00, t00) = self.node(i, j);
        let (q01, t01) = self.node(i, j + 1);
        let (q10, t10) = self.node(i + 1, j);
        let (q11, t11) = self.node(i + 1, j + 1);
        let lerp2 = |v00: f64, v01: f64, v10: f64, v11: f64| {
            let low = v00 * (1.0 - b) + v01 * b;
            let high = v10 * (1.0 - b) + v11 * b;
            low * (1.0 - a) + high * a
        };
        Ok((lerp2(q00, q01, q10, q11), lerp2(t00, t01, t10, t11)))
    }

    pub fn unit_speed(&self, speed_rad_s: f64, net_head: f64) -> f64 {
        let n_rpm = speed_rad_s * 60.0 / (2.0 * PI);
        n_rpm * self.diameter / net_head.sqrt()
    }

    /// Net head [m] that passes `discharge` at the given speed and opening.
    ///
    /// Solves Q = q11(n11(H), y)·D²·√H by fixed-point iteration, which
    /// contracts because q11 depends only weakly on n11.
    pub fn head_for_discharge(
        &self,
        discharge: f64,
        speed_rad_s: f64,
        opening: f64,
        guess: f64,
    ) -> Result<f64> {
        if !(discharge > 0.0) {
            return Err(Error::domain(format!(
                "turbine discharge must be positive in the generating quadrant, got {discharge}"
            )));
        }
        let d2 = self.diameter * self.diameter;
        let mut head = if guess > 0.0 { guess } else { 100.0 };
        for _ in 0..200 {
            let n11 = self.unit_speed(speed_rad_s, head);
            let (q11, _) = self.interpolate(n11, opening)?;
            if !(q11 > 0.0) {
                return Err(Error::domain(format!(
                    "characteristic passes no flow at n11 = {n11}, y = {opening}"
                )));
            }
            let next = (discharge / (q11 * d2)).powi(2);
            if (next - head).abs() <= 1e-14 * next {
                return Ok(next);
            }
            head = next;
        }
        Err(Error::domain("turbine head iteration did not converge"))
    }

    /// Serialises to the plain-text grid format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(
            "# pump-turbine characteristic: unit discharge q11 and unit torque t11 over (n11, y)\n",
        );
        let _ = writeln!(out, "diameter_m {}", self.diameter);
        let _ = writeln!(out, "n11_points {}", self.n11_axis.len());
        let _ = writeln!(out, "y_points {}", self.y_axis.len());
        let row = |vals: &[f64]| {
            vals.iter()
                .map(|v| format!("{v}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        out.push_str("# n11 axis\n");
        out.push_str(&row(&self.n11_axis));
        out.push('\n');
        out.push_str("# y axis\n");
        out.push_str(&row(&self.y_axis));
        out.push('\n');
        let ny = self.y_axis.len();
        out.push_str("# q11, one row per n11\n");
        for chunk in self.q11.chunks(ny) {
            out.push_str(&row(chunk));
            out.push('\n');
        }
        out.push_str("# t11, one row per n11\n");
        for chunk in self.t11.chunks(ny) {
            out.push_str(&row(chunk));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut tokens = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
            .flat_map(|(line, l)| l.split_whitespace().map(move |t| (line, t)));

        let mut header = |key: &str| -> Result<(usize, String)> {
            match tokens.next() {
                Some((line, k)) if k == key => match tokens.next() {
                    Some((line, v)) => Ok((line, v.to_string())),
                    None => Err(Error::Syntax {
                        line,
                        column: 1,
                        message: format!("missing value for `{key}`"),
                    }),
                },
                Some((line, k)) => Err(Error::Syntax {
                    line,
                    column: 1,
                    message: format!("expected `{key}`, found `{k}`"),
                }),
                None => Err(Error::config(format!(
                    "characteristic file ends before `{key}`"
                ))),
            }
        };
        let parse_num = |(line, v): (usize, String)| -> Result<f64> {
            v.parse::<f64>().map_err(|_| Error::Syntax {
                line,
                column: 1,
                message: format!("`{v}` is not a number"),
            })
        };
        let diameter = parse_num(header("diameter_m")?)?;
        let n_count = parse_num(header("n11_points")?)? as usize;
        let y_count = parse_num(header("y_points")?)? as usize;

        let mut take = |count: usize, what: &str| -> Result<Vec<f64>> {
            let mut v = Vec::with_capacity(count);
            for _ in 0..count {
                let (line, tok) = tokens.next().ok_or_else(|| {
                    Error::config(format!("characteristic file ends inside {what}"))
                })?;
                v.push(tok.parse::<f64>().map_err(|_| Error::Syntax {
                    line,
                    column: 1,
                    message: format!("`{tok}` is not a number"),
                })?);
            }
            Ok(v)
        };
        let n11_axis = take(n_count, "n11 axis")?;
        let y_axis = take(y_count, "y axis")?;
        let q11 = take(n_count * y_count, "q11 surface")?;
        let t11 = take(n_count * y_count, "t11 surface")?;
        if let Some((line, tok)) = tokens.next() {
            return Err(Error::Syntax {
                line,
                column: 1,
                message: format!("unexpected trailing value `{tok}`"),
            });
        }
        Self::new(diameter, n11_axis, y_axis, q11, t11)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text)
    }
}

/// Cell index and fractional position of `x` on a sorted axis.
fn locate(axis: &[f64], x: f64) -> Option<(usize, f64)> {
    let first = axis[0];
    let last = *axis.last()?;
    if !(x >= first && x <= last) {
        return None;
    }
    let upper = axis.partition_point(|&v| v <= x);
    let i = upper.saturating_sub(1).min(axis.len() - 2);
    let frac = (x - axis[i]) / (axis[i + 1] - axis[i]);
    Some((i, frac))
}
