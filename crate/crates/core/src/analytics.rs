//! Closed-form inertia relations for rotating machines.
//!
//! These are the small analytic expressions that relate a rotor's stored
//! kinetic energy to the power it exchanges with the grid during a frequency
//! excursion. The time-domain engine is checked against them.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Initial angular speed used by the reference inertia table [rad/s].
pub const TABLE1_OMEGA_START: f64 = 314.5;
/// Excursion duration used by the reference inertia table [s].
pub const TABLE1_DURATION_S: f64 = 1.0;

/// Base quantities of one machine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitRating {
    /// Rated power [W].
    pub rated_power: f64,
    /// Rated mechanical speed [rad/s].
    pub rated_speed: f64,
    /// Moment of inertia of the whole shaft line [kg·m²].
    pub inertia: f64,
    /// Grid frequency [Hz].
    pub rated_frequency: f64,
}

impl UnitRating {
    pub fn new(
        rated_power: f64,
        rated_speed: f64,
        inertia: f64,
        rated_frequency: f64,
    ) -> Result<Self> {
        let rating = UnitRating {
            rated_power,
            rated_speed,
            inertia,
            rated_frequency,
        };
        rating.validate()?;
        Ok(rating)
    }

    /// Builds a rating from a mechanical time constant, back-solving the inertia.
    pub fn from_time_constant(
        rated_power: f64,
        rated_speed: f64,
        tau_m: f64,
        rated_frequency: f64,
    ) -> Result<Self> {
        if !(tau_m > 0.0 && tau_m.is_finite()) {
            return Err(Error::domain(format!(
                "mechanical time constant must be positive, got {tau_m}"
            )));
        }
        if !(rated_speed > 0.0 && rated_speed.is_finite()) {
            return Err(Error::domain(format!(
                "rated speed must be positive, got {rated_speed}"
            )));
        }
        let inertia = tau_m * rated_power / (rated_speed * rated_speed);
        Self::new(rated_power, rated_speed, inertia, rated_frequency)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("rated_power", self.rated_power),
            ("rated_speed", self.rated_speed),
            ("inertia", self.inertia),
            ("rated_frequency", self.rated_frequency),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::domain(format!(
                    "{name} must be strictly positive and finite, got {value}"
                )));
            }
        }
        let tau = self.inertia * self.rated_speed * self.rated_speed / self.rated_power;
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::domain("mechanical time constant is not finite"));
        }
        Ok(())
    }

    pub fn tau_m(&self) -> f64 {
        self.inertia * self.rated_speed * self.rated_speed / self.rated_power
    }

    /// Base torque P_rated / ω_rated [N·m].
    pub fn base_torque(&self) -> f64 {
        self.rated_power / self.rated_speed
    }

    pub fn rated_speed_rpm(&self) -> f64 {
        self.rated_speed * 60.0 / (2.0 * PI)
    }

    pub fn power_to_pu(&self, watts: f64) -> f64 {
        watts / self.rated_power
    }

    pub fn power_from_pu(&self, pu: f64) -> f64 {
        pu * self.rated_power
    }

    /// Kinetic energy stored at a per-unit speed [J].
    pub fn kinetic_energy(&self, speed_pu: f64) -> f64 {
        let omega = speed_pu * self.rated_speed;
        0.5 * self.inertia * omega * omega
    }
}

/// A monotone change of angular speed from `omega_start` to `omega_end`
/// over `duration`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyExcursion {
    pub omega_start: f64,
    pub omega_end: f64,
    pub duration: f64,
}

impl FrequencyExcursion {
    pub fn new(omega_start: f64, omega_end: f64, duration: f64) -> Result<Self> {
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::domain(format!(
                "excursion duration must be positive, got {duration}"
            )));
        }
        if !(omega_start > 0.0 && omega_start.is_finite()) {
            return Err(Error::domain(format!(
                "excursion start speed must be positive, got {omega_start}"
            )));
        }
        if !omega_end.is_finite() {
            return Err(Error::domain("excursion end speed is not finite"));
        }
        Ok(FrequencyExcursion {
            omega_start,
            omega_end,
            duration,
        })
    }

    /// Excursion produced by a constant RoCoF [Hz/s] held for `duration` seconds,
    /// with angular speed expressed in electrical rad/s.
    pub fn from_rocof(omega_start: f64, rocof_hz_per_s: f64, duration: f64) -> Result<Self> {
        Self::new(
            omega_start,
            omega_start + 2.0 * PI * rocof_hz_per_s * duration,
            duration,
        )
    }

    pub fn reversed(&self) -> Self {
        FrequencyExcursion {
            omega_start: self.omega_end,
            omega_end: self.omega_start,
            duration: self.duration,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FleetEntry {
    pub tau_m: f64,
    pub rated_power: f64,
}

impl FleetEntry {
    pub fn new(tau_m: f64, rated_power: f64) -> Result<Self> {
        if !(tau_m > 0.0 && rated_power > 0.0) {
            return Err(Error::domain(format!(
                "fleet entry requires positive tau_m and rated power, got ({tau_m}, {rated_power})"
            )));
        }
        Ok(FleetEntry { tau_m, rated_power })
    }
}

/// τ_m = J·ω_rated² / P_rated.
pub fn mechanical_time_constant(rating: &UnitRating) -> Result<f64> {
    rating.validate()?;
    Ok(rating.tau_m())
}

/// Rated-power weighted mean of the fleet's mechanical time constants.
pub fn system_time_constant(fleet: &[FleetEntry]) -> Result<f64> {
    if fleet.is_empty() {
        return Err(Error::domain("system time constant of an empty fleet"));
    }
    let mut weighted = 0.0;
    let mut total = 0.0;
    for entry in fleet {
        if !(entry.tau_m > 0.0 && entry.rated_power > 0.0) {
            return Err(Error::domain(format!("invalid fleet entry {entry:?}")));
        }
        weighted += entry.tau_m * entry.rated_power;
        total += entry.rated_power;
    }
    Ok(weighted / total)
}

/// Initial RoCoF [Hz/s] following a per-unit power imbalance on a system
/// with mechanical time constant `tau_m_sys`.
pub fn rocof_from_imbalance(delta_p_pu: f64, tau_m_sys: f64, rated_frequency: f64) -> Result<f64> {
    if !(tau_m_sys > 0.0) {
        return Err(Error::domain(format!(
            "system time constant must be positive, got {tau_m_sys}"
        )));
    }
    Ok(delta_p_pu / tau_m_sys * rated_frequency)
}

/// Instantaneous inertial power [pu] for a per-unit frequency derivative
/// [1/s], small-deviation form. Positive means injection.
pub fn inertial_power_instant(tau_m: f64, rocof_pu: f64) -> f64 {
    -tau_m * rocof_pu
}

/// Kinetic energy released by the rotor [J]; negative when absorbed.
pub fn kinetic_energy_delta(inertia: f64, excursion: &FrequencyExcursion) -> f64 {
    0.5 * inertia
        * (excursion.omega_start * excursion.omega_start
            - excursion.omega_end * excursion.omega_end)
}

/// Mean power [pu of rated] exchanged over the excursion.
pub fn mean_power_contribution(tau_m: f64, excursion: &FrequencyExcursion) -> f64 {
    let (ws, we) = (excursion.omega_start, excursion.omega_end);
    // Factored so small excursions do not cancel.
    0.5 * tau_m / excursion.duration * ((ws - we) * (ws + we) / (ws * ws))
}

/// One input row of the inertia report: a set of units seeing the same RoCoF.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub label: String,
    pub units: Vec<FleetEntry>,
    pub rocof_hz_per_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportLine {
    pub label: String,
    pub sum_pn_w: f64,
    pub rocof_hz_per_s: f64,
    pub tau_m_s: f64,
    /// |ΔP| / ΣP_n as a fraction.
    pub dp_over_pn: f64,
    /// |ΔP| [W].
    pub dp_w: f64,
}

impl ReportLine {
    pub fn dp_over_pn_pct_rounded(&self) -> i64 {
        (self.dp_over_pn * 100.0).round() as i64
    }

    pub fn dp_mw_rounded(&self) -> i64 {
        (self.dp_w / 1e6).round() as i64
    }
}

/// The five rows of the reference inertia table for the 395 MW unit.
pub fn reference_rows() -> Vec<ReportRow> {
    let unit = |tau| FleetEntry {
        tau_m: tau,
        rated_power: 395e6,
    };
    let row = |label: &str, units: Vec<FleetEntry>, rocof| ReportRow {
        label: label.to_string(),
        units,
        rocof_hz_per_s: rocof,
    };
    vec![
        row("Frades2 U1", vec![unit(7.9)], 0.5),
        row("Frades2 U1 (ref.)", vec![unit(7.9)], 1.0),
        row("Frades2 U1", vec![unit(7.9)], 2.0),
        row("Frades2 U1", vec![unit(3.95)], 2.0),
        row("Frades2 HSC U1+U2", vec![unit(7.9), unit(7.9)], 2.0),
    ]
}

/// Evaluates each row with a positive RoCoF starting from
/// [`TABLE1_OMEGA_START`] over [`TABLE1_DURATION_S`]. Units of a row add.
pub fn table1_report(rows: &[ReportRow]) -> Result<Vec<ReportLine>> {
    rows.iter()
        .map(|row| {
            if row.units.is_empty() {
                return Err(Error::domain(format!("row `{}` has no units", row.label)));
            }
            let excursion = FrequencyExcursion::from_rocof(
                TABLE1_OMEGA_START,
                row.rocof_hz_per_s,
                TABLE1_DURATION_S,
            )?;
            let mut dp_w = 0.0;
            for unit in &row.units {
                FleetEntry::new(unit.tau_m, unit.rated_power)?;
                dp_w += mean_power_contribution(unit.tau_m, &excursion) * unit.rated_power;
            }
            let sum_pn_w: f64 = row.units.iter().map(|u| u.rated_power).sum();
            let dp_w = dp_w.abs();
            Ok(ReportLine {
                label: row.label.clone(),
                sum_pn_w,
                rocof_hz_per_s: row.rocof_hz_per_s,
                tau_m_s: system_time_constant(&row.units)?,
                dp_over_pn: dp_w / sum_pn_w,
                dp_w,
            })
        })
        .collect()
}

pub const REPORT_CSV_HEADER: &str = "label,sum_pn_mw,rocof_hz_per_s,tau_m_s,dp_over_pn_pct,dp_mw";

/// CSV rendering; percentages and MW rounded to integers as printed in the
/// reference table.
pub fn report_csv(lines: &[ReportLine]) -> String {
    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    for line in lines {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            line.label,
            trim_float(line.sum_pn_w / 1e6),
            trim_float(line.rocof_hz_per_s),
            trim_float(line.tau_m_s),
            line.dp_over_pn_pct_rounded(),
            line.dp_mw_rounded()
        );
    }
    out
}

pub fn report_text(lines: &[ReportLine]) -> String {
    let headers = ["PSPP", "Sum Pn", "RoCoF", "tau_m", "dP/Pn", "dP"];
    let rows: Vec<[String; 6]> = lines
        .iter()
        .map(|l| {
            [
                l.label.clone(),
                format!("{} MW", trim_float(l.sum_pn_w / 1e6)),
                format!("{} Hz/s", trim_float(l.rocof_hz_per_s)),
                format!("{} s", trim_float(l.tau_m_s)),
                format!("{} %", l.dp_over_pn_pct_rounded()),
                format!("{} MW", l.dp_mw_rounded()),
            ]
        })
        .collect();
    let mut widths = headers.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut push_row = |cells: &[&str]| {
        let line: Vec<String> = cells
            .iter()
            .zip(widths)
            .enumerate()
            .map(|(i, (c, w))| {
                if i == 0 {
                    format!("{c:<w$}")
                } else {
                    format!("{c:>w$}")
                }
            })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    };
    push_row(&headers);
    for row in &rows {
        let cells: Vec<&str> = row.iter().map(String::as_str).collect();
        push_row(&cells);
    }
    out
}

fn trim_float(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const RATED_SPEED: f64 = 2.0 * PI * 375.0 / 60.0;

    #[test]
    fn time_constant_of_back_solved_frades_unit() {
        let j = 7.9 * 395e6 / (RATED_SPEED * RATED_SPEED);
        assert_relative_eq!(j, 2.0225e6, max_relative = 1e-3);
        let rating = UnitRating::new(395e6, RATED_SPEED, j, 50.0).unwrap();
        assert_relative_eq!(
            mechanical_time_constant(&rating).unwrap(),
            7.9,
            max_relative = 1e-12
        );
    }

    #[test]
    fn time_constant_identity_and_degenerate() {
        let unit = UnitRating::new(1.0, 1.0, 1.0, 50.0).unwrap();
        assert_eq!(mechanical_time_constant(&unit).unwrap(), 1.0);
        assert!(UnitRating::new(395e6, RATED_SPEED, 0.0, 50.0).is_err());
        let bad = UnitRating {
            inertia: 0.0,
            ..unit
        };
        assert!(matches!(
            mechanical_time_constant(&bad),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn system_time_constant_examples() {
        let e = |t, p| FleetEntry::new(t, p).unwrap();
        assert_relative_eq!(
            system_time_constant(&[e(7.9, 395e6), e(7.9, 395e6)]).unwrap(),
            7.9,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            system_time_constant(&[e(7.9, 4.4e9), e(7.9, 395e6)]).unwrap(),
            7.9,
            max_relative = 1e-15
        );
        // (10·100 + 5·300) / 400
        let oracle = (10.0 * 100e6 + 5.0 * 300e6) / (100e6 + 300e6);
        assert_eq!(oracle, 6.25);
        assert_relative_eq!(
            system_time_constant(&[e(10.0, 100e6), e(5.0, 300e6)]).unwrap(),
            oracle,
            max_relative = 1e-15
        );
        assert!(system_time_constant(&[]).is_err());
    }

    #[test]
    fn rocof_examples() {
        assert_eq!(rocof_from_imbalance(0.0, 7.9, 50.0).unwrap(), 0.0);
        assert_relative_eq!(
            rocof_from_imbalance(0.158, 7.9, 50.0).unwrap(),
            1.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            rocof_from_imbalance(0.20, 7.9, 50.0).unwrap(),
            0.20 / 7.9 * 50.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            rocof_from_imbalance(0.20, 7.9, 50.0).unwrap(),
            1.266,
            epsilon = 1e-3
        );
        assert!(rocof_from_imbalance(0.1, 0.0, 50.0).is_err());
    }

    #[test]
    fn inertial_power_examples() {
        let p = inertial_power_instant(7.9, 1.0 / 50.0);
        assert_relative_eq!(p, -0.158, max_relative = 1e-12);
        // Within 1.3 % of the tabulated 63 MW.
        assert!(((p.abs() * 395.0) - 63.0).abs() / 63.0 < 0.013);
        assert_eq!(inertial_power_instant(7.9, 0.0), 0.0);
        assert_relative_eq!(
            inertial_power_instant(4.0, -0.5 / 50.0),
            0.04,
            max_relative = 1e-12
        );
    }

    #[test]
    fn kinetic_energy_examples() {
        let same = FrequencyExcursion::new(314.5, 314.5, 1.0).unwrap();
        assert_eq!(kinetic_energy_delta(2.0225e6, &same), 0.0);
        let rising = FrequencyExcursion::new(314.5, 314.5 + 2.0 * PI, 1.0).unwrap();
        let oracle = 0.5 * 2.0225e6 * (314.5f64.powi(2) - (314.5 + 2.0 * PI).powi(2));
        assert_relative_eq!(
            kinetic_energy_delta(2.0225e6, &rising),
            oracle,
            max_relative = 1e-12
        );
        assert!(kinetic_energy_delta(2.0225e6, &rising) < 0.0);
    }

    #[test]
    fn mean_power_examples() {
        let one = FrequencyExcursion::from_rocof(314.5, 1.0, 1.0).unwrap();
        let p = mean_power_contribution(7.9, &one).abs();
        assert_eq!((p * 100.0).round(), 16.0);
        assert_eq!((p * 395.0).round(), 63.0);
        let half = FrequencyExcursion::from_rocof(314.5, 0.5, 1.0).unwrap();
        let p = mean_power_contribution(7.9, &half).abs();
        assert_eq!((p * 100.0).round(), 8.0);
        assert_eq!((p * 395.0).round(), 31.0);
        let flat = FrequencyExcursion::new(314.5, 314.5, 1.0).unwrap();
        assert_eq!(mean_power_contribution(7.9, &flat), 0.0);
    }

    #[test]
    fn excursion_validation() {
        assert!(FrequencyExcursion::new(314.5, 320.0, 0.0).is_err());
        assert!(FrequencyExcursion::new(0.0, 320.0, 1.0).is_err());
    }

    #[test]
    fn report_rows_match_reference_table() {
        let lines = table1_report(&reference_rows()).unwrap();
        let pct: Vec<i64> = lines.iter().map(|l| l.dp_over_pn_pct_rounded()).collect();
        assert_eq!(pct, vec![8, 16, 32, 16, 32]);
        let mw: Vec<i64> = lines.iter().map(|l| l.dp_mw_rounded()).collect();
        assert_eq!(&mw[..3], &[31, 63, 127]);
        assert_eq!(mw[4], 254);
        // The halved-inertia row is exactly half the 7.9 s row at full precision.
        assert_relative_eq!(lines[3].dp_w * 2.0, lines[2].dp_w, max_relative = 1e-15);
        assert_eq!(lines[4].sum_pn_w, 790e6);
    }

    #[test]
    fn report_csv_shape() {
        let csv = report_csv(&table1_report(&reference_rows()).unwrap());
        let mut rows = csv.lines();
        assert_eq!(rows.next().unwrap(), REPORT_CSV_HEADER);
        assert_eq!(rows.next().unwrap(), "Frades2 U1,395,0.5,7.9,8,31");
        assert_eq!(csv.lines().count(), 6);
        let text = report_text(&table1_report(&reference_rows()).unwrap());
        assert!(text.contains("Frades2 HSC U1+U2"));
    }
}
