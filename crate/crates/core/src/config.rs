//! Scenario configuration files.
//!
//! One TOML dialect. Every physical quantity carries its unit in the key
//! name. Unknown keys are rejected with their line and column.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analytics::UnitRating;
use crate::control::{
    ControlStrategy, ControllerConfig, FfrConfig, GovernorConfig, SpeedMode, SpeedPolicy,
};
use crate::engine::{Event, GridModel, Plant, RatingSpec, Scenario, UnitModel};
use crate::error::{Error, Result};
use crate::hydraulics::{
    HydraulicNetwork, PlantEnvelope, PumpTurbineCharacteristic, SyntheticParams,
};
use crate::machines::{GridEquivalentGenerator, SynchronousMachineClassical, VariableSpeedUnit};

pub const REQUIRED_SECTIONS: [&str; 3] = ["simulation", "grid", "unit"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    simulation: SimulationSection,
    grid: GridSection,
    unit: UnitSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    synchronous: Option<SynchronousSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    variable_speed: Option<VariableSpeedSection>,
    #[serde(default)]
    controller: ControllerSection,
    #[serde(default)]
    governor: GovernorSection,
    #[serde(default)]
    speed_policy: SpeedPolicySection,
    #[serde(default)]
    hydraulics: HydraulicsSection,
    #[serde(default, rename = "event", skip_serializing_if = "Vec::is_empty")]
    events: Vec<EventEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulationSection {
    #[serde(default)]
    name: String,
    #[serde(default = "defaults::dt_s")]
    dt_s: f64,
    duration_s: f64,
    #[serde(default = "defaults::output_interval_s")]
    output_interval_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum GridKind {
    Infinite,
    Islanded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSection {
    kind: GridKind,
    #[serde(default = "defaults::nominal_hz")]
    nominal_hz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    equivalent_rated_power_mw: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    equivalent_tau_m_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    droop_pu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    governor_lag_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    initial_load_mw: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum UnitKind {
    Synchronous,
    VariableSpeed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitSection {
    kind: UnitKind,
    #[serde(default = "defaults::rated_power_mw")]
    rated_power_mw: f64,
    #[serde(default = "defaults::rated_speed_rpm")]
    rated_speed_rpm: f64,
    #[serde(default = "defaults::tau_m_s")]
    tau_m_s: f64,
    #[serde(default = "defaults::initial_power_mw")]
    initial_power_mw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct SynchronousSection {
    transient_emf_pu: f64,
    effective_reactance_pu: f64,
    damping_pu: f64,
}

impl Default for SynchronousSection {
    fn default() -> Self {
        SynchronousSection {
            transient_emf_pu: 1.2,
            effective_reactance_pu: 1.03,
            damping_pu: 15.8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct VariableSpeedSection {
    converter_lag_s: f64,
    power_min_pu: f64,
    power_max_pu: f64,
    steady_speed_min_rpm: f64,
    steady_speed_max_rpm: f64,
    transient_speed_min_rpm: f64,
    transient_speed_max_rpm: f64,
}

impl Default for VariableSpeedSection {
    fn default() -> Self {
        VariableSpeedSection {
            converter_lag_s: 0.02,
            power_min_pu: 0.0,
            power_max_pu: 420.0 / 395.0,
            steady_speed_min_rpm: 350.0,
            steady_speed_max_rpm: 381.0,
            transient_speed_min_rpm: 340.0,
            transient_speed_max_rpm: 391.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum StrategyName {
    ConverterPower,
    GuideVanePower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct ControllerSection {
    strategy: StrategyName,
    si_enabled: bool,
    kd_s: f64,
    tau_d_s: f64,
    fcr_enabled: bool,
    bs_pu: f64,
    tau_p_s: f64,
    ffr_enabled: bool,
    ffr_threshold_hz: f64,
    ffr_step_pu: f64,
    ffr_duration_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_o_pu: Option<f64>,
}

impl Default for ControllerSection {
    fn default() -> Self {
        let c = ControllerConfig::default();
        ControllerSection {
            strategy: StrategyName::ConverterPower,
            si_enabled: c.si_enabled,
            kd_s: c.kd_s,
            tau_d_s: c.tau_d_s,
            fcr_enabled: c.fcr_enabled,
            bs_pu: c.bs_pu,
            tau_p_s: c.tau_p_s,
            ffr_enabled: c.ffr.enabled,
            ffr_threshold_hz: c.ffr.threshold_hz,
            ffr_step_pu: c.ffr.step_pu,
            ffr_duration_s: c.ffr.duration_s,
            p_o_pu: c.p_o_pu,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct GovernorSection {
    enabled: bool,
    kp_pu: f64,
    ki_per_s: f64,
    rate_limit_pu_per_s: f64,
    opening_min_pu: f64,
    opening_max_pu: f64,
}

impl Default for GovernorSection {
    fn default() -> Self {
        let g = GovernorConfig::default();
        GovernorSection {
            enabled: g.enabled,
            kp_pu: g.kp,
            ki_per_s: g.ki_per_s,
            rate_limit_pu_per_s: g.rate_limit_pu_per_s,
            opening_min_pu: g.opening_min,
            opening_max_pu: g.opening_max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ModeName {
    Optimal,
    Middle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct SpeedPolicySection {
    mode: ModeName,
    n_min_rpm: f64,
    n_max_rpm: f64,
    n_middle_rpm: f64,
    optimal_knee_pu: f64,
}

impl Default for SpeedPolicySection {
    fn default() -> Self {
        let p = SpeedPolicy::default();
        SpeedPolicySection {
            mode: match p.mode {
                SpeedMode::Optimal => ModeName::Optimal,
                SpeedMode::Middle => ModeName::Middle,
            },
            n_min_rpm: p.n_min_rpm,
            n_max_rpm: p.n_max_rpm,
            n_middle_rpm: p.n_middle_rpm,
            optimal_knee_pu: p.optimal_knee_pu,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct HydraulicsSection {
    head_gross_m: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    geometry_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    characteristic_file: Option<String>,
    min_power_mw: f64,
    max_power_mw: f64,
    allow_no_load: bool,
}

impl Default for HydraulicsSection {
    fn default() -> Self {
        let env = PlantEnvelope::default();
        HydraulicsSection {
            head_gross_m: 431.8,
            geometry_file: None,
            characteristic_file: None,
            min_power_mw: env.min_power / 1e6,
            max_power_mw: env.max_power / 1e6,
            allow_no_load: env.allow_no_load,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum EventEntry {
    FrequencyRamp {
        time_s: f64,
        rocof_hz_per_s: f64,
        duration_s: f64,
    },
    LoadStep {
        time_s: f64,
        delta_mw: f64,
    },
    Setpoint {
        time_s: f64,
        p_o_pu: f64,
    },
}

mod defaults {
    pub fn dt_s() -> f64 {
        0.001
    }
    pub fn output_interval_s() -> f64 {
        0.01
    }
    pub fn nominal_hz() -> f64 {
        50.0
    }
    pub fn rated_power_mw() -> f64 {
        395.0
    }
    pub fn rated_speed_rpm() -> f64 {
        375.0
    }
    pub fn tau_m_s() -> f64 {
        7.9
    }
    pub fn initial_power_mw() -> f64 {
        237.0
    }
    pub const EQUIVALENT_RATED_POWER_MW: f64 = 4400.0;
    pub const EQUIVALENT_TAU_M_S: f64 = 7.9;
    pub const DROOP_PU: f64 = 0.10;
    pub const GOVERNOR_LAG_S: f64 = 1.0;
    pub const INITIAL_LOAD_MW: f64 = 3500.0;
}

/// Converts a TOML diagnostic into a located error.
pub(crate) fn toml_error(text: &str, err: &toml::de::Error) -> Error {
    let (line, column) = err
        .span()
        .map(|s| line_col(text, s.start))
        .unwrap_or((1, 1));
    let message = err.message().trim().to_string();
    let spanned = err.span().and_then(|s| text.get(s)).map(|k| {
        k.trim()
            .trim_matches(['[', ']', '"', '\''])
            .trim()
            .to_string()
    });
    if let Some(key) = duplicate_key_name(&message, spanned) {
        if let Some(first_line) = first_occurrence(text, &key, line) {
            return Error::DuplicateKey {
                key,
                first_line,
                second_line: line,
            };
        }
    }
    Error::Syntax {
        line,
        column,
        message,
    }
}

/// 1-based line and column of a byte offset.
pub(crate) fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Older parsers name the key in backticks; newer ones only point at it.
fn duplicate_key_name(message: &str, spanned: Option<String>) -> Option<String> {
    let rest = message.strip_prefix("duplicate key")?.trim_start();
    if let Some(rest) = rest.strip_prefix('`') {
        return Some(rest[..rest.find('`')?].to_string());
    }
    let key = spanned?;
    let key = key.rsplit('.').next()?.trim().to_string();
    (!key.is_empty()).then_some(key)
}

/// Line of the last definition of `key` before line `second`.
fn first_occurrence(text: &str, key: &str, second: usize) -> Option<usize> {
    let defines = |l: &str| {
        let l = l.trim_start();
        if let Some(rest) = l.strip_prefix(key) {
            return rest.trim_start().starts_with('=');
        }
        let header = l.trim_start_matches('[').split(']').next().unwrap_or("");
        l.starts_with('[') && header.rsplit('.').next().map(str::trim) == Some(key)
    };
    text.lines()
        .enumerate()
        .take(second.saturating_sub(1))
        .filter(|(_, l)| defines(l))
        .map(|(i, _)| i + 1)
        .last()
}

/// Parses a configuration, resolving relative data-file paths against the
/// working directory.
pub fn parse_config(text: &str) -> Result<Scenario> {
    parse_config_in(text, None)
}

/// Reads and parses a configuration file. Relative data-file paths resolve
/// against the file's directory.
pub fn load_config(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_in(&text, path.parent())
}

pub fn parse_config_in(text: &str, base: Option<&Path>) -> Result<Scenario> {
    let table: toml::Table = text.parse().map_err(|e| toml_error(text, &e))?;
    let missing: Vec<String> = REQUIRED_SECTIONS
        .iter()
        .filter(|s| !table.contains_key(**s))
        .map(|s| s.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingSections(missing));
    }
    let doc: Document = toml::from_str(text).map_err(|e| toml_error(text, &e))?;
    let scenario = build(doc, base)?;
    scenario.validate()?;
    Ok(scenario)
}

fn resolve(base: Option<&Path>, file: &str) -> PathBuf {
    let p = Path::new(file);
    match base {
        Some(b) if p.is_relative() => b.join(p),
        _ => p.to_path_buf(),
    }
}

fn positive(field: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::field(field, format!("must be > 0, got {v}")))
    }
}

fn rating(field: &str, spec: &RatingSpec, hz: f64) -> Result<UnitRating> {
    positive(&format!("{field}.rated_power_mw"), spec.rated_power_mw)?;
    positive(&format!("{field}.rated_speed_rpm"), spec.rated_speed_rpm)?;
    positive(&format!("{field}.tau_m_s"), spec.tau_m_s)?;
    spec.rating(hz)
        .map_err(|e| Error::field(field, e.to_string()))
}

fn build(doc: Document, base: Option<&Path>) -> Result<Scenario> {
    let hz = positive("grid.nominal_hz", doc.grid.nominal_hz)?;
    let g = &doc.grid;
    let equivalent_spec = match g.kind {
        GridKind::Infinite => None,
        GridKind::Islanded => Some(RatingSpec {
            rated_power_mw: g
                .equivalent_rated_power_mw
                .unwrap_or(defaults::EQUIVALENT_RATED_POWER_MW),
            rated_speed_rpm: hz * 60.0,
            tau_m_s: g.equivalent_tau_m_s.unwrap_or(defaults::EQUIVALENT_TAU_M_S),
        }),
    };
    let grid = match g.kind {
        GridKind::Infinite => {
            for (name, v) in [
                ("equivalent_rated_power_mw", g.equivalent_rated_power_mw),
                ("equivalent_tau_m_s", g.equivalent_tau_m_s),
                ("droop_pu", g.droop_pu),
                ("governor_lag_s", g.governor_lag_s),
                ("initial_load_mw", g.initial_load_mw),
            ] {
                if v.is_some() {
                    return Err(Error::field(
                        format!("grid.{name}"),
                        "only valid for an islanded grid",
                    ));
                }
            }
            GridModel::Infinite { nominal_hz: hz }
        }
        GridKind::Islanded => GridModel::Islanded {
            nominal_hz: hz,
            equivalent: GridEquivalentGenerator {
                rating: rating("grid", equivalent_spec.as_ref().expect("islanded"), hz)?,
                droop_pu: g.droop_pu.unwrap_or(defaults::DROOP_PU),
                governor_lag_s: g.governor_lag_s.unwrap_or(defaults::GOVERNOR_LAG_S),
            },
            initial_load_mw: g.initial_load_mw.unwrap_or(defaults::INITIAL_LOAD_MW),
        },
    };

    let u = &doc.unit;
    let unit_spec = RatingSpec {
        rated_power_mw: u.rated_power_mw,
        rated_speed_rpm: u.rated_speed_rpm,
        tau_m_s: u.tau_m_s,
    };
    let unit_rating = rating("unit", &unit_spec, hz)?;
    let unit = match u.kind {
        UnitKind::Synchronous => {
            let s = doc.synchronous.clone().unwrap_or_default();
            UnitModel::Synchronous(SynchronousMachineClassical {
                rating: unit_rating,
                transient_emf_pu: s.transient_emf_pu,
                effective_reactance_pu: s.effective_reactance_pu,
                damping_pu: s.damping_pu,
            })
        }
        UnitKind::VariableSpeed => {
            let v = doc.variable_speed.clone().unwrap_or_default();
            UnitModel::VariableSpeed(VariableSpeedUnit {
                rating: unit_rating,
                converter_lag_s: v.converter_lag_s,
                power_limits_pu: (v.power_min_pu, v.power_max_pu),
                steady_speed_range_rpm: (v.steady_speed_min_rpm, v.steady_speed_max_rpm),
                transient_speed_range_rpm: (v.transient_speed_min_rpm, v.transient_speed_max_rpm),
            })
        }
    };

    let c = &doc.controller;
    let controller = ControllerConfig {
        si_enabled: c.si_enabled,
        kd_s: c.kd_s,
        tau_d_s: c.tau_d_s,
        fcr_enabled: c.fcr_enabled,
        bs_pu: c.bs_pu,
        tau_p_s: c.tau_p_s,
        ffr: FfrConfig {
            enabled: c.ffr_enabled,
            threshold_hz: c.ffr_threshold_hz,
            step_pu: c.ffr_step_pu,
            duration_s: c.ffr_duration_s,
        },
        p_o_pu: c.p_o_pu,
    };
    if c.ffr_enabled && !(c.ffr_threshold_hz < hz) {
        return Err(Error::field(
            "controller.ffr_threshold_hz",
            "must lie below the nominal frequency",
        ));
    }
    let strategy = match c.strategy {
        StrategyName::ConverterPower => ControlStrategy::ConverterPower,
        StrategyName::GuideVanePower => ControlStrategy::GuideVanePower,
    };
    let gv = &doc.governor;
    let governor = GovernorConfig {
        enabled: gv.enabled,
        kp: gv.kp_pu,
        ki_per_s: gv.ki_per_s,
        rate_limit_pu_per_s: gv.rate_limit_pu_per_s,
        opening_min: gv.opening_min_pu,
        opening_max: gv.opening_max_pu,
    };
    let sp = &doc.speed_policy;
    let speed_policy = SpeedPolicy {
        mode: match sp.mode {
            ModeName::Optimal => SpeedMode::Optimal,
            ModeName::Middle => SpeedMode::Middle,
        },
        n_min_rpm: sp.n_min_rpm,
        n_max_rpm: sp.n_max_rpm,
        n_middle_rpm: sp.n_middle_rpm,
        optimal_knee_pu: sp.optimal_knee_pu,
    };

    let h = &doc.hydraulics;
    let network = match &h.geometry_file {
        Some(f) => HydraulicNetwork::load(&resolve(base, f))?,
        None => HydraulicNetwork::default_network(),
    };
    let characteristic = match &h.characteristic_file {
        Some(f) => PumpTurbineCharacteristic::load(&resolve(base, f))?,
        None => PumpTurbineCharacteristic::synthetic(&SyntheticParams::default()),
    };
    network
        .with_gross_head(h.head_gross_m)
        .map_err(|e| Error::field("hydraulics.head_gross_m", e.to_string()))?;
    let plant = Plant {
        network,
        characteristic,
        head_gross_m: h.head_gross_m,
        envelope: PlantEnvelope {
            min_power: h.min_power_mw * 1e6,
            max_power: h.max_power_mw * 1e6,
            allow_no_load: h.allow_no_load,
        },
        geometry_file: h.geometry_file.clone(),
        characteristic_file: h.characteristic_file.clone(),
    };

    let events = doc
        .events
        .iter()
        .map(|e| match *e {
            EventEntry::FrequencyRamp {
                time_s,
                rocof_hz_per_s,
                duration_s,
            } => Event::FrequencyRamp {
                time_s,
                rocof_hz_per_s,
                duration_s,
            },
            EventEntry::LoadStep { time_s, delta_mw } => Event::LoadStep { time_s, delta_mw },
            EventEntry::Setpoint { time_s, p_o_pu } => Event::Setpoint { time_s, p_o_pu },
        })
        .collect();

    Ok(Scenario {
        name: doc.simulation.name,
        dt_s: doc.simulation.dt_s,
        duration_s: doc.simulation.duration_s,
        output_interval_s: doc.simulation.output_interval_s,
        grid,
        unit,
        unit_spec,
        equivalent_spec,
        initial_power_mw: u.initial_power_mw,
        controller,
        governor,
        speed_policy,
        strategy,
        plant,
        events,
    })
}

/// Renders a scenario in the configuration dialect.
pub fn serialize_config(s: &Scenario) -> String {
    let grid = match &s.grid {
        GridModel::Infinite { nominal_hz } => GridSection {
            kind: GridKind::Infinite,
            nominal_hz: *nominal_hz,
            equivalent_rated_power_mw: None,
            equivalent_tau_m_s: None,
            droop_pu: None,
            governor_lag_s: None,
            initial_load_mw: None,
        },
        GridModel::Islanded {
            nominal_hz,
            equivalent,
            initial_load_mw,
        } => {
            let _ = equivalent;
            GridSection {
                kind: GridKind::Islanded,
                nominal_hz: *nominal_hz,
                equivalent_rated_power_mw: s.equivalent_spec.map(|r| r.rated_power_mw),
                equivalent_tau_m_s: s.equivalent_spec.map(|r| r.tau_m_s),
                droop_pu: Some(equivalent.droop_pu),
                governor_lag_s: Some(equivalent.governor_lag_s),
                initial_load_mw: Some(*initial_load_mw),
            }
        }
    };
    let (kind, synchronous, variable_speed) = match &s.unit {
        UnitModel::Synchronous(m) => (
            UnitKind::Synchronous,
            Some(SynchronousSection {
                transient_emf_pu: m.transient_emf_pu,
                effective_reactance_pu: m.effective_reactance_pu,
                damping_pu: m.damping_pu,
            }),
            None,
        ),
        UnitModel::VariableSpeed(v) => (
            UnitKind::VariableSpeed,
            None,
            Some(VariableSpeedSection {
                converter_lag_s: v.converter_lag_s,
                power_min_pu: v.power_limits_pu.0,
                power_max_pu: v.power_limits_pu.1,
                steady_speed_min_rpm: v.steady_speed_range_rpm.0,
                steady_speed_max_rpm: v.steady_speed_range_rpm.1,
                transient_speed_min_rpm: v.transient_speed_range_rpm.0,
                transient_speed_max_rpm: v.transient_speed_range_rpm.1,
            }),
        ),
    };
    let c = &s.controller;
    let doc = Document {
        simulation: SimulationSection {
            name: s.name.clone(),
            dt_s: s.dt_s,
            duration_s: s.duration_s,
            output_interval_s: s.output_interval_s,
        },
        grid,
        unit: UnitSection {
            kind,
            rated_power_mw: s.unit_spec.rated_power_mw,
            rated_speed_rpm: s.unit_spec.rated_speed_rpm,
            tau_m_s: s.unit_spec.tau_m_s,
            initial_power_mw: s.initial_power_mw,
        },
        synchronous,
        variable_speed,
        controller: ControllerSection {
            strategy: match s.strategy {
                ControlStrategy::ConverterPower => StrategyName::ConverterPower,
                ControlStrategy::GuideVanePower => StrategyName::GuideVanePower,
            },
            si_enabled: c.si_enabled,
            kd_s: c.kd_s,
            tau_d_s: c.tau_d_s,
            fcr_enabled: c.fcr_enabled,
            bs_pu: c.bs_pu,
            tau_p_s: c.tau_p_s,
            ffr_enabled: c.ffr.enabled,
            ffr_threshold_hz: c.ffr.threshold_hz,
            ffr_step_pu: c.ffr.step_pu,
            ffr_duration_s: c.ffr.duration_s,
            p_o_pu: c.p_o_pu,
        },
        governor: GovernorSection {
            enabled: s.governor.enabled,
            kp_pu: s.governor.kp,
            ki_per_s: s.governor.ki_per_s,
            rate_limit_pu_per_s: s.governor.rate_limit_pu_per_s,
            opening_min_pu: s.governor.opening_min,
            opening_max_pu: s.governor.opening_max,
        },
        speed_policy: SpeedPolicySection {
            mode: match s.speed_policy.mode {
                SpeedMode::Optimal => ModeName::Optimal,
                SpeedMode::Middle => ModeName::Middle,
            },
            n_min_rpm: s.speed_policy.n_min_rpm,
            n_max_rpm: s.speed_policy.n_max_rpm,
            n_middle_rpm: s.speed_policy.n_middle_rpm,
            optimal_knee_pu: s.speed_policy.optimal_knee_pu,
        },
        hydraulics: HydraulicsSection {
            head_gross_m: s.plant.head_gross_m,
            geometry_file: s.plant.geometry_file.clone(),
            characteristic_file: s.plant.characteristic_file.clone(),
            min_power_mw: s.plant.envelope.min_power / 1e6,
            max_power_mw: s.plant.envelope.max_power / 1e6,
            allow_no_load: s.plant.envelope.allow_no_load,
        },
        events: s
            .events
            .iter()
            .map(|e| match *e {
                Event::FrequencyRamp {
                    time_s,
                    rocof_hz_per_s,
                    duration_s,
                } => EventEntry::FrequencyRamp {
                    time_s,
                    rocof_hz_per_s,
                    duration_s,
                },
                Event::LoadStep { time_s, delta_mw } => EventEntry::LoadStep { time_s, delta_mw },
                Event::Setpoint { time_s, p_o_pu } => EventEntry::Setpoint { time_s, p_o_pu },
            })
            .collect(),
    };
    toml::to_string(&doc).expect("scenario serialises")
}
