//! Scenario description, time integration and metric extraction.

mod integrator;
mod metrics;
mod simulate;

pub use integrator::integrate_step;
pub use metrics::{
    dominant_oscillation, extract_metrics, least_squares_fit, least_squares_slope, ramp_responses,
    trapezoid, MetricWindows, Metrics, Oscillation, RampResponse, Window, DEFAULT_HOLD_S,
    MIN_SPECTRAL_WINDOW_S,
};
pub use simulate::{format_sig9, run_scenario, EventRecord, SimulationResult, CSV_COLUMNS};

use crate::analytics::UnitRating;
use crate::control::{ControlStrategy, ControllerConfig, GovernorConfig, SpeedPolicy};
use crate::error::{Error, Result};
use crate::hydraulics::{HydraulicNetwork, PlantEnvelope, PumpTurbineCharacteristic};
use crate::machines::{
    FrequencyRamp, GridEquivalentGenerator, SynchronousMachineClassical, VariableSpeedUnit,
};

pub const MAX_DT_S: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub enum GridModel {
    Infinite {
        nominal_hz: f64,
    },
    Islanded {
        nominal_hz: f64,
        equivalent: GridEquivalentGenerator,
        initial_load_mw: f64,
    },
}

impl GridModel {
    pub fn nominal_hz(&self) -> f64 {
        match self {
            GridModel::Infinite { nominal_hz } | GridModel::Islanded { nominal_hz, .. } => {
                *nominal_hz
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum UnitModel {
    Synchronous(SynchronousMachineClassical),
    VariableSpeed(VariableSpeedUnit),
}

impl UnitModel {
    pub fn rating(&self) -> &UnitRating {
        match self {
            UnitModel::Synchronous(m) => &m.rating,
            UnitModel::VariableSpeed(u) => &u.rating,
        }
    }
}

/// Waterway and turbine of the simulated unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Plant {
    pub network: HydraulicNetwork,
    pub characteristic: PumpTurbineCharacteristic,
    pub head_gross_m: f64,
    pub envelope: PlantEnvelope,
    /// Source of `network`, if it came from a file.
    pub geometry_file: Option<String>,
    /// Source of `characteristic`, if it came from a file.
    pub characteristic_file: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Event {
    /// Linear frequency change of an infinite bus.
    FrequencyRamp {
        time_s: f64,
        rocof_hz_per_s: f64,
        duration_s: f64,
    },
    /// Step of island load; positive adds load.
    LoadStep { time_s: f64, delta_mw: f64 },
    /// New base power setpoint P_o.
    Setpoint { time_s: f64, p_o_pu: f64 },
}

impl Event {
    pub fn time_s(&self) -> f64 {
        match *self {
            Event::FrequencyRamp { time_s, .. }
            | Event::LoadStep { time_s, .. }
            | Event::Setpoint { time_s, .. } => time_s,
        }
    }

    /// Time the event stops acting.
    pub fn end_s(&self) -> f64 {
        match *self {
            Event::FrequencyRamp {
                time_s, duration_s, ..
            } => time_s + duration_s,
            _ => self.time_s(),
        }
    }
}

/// Rating as written in a configuration, kept so files round-trip exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatingSpec {
    pub rated_power_mw: f64,
    pub rated_speed_rpm: f64,
    pub tau_m_s: f64,
}

impl RatingSpec {
    pub fn rating(&self, rated_frequency: f64) -> Result<UnitRating> {
        UnitRating::from_time_constant(
            self.rated_power_mw * 1e6,
            self.rated_speed_rpm * 2.0 * std::f64::consts::PI / 60.0,
            self.tau_m_s,
            rated_frequency,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub dt_s: f64,
    pub duration_s: f64,
    /// Spacing of rows in the written CSV; metrics use every step.
    pub output_interval_s: f64,
    pub grid: GridModel,
    pub unit: UnitModel,
    pub unit_spec: RatingSpec,
    /// Rating inputs of the grid equivalent, for islanded grids.
    pub equivalent_spec: Option<RatingSpec>,
    pub initial_power_mw: f64,
    pub controller: ControllerConfig,
    pub governor: GovernorConfig,
    pub speed_policy: SpeedPolicy,
    pub strategy: ControlStrategy,
    pub plant: Plant,
    pub events: Vec<Event>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt_s > 0.0 && self.dt_s <= MAX_DT_S) {
            return Err(Error::field(
                "simulation.dt_s",
                format!("must lie in (0, {MAX_DT_S}]"),
            ));
        }
        if !(self.duration_s > 0.0 && self.duration_s.is_finite()) {
            return Err(Error::field("simulation.duration_s", "must be > 0"));
        }
        if !(self.output_interval_s >= self.dt_s) {
            return Err(Error::field(
                "simulation.output_interval_s",
                "must be >= dt_s",
            ));
        }
        if !(self.grid.nominal_hz() > 0.0) {
            return Err(Error::field("grid.nominal_hz", "must be > 0"));
        }
        if let GridModel::Islanded {
            equivalent,
            initial_load_mw,
            ..
        } = &self.grid
        {
            equivalent.validate()?;
            if !(*initial_load_mw >= 0.0) {
                return Err(Error::field("grid.initial_load_mw", "must be >= 0"));
            }
        }
        match &self.unit {
            UnitModel::Synchronous(m) => m.validate()?,
            UnitModel::VariableSpeed(u) => u.validate()?,
        }
        self.controller.validate()?;
        self.governor.validate()?;
        self.speed_policy.validate()?;
        self.plant.network.validate()?;
        self.plant.characteristic.validate()?;
        if self.strategy == ControlStrategy::GuideVanePower {
            return Err(Error::field(
                "controller.strategy",
                "guide_vane_power is reserved; the engine runs converter_power only",
            ));
        }
        let mut last = 0.0_f64;
        for (i, e) in self.events.iter().enumerate() {
            let field = format!("event[{i}]");
            if !(e.time_s() >= 0.0) {
                return Err(Error::field(field, "time_s must be >= 0"));
            }
            if e.time_s() < last {
                return Err(Error::field(field, "events must be listed in time order"));
            }
            last = e.time_s();
            if e.end_s() > self.duration_s {
                return Err(Error::field(
                    field,
                    "event ends after the simulation duration",
                ));
            }
            match (e, &self.grid, &self.unit) {
                (Event::FrequencyRamp { duration_s, .. }, GridModel::Infinite { .. }, _) => {
                    if !(*duration_s > 0.0) {
                        return Err(Error::field(field, "duration_s must be > 0"));
                    }
                }
                (Event::FrequencyRamp { .. }, _, _) => {
                    return Err(Error::field(field, "frequency ramps need an infinite grid"));
                }
                (Event::LoadStep { .. }, GridModel::Islanded { .. }, _) => {}
                (Event::LoadStep { .. }, _, _) => {
                    return Err(Error::field(field, "load steps need an islanded grid"));
                }
                (Event::Setpoint { .. }, _, UnitModel::VariableSpeed(_)) => {}
                (Event::Setpoint { .. }, _, _) => {
                    return Err(Error::field(
                        field,
                        "setpoint changes need a variable-speed unit",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Imposed frequency ramps, for infinite-grid scenarios.
    pub fn frequency_ramps(&self) -> Vec<FrequencyRamp> {
        self.events
            .iter()
            .filter_map(|e| match *e {
                Event::FrequencyRamp {
                    time_s,
                    rocof_hz_per_s,
                    duration_s,
                } => Some(FrequencyRamp {
                    start_s: time_s,
                    rocof_hz_per_s,
                    duration_s,
                }),
                _ => None,
            })
            .collect()
    }

    pub fn with_kd(&self, kd_s: f64) -> Self {
        let mut s = self.clone();
        s.controller.kd_s = kd_s;
        s
    }

    pub fn with_dt(&self, dt_s: f64) -> Self {
        let mut s = self.clone();
        s.dt_s = dt_s;
        s.output_interval_s = s.output_interval_s.max(dt_s);
        s
    }
}

/// Runs independent scenarios on separate threads; results keep input order.
pub fn run_batch(scenarios: &[Scenario]) -> Vec<Result<SimulationResult>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = scenarios
            .iter()
            .map(|s| scope.spawn(move || run_scenario(s)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario thread panicked"))
            .collect()
    })
}
