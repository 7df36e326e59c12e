//! Reduced-order electro-mechanical models.
//!
//! All rotor equations are in per unit of each machine's own rating.
//! Speed 1 pu is the rated mechanical speed, which corresponds to the rated
//! grid frequency for grid-locked machines.

use std::f64::consts::PI;

use crate::analytics::UnitRating;
use crate::error::{Error, Result};

/// Classical machine behind a transient EMF, connected through one reactance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynchronousMachineClassical {
    pub rating: UnitRating,
    pub transient_emf_pu: f64,
    /// Machine, transformer and link reactance lumped together [pu].
    pub effective_reactance_pu: f64,
    /// Damping torque per speed deviation [pu/pu].
    pub damping_pu: f64,
}

impl SynchronousMachineClassical {
    pub fn validate(&self) -> Result<()> {
        self.rating.validate()?;
        if !(self.effective_reactance_pu > 0.0) {
            return Err(Error::field(
                "synchronous.effective_reactance_pu",
                "must be > 0",
            ));
        }
        if !(self.transient_emf_pu > 0.0) {
            return Err(Error::field("synchronous.transient_emf_pu", "must be > 0"));
        }
        if !(self.damping_pu >= 0.0) {
            return Err(Error::field("synchronous.damping_pu", "must be >= 0"));
        }
        Ok(())
    }

    /// Peak transferable power E'·V/X with V = 1 pu.
    pub fn max_power_pu(&self) -> f64 {
        self.transient_emf_pu / self.effective_reactance_pu
    }

    /// Electrical base speed [rad/s].
    pub fn omega_base(&self) -> f64 {
        2.0 * PI * self.rating.rated_frequency
    }

    /// Rotor angle delivering `power_pu` in steady state.
    pub fn equilibrium_angle(&self, power_pu: f64) -> Result<f64> {
        let ratio = power_pu / self.max_power_pu();
        if !(ratio.abs() < 1.0) {
            return Err(Error::domain(format!(
                "{power_pu} pu exceeds the transfer limit {} pu",
                self.max_power_pu()
            )));
        }
        Ok(ratio.asin())
    }

    /// Synchronising power P_max·sin δ [pu].
    pub fn synchronising_power(&self, delta: f64) -> f64 {
        self.max_power_pu() * delta.sin()
    }

    /// Total electrical power delivered to the grid [pu], damping included.
    pub fn electrical_power(&self, delta: f64, speed_pu: f64, grid_frequency_pu: f64) -> f64 {
        self.synchronising_power(delta)
            + self.damping_pu * (speed_pu - grid_frequency_pu) * speed_pu
    }

    /// Small-signal natural frequency of the rotor mode around `delta0` [Hz].
    pub fn natural_frequency(&self, delta0: f64) -> f64 {
        let ks = self.max_power_pu() * delta0.cos();
        (self.omega_base() * ks / self.rating.tau_m()).sqrt() / (2.0 * PI)
    }
}

/// Rates of rotor angle [rad/s] and per-unit speed [1/s].
pub fn sync_machine_derivatives(
    machine: &SynchronousMachineClassical,
    delta: f64,
    speed_pu: f64,
    grid_frequency_pu: f64,
    mech_torque_pu: f64,
) -> (f64, f64) {
    let slip = speed_pu - grid_frequency_pu;
    let d_delta = machine.omega_base() * slip;
    let electrical_torque =
        machine.synchronising_power(delta) / speed_pu + machine.damping_pu * slip;
    let d_speed = (mech_torque_pu - electrical_torque) / machine.rating.tau_m();
    (d_delta, d_speed)
}

/// Where a speed sits relative to the allowed ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeedBand {
    Steady,
    Transient,
    Outside,
}

impl SpeedBand {
    pub fn as_str(self) -> &'static str {
        match self {
            SpeedBand::Steady => "steady",
            SpeedBand::Transient => "transient",
            SpeedBand::Outside => "outside",
        }
    }
}

/// Variable-speed unit whose converter tracks a power setpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariableSpeedUnit {
    pub rating: UnitRating,
    /// First-order converter lag [s].
    pub converter_lag_s: f64,
    /// Electrical power limits [pu].
    pub power_limits_pu: (f64, f64),
    pub steady_speed_range_rpm: (f64, f64),
    pub transient_speed_range_rpm: (f64, f64),
}

impl VariableSpeedUnit {
    pub fn validate(&self) -> Result<()> {
        self.rating.validate()?;
        if !(self.converter_lag_s > 0.0) {
            return Err(Error::field(
                "variable_speed.converter_lag_s",
                "must be > 0",
            ));
        }
        let (lo, hi) = self.power_limits_pu;
        if !(lo < hi) {
            return Err(Error::field(
                "variable_speed.power_limits_pu",
                "min must be below max",
            ));
        }
        let (s0, s1) = self.steady_speed_range_rpm;
        let (t0, t1) = self.transient_speed_range_rpm;
        if !(t0 <= s0 && s0 < s1 && s1 <= t1) {
            return Err(Error::field(
                "variable_speed",
                "steady speed range must lie inside the transient range",
            ));
        }
        Ok(())
    }

    pub fn speed_band(&self, rpm: f64) -> SpeedBand {
        let (s0, s1) = self.steady_speed_range_rpm;
        let (t0, t1) = self.transient_speed_range_rpm;
        if rpm >= s0 && rpm <= s1 {
            SpeedBand::Steady
        } else if rpm >= t0 && rpm <= t1 {
            SpeedBand::Transient
        } else {
            SpeedBand::Outside
        }
    }
}

/// Rates of per-unit speed [1/s] and electrical power [pu/s].
///
/// The rotor is not tied to the grid: it sees only the turbine torque and
/// the converter's power draw.
pub fn vs_unit_derivatives(
    unit: &VariableSpeedUnit,
    speed_pu: f64,
    electrical_power_pu: f64,
    power_setpoint_pu: f64,
    mech_torque_pu: f64,
) -> (f64, f64) {
    let d_speed = (mech_torque_pu - electrical_power_pu / speed_pu) / unit.rating.tau_m();
    let d_power = (power_setpoint_pu - electrical_power_pu) / unit.converter_lag_s;
    (d_speed, d_power)
}

/// Lumped model of the rest of an islanded grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridEquivalentGenerator {
    pub rating: UnitRating,
    /// Permanent droop B_s [pu].
    pub droop_pu: f64,
    /// Governor actuator lag [s].
    pub governor_lag_s: f64,
}

impl GridEquivalentGenerator {
    pub fn validate(&self) -> Result<()> {
        self.rating.validate()?;
        if !(self.droop_pu > 0.0) {
            return Err(Error::field("grid.droop_pu", "must be > 0"));
        }
        if !(self.governor_lag_s > 0.0) {
            return Err(Error::field("grid.governor_lag_s", "must be > 0"));
        }
        Ok(())
    }
}

/// Rates of per-unit speed and governor output for the grid equivalent.
/// `mech_base_pu` is the scheduled mechanical power, `electrical_pu` the
/// power the rest of the island draws from it.
pub fn grid_equivalent_derivatives(
    gen: &GridEquivalentGenerator,
    speed_pu: f64,
    governor_pu: f64,
    mech_base_pu: f64,
    electrical_pu: f64,
) -> (f64, f64) {
    let d_speed = (mech_base_pu + governor_pu - electrical_pu) / (speed_pu * gen.rating.tau_m());
    let d_gov = (-(speed_pu - 1.0) / gen.droop_pu - governor_pu) / gen.governor_lag_s;
    (d_speed, d_gov)
}

/// One linear segment of an imposed frequency profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyRamp {
    pub start_s: f64,
    pub rocof_hz_per_s: f64,
    pub duration_s: f64,
}

/// Ideal grid node following a piecewise-linear frequency profile.
#[derive(Debug, Clone, PartialEq)]
pub struct InfiniteBus {
    pub nominal_hz: f64,
    pub ramps: Vec<FrequencyRamp>,
}

impl InfiniteBus {
    pub fn flat(nominal_hz: f64) -> Self {
        InfiniteBus {
            nominal_hz,
            ramps: Vec::new(),
        }
    }

    pub fn frequency_hz(&self, t: f64) -> f64 {
        self.nominal_hz
            + self
                .ramps
                .iter()
                .map(|r| r.rocof_hz_per_s * (t - r.start_s).clamp(0.0, r.duration_s))
                .sum::<f64>()
    }

    pub fn frequency_pu(&self, t: f64) -> f64 {
        self.frequency_hz(t) / self.nominal_hz
    }
}

/// A machine taking part in an islanded power balance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IslandMember {
    Equivalent { speed_pu: f64 },
    Unit,
}

/// Frequency of an island [pu]: the speed of its single grid equivalent.
pub fn islanded_bus_frequency(members: &[IslandMember]) -> Result<f64> {
    let mut speeds = members.iter().filter_map(|m| match m {
        IslandMember::Equivalent { speed_pu } => Some(*speed_pu),
        IslandMember::Unit => None,
    });
    match (speeds.next(), speeds.next()) {
        (Some(s), None) => Ok(s),
        (None, _) => Err(Error::config(
            "islanded grid needs one grid-equivalent generator, found none",
        )),
        (Some(_), Some(_)) => Err(Error::config(
            "islanded grid needs exactly one grid-equivalent generator, found several",
        )),
    }
}

/// Power the grid equivalent must supply [pu of its own rating]: the load
/// not covered by the other units.
pub fn island_balance(gen: &GridEquivalentGenerator, load_w: f64, other_generation_w: f64) -> f64 {
    (load_w - other_generation_w) / gen.rating.rated_power
}
