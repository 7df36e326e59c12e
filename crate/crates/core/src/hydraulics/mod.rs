//! Rigid-water-column model of the waterway.
//!
//! Topology is fixed: upper reservoir → headrace → upper surge tank →
//! penstock → turbine → lower surge tank → tailrace → lower reservoir.
//! Each pipe carries one discharge state, each surge tank one level state.
//! The turbine is algebraic: its net head is whatever passes the penstock
//! discharge through the characteristic at the current speed and opening.

mod characteristic;
mod geometry;
mod steady;

pub use characteristic::{PumpTurbineCharacteristic, SyntheticParams};
pub use geometry::{Element, DEFAULT_GEOMETRY};
pub use steady::{steady_state_init, PlantEnvelope, SpeedSelection, SteadyState};

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const G: f64 = 9.81;
pub const RHO: f64 = 1000.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Reservoir {
    pub name: String,
    /// Free-surface elevation [m], constant during a run.
    pub level: f64,
    pub min_level: f64,
    pub max_level: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pipe {
    pub name: String,
    pub length: f64,
    pub area: f64,
    /// Dimensionless loss factor K in h = K·v²/(2g).
    pub friction_coefficient: f64,
}

impl Pipe {
    /// Water inertance L/(g·A) [s²/m²].
    pub fn inertance(&self) -> f64 {
        self.length / (G * self.area)
    }

    /// Head-loss coefficient so that h = c·Q|Q| [s²/m⁵].
    pub fn loss_coefficient(&self) -> f64 {
        self.friction_coefficient / (2.0 * G * self.area * self.area)
    }

    pub fn head_loss(&self, flow: f64) -> f64 {
        self.loss_coefficient() * flow * flow.abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurgeTank {
    pub name: String,
    pub section_area: f64,
    /// Nominal free-surface level [m]; the run starts from the steady level.
    pub level: f64,
    pub min_level: f64,
    pub max_level: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HydraulicNetwork {
    pub upper: Reservoir,
    pub headrace: Pipe,
    pub upper_surge: SurgeTank,
    pub penstock: Pipe,
    pub lower_surge: SurgeTank,
    pub tailrace: Pipe,
    pub lower: Reservoir,
}

impl HydraulicNetwork {
    pub fn gross_head(&self) -> f64 {
        self.upper.level - self.lower.level
    }

    /// Copy of the network with the upper reservoir moved to give `head`.
    pub fn with_gross_head(&self, head: f64) -> Result<Self> {
        let level = self.lower.level + head;
        if !(level >= self.upper.min_level - 1e-9 && level <= self.upper.max_level + 1e-9) {
            return Err(Error::domain(format!(
                "gross head {head} m puts `{}` at {level} m, outside [{}, {}]",
                self.upper.name, self.upper.min_level, self.upper.max_level
            )));
        }
        let mut net = self.clone();
        net.upper.level = level;
        Ok(net)
    }

    pub fn total_loss_coefficient(&self) -> f64 {
        self.headrace.loss_coefficient()
            + self.penstock.loss_coefficient()
            + self.tailrace.loss_coefficient()
    }

    /// Natural period of the headrace / upper surge tank mass oscillation [s].
    pub fn upper_surge_period(&self) -> f64 {
        2.0 * PI
            * (self.headrace.length * self.upper_surge.section_area / (G * self.headrace.area))
                .sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        for pipe in [&self.headrace, &self.penstock, &self.tailrace] {
            if !(pipe.length > 0.0 && pipe.area > 0.0) {
                return Err(Error::field(&pipe.name, "pipe length and area must be > 0"));
            }
            if !(pipe.friction_coefficient >= 0.0) {
                return Err(Error::field(
                    &pipe.name,
                    "friction_coefficient must be >= 0",
                ));
            }
        }
        for tank in [&self.upper_surge, &self.lower_surge] {
            if !(tank.section_area > 0.0) {
                return Err(Error::field(&tank.name, "section_area must be > 0"));
            }
            if !(tank.min_level < tank.max_level) {
                return Err(Error::field(
                    &tank.name,
                    "min_level must be below max_level",
                ));
            }
        }
        for res in [&self.upper, &self.lower] {
            if !(res.level >= res.min_level && res.level <= res.max_level) {
                return Err(Error::field(
                    &res.name,
                    "level outside [min_level, max_level]",
                ));
            }
        }
        if !(self.gross_head() > 0.0) {
            return Err(Error::config(
                "upper reservoir must lie above the lower reservoir",
            ));
        }
        Ok(())
    }
}

/// Dynamic hydraulic states.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HydraulicState {
    pub headrace_flow: f64,
    pub upper_surge_level: f64,
    /// Penstock discharge, equal to the turbine discharge q₁.
    pub penstock_flow: f64,
    pub lower_surge_level: f64,
    pub tailrace_flow: f64,
}

impl HydraulicState {
    pub const LEN: usize = 5;

    pub fn to_array(&self) -> [f64; 5] {
        [
            self.headrace_flow,
            self.upper_surge_level,
            self.penstock_flow,
            self.lower_surge_level,
            self.tailrace_flow,
        ]
    }

    pub fn from_slice(x: &[f64]) -> Self {
        HydraulicState {
            headrace_flow: x[0],
            upper_surge_level: x[1],
            penstock_flow: x[2],
            lower_surge_level: x[3],
            tailrace_flow: x[4],
        }
    }
}

/// Turbine quantities at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurbinePoint {
    /// q₁ [m³/s].
    pub discharge: f64,
    /// h₁ [m].
    pub net_head: f64,
    /// t₁ [N·m].
    pub torque: f64,
    pub n11: f64,
}

impl TurbinePoint {
    pub fn mechanical_power(&self, speed_rad_s: f64) -> f64 {
        self.torque * speed_rad_s
    }

    pub fn hydraulic_power(&self) -> f64 {
        RHO * G * self.discharge * self.net_head
    }
}

/// Discharge and torque at a given speed, opening and net head.
pub fn turbine_operating_point(
    speed_rad_s: f64,
    opening: f64,
    net_head: f64,
    characteristic: &PumpTurbineCharacteristic,
) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&opening) {
        return Err(Error::domain(format!("opening {opening} outside [0, 1]")));
    }
    if !(net_head > 0.0) {
        return Err(Error::domain(format!(
            "net head must be positive, got {net_head}"
        )));
    }
    let n11 = characteristic.unit_speed(speed_rad_s, net_head);
    let (q11, t11) = characteristic.interpolate(n11, opening)?;
    let d = characteristic.diameter;
    Ok((q11 * d * d * net_head.sqrt(), t11 * d * d * d * net_head))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydraulicRates {
    pub state: HydraulicState,
    pub turbine: TurbinePoint,
}

impl HydraulicRates {
    /// Flow imbalance at each surge-tank junction after accounting for the
    /// level change: in − out − A·dz/dt.
    pub fn junction_residuals(
        &self,
        state: &HydraulicState,
        network: &HydraulicNetwork,
    ) -> [f64; 2] {
        [
            state.headrace_flow
                - state.penstock_flow
                - network.upper_surge.section_area * self.state.upper_surge_level,
            state.penstock_flow
                - state.tailrace_flow
                - network.lower_surge.section_area * self.state.lower_surge_level,
        ]
    }
}

/// Below this discharge with closed vanes the penstock is taken as still.
const STILL_FLOW: f64 = 1e-9;

/// Time derivatives of every hydraulic state.
pub fn hydraulic_derivatives(
    state: &HydraulicState,
    opening: f64,
    speed_rad_s: f64,
    network: &HydraulicNetwork,
    characteristic: &PumpTurbineCharacteristic,
) -> Result<HydraulicRates> {
    let z1 = state.upper_surge_level;
    let z2 = state.lower_surge_level;
    let q1 = state.headrace_flow;
    let q2 = state.penstock_flow;
    let q3 = state.tailrace_flow;

    let available = z1 - z2 - network.penstock.head_loss(q2);
    let closed = opening <= 0.0;
    let (net_head, d_q2) = if closed {
        if q2.abs() > STILL_FLOW {
            return Err(Error::domain(format!(
                "guide vanes closed with {q2} m³/s still in the penstock"
            )));
        }
        (available, 0.0)
    } else {
        let head =
            characteristic.head_for_discharge(q2, speed_rad_s, opening, available.max(1.0))?;
        (head, (available - head) / network.penstock.inertance())
    };
    if !(net_head > 0.0) {
        return Err(Error::domain(format!("non-positive net head {net_head} m")));
    }
    let n11 = characteristic.unit_speed(speed_rad_s, net_head);
    let (_, t11) = characteristic.interpolate(n11, opening.max(0.0))?;
    let d = characteristic.diameter;
    let turbine = TurbinePoint {
        discharge: if closed { 0.0 } else { q2 },
        net_head,
        torque: t11 * d * d * d * net_head,
        n11,
    };

    let rates = HydraulicState {
        headrace_flow: (network.upper.level - z1 - network.headrace.head_loss(q1))
            / network.headrace.inertance(),
        upper_surge_level: (q1 - q2) / network.upper_surge.section_area,
        penstock_flow: d_q2,
        lower_surge_level: (q2 - q3) / network.lower_surge.section_area,
        tailrace_flow: (z2 - network.lower.level - network.tailrace.head_loss(q3))
            / network.tailrace.inertance(),
    };
    Ok(HydraulicRates {
        state: rates,
        turbine,
    })
}

#[cfg(test)]
mod tests;
