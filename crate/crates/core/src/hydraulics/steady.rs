use std::f64::consts::PI;

use super::{
    hydraulic_derivatives, HydraulicNetwork, HydraulicState, PumpTurbineCharacteristic,
    TurbinePoint,
};
use crate::control::{speed_setpoint_select, SpeedPolicy};
use crate::error::{Error, Result};

/// How the steady unit speed is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpeedSelection {
    /// Grid-locked speed [rad/s].
    Fixed(f64),
    /// Variable-speed unit following the speed policy; `rated_power` [W]
    /// is the per-unit base for the policy lookup.
    Policy {
        policy: SpeedPolicy,
        rated_power: f64,
    },
}

impl SpeedSelection {
    fn speed_rad_s(&self, target_power: f64) -> Result<f64> {
        match *self {
            SpeedSelection::Fixed(w) => Ok(w),
            SpeedSelection::Policy {
                policy,
                rated_power,
            } => {
                let rpm = speed_setpoint_select(target_power / rated_power, &policy)?;
                Ok(rpm * 2.0 * PI / 60.0)
            }
        }
    }
}

/// Generating range of the plant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantEnvelope {
    pub min_power: f64,
    pub max_power: f64,
    /// Accept a zero target as a closed-vane no-load state.
    pub allow_no_load: bool,
}

impl Default for PlantEnvelope {
    fn default() -> Self {
        PlantEnvelope {
            min_power: 190e6,
            max_power: 400e6,
            allow_no_load: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub state: HydraulicState,
    pub opening: f64,
    pub speed_rad_s: f64,
    pub turbine: TurbinePoint,
    pub mechanical_power: f64,
    /// Network with the upper reservoir at the requested gross head.
    pub network: HydraulicNetwork,
}

impl SteadyState {
    /// Largest state derivative, each scaled to its natural magnitude:
    /// pipe rates by gross head over inertance, level rates by discharge
    /// over tank area.
    pub fn relative_residual(&self, characteristic: &PumpTurbineCharacteristic) -> Result<f64> {
        let rates = hydraulic_derivatives(
            &self.state,
            self.opening,
            self.speed_rad_s,
            &self.network,
            characteristic,
        )?
        .state;
        let net = &self.network;
        let head = net.gross_head();
        let flow = self.state.penstock_flow.abs().max(1.0);
        let scaled = [
            rates.headrace_flow * net.headrace.inertance() / head,
            rates.upper_surge_level * net.upper_surge.section_area / flow,
            rates.penstock_flow * net.penstock.inertance() / head,
            rates.lower_surge_level * net.lower_surge.section_area / flow,
            rates.tailrace_flow * net.tailrace.inertance() / head,
        ];
        Ok(scaled.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
    }
}

/// Steady flow state at fixed opening and speed.
fn equilibrium(
    opening: f64,
    speed: f64,
    network: &HydraulicNetwork,
    characteristic: &PumpTurbineCharacteristic,
) -> Result<(HydraulicState, TurbinePoint)> {
    let gross = network.gross_head();
    let d = characteristic.diameter;
    let losses = network.total_loss_coefficient();
    let flow_at = |head: f64| -> Result<f64> {
        let n11 = characteristic.unit_speed(speed, head);
        let (q11, _) = characteristic.interpolate(n11, opening)?;
        Ok(q11 * d * d * head.sqrt())
    };
    // Net head rises with the flow it passes, so the mismatch is monotone.
    let mut lo = 0.5 * gross;
    let mut hi = gross;
    let mismatch = |h: f64| -> Result<f64> {
        let q = flow_at(h)?;
        Ok(h + losses * q * q - gross)
    };
    if mismatch(lo)? > 0.0 {
        return Err(Error::domain(format!(
            "opening {opening} loses more than half the gross head to friction"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mismatch(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let q = flow_at(lo)?;
    // Recover the head from the flow the same way the dynamic model does,
    // so the penstock residual vanishes to rounding.
    let net_head = characteristic.head_for_discharge(q, speed, opening, lo)?;
    let state = HydraulicState {
        headrace_flow: q,
        upper_surge_level: network.upper.level - network.headrace.head_loss(q),
        penstock_flow: q,
        lower_surge_level: network.lower.level + network.tailrace.head_loss(q),
        tailrace_flow: q,
    };
    let n11 = characteristic.unit_speed(speed, net_head);
    let (_, t11) = characteristic.interpolate(n11, opening)?;
    let turbine = TurbinePoint {
        discharge: q,
        net_head,
        torque: t11 * d * d * d * net_head,
        n11,
    };
    Ok((state, turbine))
}

/// Finds the steady operating point delivering `target_power` [W] of
/// mechanical power at gross head `head_gross` [m].
pub fn steady_state_init(
    target_power: f64,
    head_gross: f64,
    network: &HydraulicNetwork,
    characteristic: &PumpTurbineCharacteristic,
    speed: &SpeedSelection,
    envelope: &PlantEnvelope,
) -> Result<SteadyState> {
    let target_mw = target_power / 1e6;
    let network = network.with_gross_head(head_gross)?;
    if target_power == 0.0 {
        if !envelope.allow_no_load {
            return Err(Error::InfeasibleSetpoint {
                target_mw,
                reason: "zero power requested and no-load start is disabled".into(),
            });
        }
        let speed_rad_s = match *speed {
            SpeedSelection::Fixed(w) => w,
            SpeedSelection::Policy { policy, .. } => policy.n_middle_rpm * 2.0 * PI / 60.0,
        };
        let state = HydraulicState {
            headrace_flow: 0.0,
            upper_surge_level: network.upper.level,
            penstock_flow: 0.0,
            lower_surge_level: network.lower.level,
            tailrace_flow: 0.0,
        };
        let turbine =
            hydraulic_derivatives(&state, 0.0, speed_rad_s, &network, characteristic)?.turbine;
        return Ok(SteadyState {
            state,
            opening: 0.0,
            speed_rad_s,
            mechanical_power: turbine.mechanical_power(speed_rad_s),
            turbine,
            network,
        });
    }
    if !(target_power >= envelope.min_power && target_power <= envelope.max_power) {
        return Err(Error::InfeasibleSetpoint {
            target_mw,
            reason: format!(
                "outside generating range {}–{} MW",
                envelope.min_power / 1e6,
                envelope.max_power / 1e6
            ),
        });
    }
    let speed_rad_s = speed.speed_rad_s(target_power)?;
    let infeasible = |e: Error| Error::InfeasibleSetpoint {
        target_mw,
        reason: e.to_string(),
    };
    let power_at = |y: f64| -> Result<f64> {
        let (_, turbine) = equilibrium(y, speed_rad_s, &network, characteristic)?;
        Ok(turbine.mechanical_power(speed_rad_s))
    };
    let (y_min, y_max) = characteristic.y_bounds();
    let full = power_at(y_max).map_err(infeasible)?;
    if full < target_power {
        return Err(Error::InfeasibleSetpoint {
            target_mw,
            reason: format!("full opening delivers only {:.1} MW", full / 1e6),
        });
    }
    let mut lo = y_min.max(1e-6);
    let mut hi = y_max;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if power_at(mid).map_err(infeasible)? > target_power {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let opening = 0.5 * (lo + hi);
    let (state, turbine) =
        equilibrium(opening, speed_rad_s, &network, characteristic).map_err(infeasible)?;
    Ok(SteadyState {
        state,
        opening,
        speed_rad_s,
        mechanical_power: turbine.mechanical_power(speed_rad_s),
        turbine,
        network,
    })
}
