use std::f64::consts::PI;
use std::fmt::Write as _;

use super::{integrate_step, Event, GridModel, Scenario, UnitModel};
use crate::control::{
    compose_setpoint, governor_step, speed_setpoint_select, ClipSide, FcrBranch, FfrBranch,
    FfrTransition, GovernorState, SiBranch,
};
use crate::error::{Error, Result};
use crate::hydraulics::{hydraulic_derivatives, steady_state_init, HydraulicState, SpeedSelection};
use crate::machines::{
    grid_equivalent_derivatives, island_balance, islanded_bus_frequency, sync_machine_derivatives,
    vs_unit_derivatives, InfiniteBus, IslandMember, SpeedBand,
};

/// Column order of the result CSV.
pub const CSV_COLUMNS: [&str; 8] = [
    "t_s",
    "f_grid_hz",
    "p_unit_mw",
    "n_rpm",
    "h1_m",
    "q1_m3s",
    "t1_pu",
    "y1_pu",
];

const STATES: usize = 9;
// State layout.
const ANGLE_OR_POWER: usize = 5;
const UNIT_SPEED: usize = 6;
const GRID_SPEED: usize = 7;
const GOVERNOR: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub time_s: f64,
    pub kind: String,
    pub detail: String,
}

/// Uniformly sampled output of one run, one sample per integration step.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimulationResult {
    pub name: String,
    pub dt_s: f64,
    pub output_interval_s: f64,
    pub t_s: Vec<f64>,
    pub f_grid_hz: Vec<f64>,
    pub p_unit_mw: Vec<f64>,
    pub n_rpm: Vec<f64>,
    pub h1_m: Vec<f64>,
    pub q1_m3s: Vec<f64>,
    pub t1_pu: Vec<f64>,
    pub y1_pu: Vec<f64>,
    /// Synthetic-inertia branch output [pu].
    pub si_pu: Vec<f64>,
    /// Converter power setpoint after clipping [pu]; zero for synchronous units.
    pub setpoint_pu: Vec<f64>,
    /// Turbine mechanical power of the unit [MW].
    pub p_mech_mw: Vec<f64>,
    /// Mechanical power of every machine in the run [MW].
    pub p_mech_total_mw: Vec<f64>,
    /// Island load [MW]; zero on an infinite grid.
    pub load_mw: Vec<f64>,
    /// Kinetic energy of every rotor in the run [J].
    pub kinetic_energy_j: Vec<f64>,
    pub events: Vec<EventRecord>,
}

impl SimulationResult {
    pub const AUX_CHANNELS: [&'static str; 6] = [
        "si_pu",
        "setpoint_pu",
        "p_mech_mw",
        "p_mech_total_mw",
        "load_mw",
        "kinetic_energy_j",
    ];

    pub fn channel(&self, name: &str) -> Option<&[f64]> {
        Some(match name {
            "t_s" => &self.t_s,
            "f_grid_hz" => &self.f_grid_hz,
            "p_unit_mw" => &self.p_unit_mw,
            "n_rpm" => &self.n_rpm,
            "h1_m" => &self.h1_m,
            "q1_m3s" => &self.q1_m3s,
            "t1_pu" => &self.t1_pu,
            "y1_pu" => &self.y1_pu,
            "si_pu" => &self.si_pu,
            "setpoint_pu" => &self.setpoint_pu,
            "p_mech_mw" => &self.p_mech_mw,
            "p_mech_total_mw" => &self.p_mech_total_mw,
            "load_mw" => &self.load_mw,
            "kinetic_energy_j" => &self.kinetic_energy_j,
            _ => return None,
        })
    }

    pub fn len(&self) -> usize {
        self.t_s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_s.is_empty()
    }

    /// Index of the first sample at or after `t`.
    pub fn index_at(&self, t: f64) -> usize {
        let k = ((t - self.t_s[0]) / self.dt_s - 1e-6).ceil().max(0.0) as usize;
        k.min(self.len().saturating_sub(1))
    }

    /// Result table at the configured output interval.
    pub fn to_csv(&self) -> String {
        let every = ((self.output_interval_s / self.dt_s).round() as usize).max(1);
        let mut out = CSV_COLUMNS.join(",");
        out.push('\n');
        let cols: Vec<&[f64]> = CSV_COLUMNS
            .iter()
            .map(|c| self.channel(c).unwrap())
            .collect();
        for k in (0..self.len()).step_by(every) {
            for (i, col) in cols.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&format_sig9(col[k]));
            }
            out.push('\n');
        }
        out
    }

    /// Event log, one `time kind detail` line per event.
    pub fn events_text(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            let _ = writeln!(out, "{} {} {}", format_sig9(e.time_s), e.kind, e.detail);
        }
        out
    }
}

/// Fixed-decimal rendering rounded to nine significant digits.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_finite() {
            "0".into()
        } else {
            format!("{v}")
        };
    }
    let rounded: f64 = format!("{v:.8e}").parse().expect("float round trip");
    let exponent = rounded.abs().log10().floor() as i32;
    let decimals = (8 - exponent).max(0) as usize;
    let s = format!("{rounded:.decimals$}");
    if s.starts_with("-") && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Inputs held constant across one integration step.
#[derive(Debug, Clone, Copy)]
struct Held {
    opening: f64,
    setpoint_pu: f64,
    load_w: f64,
}

struct Model<'a> {
    scenario: &'a Scenario,
    bus: InfiniteBus,
    rated_speed: f64,
    base_torque: f64,
    rated_power: f64,
    /// Scheduled mechanical power of the grid equivalent [pu of its rating].
    equivalent_base_pu: f64,
}

/// Instantaneous algebraic outputs at one state.
struct Outputs {
    grid_pu: f64,
    p_unit_pu: f64,
    p_mech_w: f64,
    net_head: f64,
    discharge: f64,
    torque_pu: f64,
}

impl Model<'_> {
    fn grid_pu(&self, t: f64, x: &[f64; STATES]) -> Result<f64> {
        match &self.scenario.grid {
            GridModel::Infinite { .. } => Ok(self.bus.frequency_pu(t)),
            GridModel::Islanded { .. } => islanded_bus_frequency(&[
                IslandMember::Unit,
                IslandMember::Equivalent {
                    speed_pu: x[GRID_SPEED],
                },
            ]),
        }
    }

    fn derivatives(
        &self,
        t: f64,
        x: &[f64; STATES],
        held: &Held,
    ) -> Result<([f64; STATES], Outputs)> {
        let speed_pu = x[UNIT_SPEED];
        if !(0.5..=1.5).contains(&speed_pu) {
            return Err(Error::IntegrationBlowup {
                time_s: t,
                detail: format!("unit speed {speed_pu} pu left [0.5, 1.5]"),
            });
        }
        let plant = &self.scenario.plant;
        let hyd = HydraulicState::from_slice(&x[..HydraulicState::LEN]);
        let rates = hydraulic_derivatives(
            &hyd,
            held.opening,
            speed_pu * self.rated_speed,
            &plant.network,
            &plant.characteristic,
        )
        .map_err(|e| Error::IntegrationBlowup {
            time_s: t,
            detail: e.to_string(),
        })?;
        let torque_pu = rates.turbine.torque / self.base_torque;
        let grid_pu = self.grid_pu(t, x)?;

        let mut d = [0.0; STATES];
        d[..HydraulicState::LEN].copy_from_slice(&rates.state.to_array());
        let p_unit_pu = match &self.scenario.unit {
            UnitModel::Synchronous(m) => {
                let (dd, dw) =
                    sync_machine_derivatives(m, x[ANGLE_OR_POWER], speed_pu, grid_pu, torque_pu);
                d[ANGLE_OR_POWER] = dd;
                d[UNIT_SPEED] = dw;
                m.electrical_power(x[ANGLE_OR_POWER], speed_pu, grid_pu)
            }
            UnitModel::VariableSpeed(u) => {
                let (dw, dp) = vs_unit_derivatives(
                    u,
                    speed_pu,
                    x[ANGLE_OR_POWER],
                    held.setpoint_pu,
                    torque_pu,
                );
                d[UNIT_SPEED] = dw;
                d[ANGLE_OR_POWER] = dp;
                x[ANGLE_OR_POWER]
            }
        };
        if let GridModel::Islanded { equivalent, .. } = &self.scenario.grid {
            let pe = island_balance(equivalent, held.load_w, p_unit_pu * self.rated_power);
            let (dw, dg) = grid_equivalent_derivatives(
                equivalent,
                x[GRID_SPEED],
                x[GOVERNOR],
                self.equivalent_base_pu,
                pe,
            );
            d[GRID_SPEED] = dw;
            d[GOVERNOR] = dg;
        }
        let outputs = Outputs {
            grid_pu,
            p_unit_pu,
            p_mech_w: rates.turbine.torque * speed_pu * self.rated_speed,
            net_head: rates.turbine.net_head,
            discharge: rates.turbine.discharge,
            torque_pu,
        };
        Ok((d, outputs))
    }
}

/// Runs one scenario from steady state to `duration_s`.
pub fn run_scenario(scenario: &Scenario) -> Result<SimulationResult> {
    scenario.validate()?;
    let rating = *scenario.unit.rating();
    let nominal_hz = scenario.grid.nominal_hz();
    let target_w = scenario.initial_power_mw * 1e6;
    let plant = &scenario.plant;

    let (speed_sel, vs) = match &scenario.unit {
        UnitModel::Synchronous(_) => (SpeedSelection::Fixed(rating.rated_speed), None),
        UnitModel::VariableSpeed(u) => (
            SpeedSelection::Policy {
                policy: scenario.speed_policy,
                rated_power: rating.rated_power,
            },
            Some(u),
        ),
    };
    let steady = steady_state_init(
        target_w,
        plant.head_gross_m,
        &plant.network,
        &plant.characteristic,
        &speed_sel,
        &plant.envelope,
    )?;
    let mut working = scenario.clone();
    working.plant.network = steady.network.clone();

    let p0_pu = steady.mechanical_power / rating.rated_power;
    let mut x = [0.0; STATES];
    x[..HydraulicState::LEN].copy_from_slice(&steady.state.to_array());
    x[UNIT_SPEED] = steady.speed_rad_s / rating.rated_speed;
    x[ANGLE_OR_POWER] = match &scenario.unit {
        UnitModel::Synchronous(m) => m.equilibrium_angle(p0_pu)?,
        UnitModel::VariableSpeed(_) => p0_pu,
    };

    let (mut load_w, equivalent_base_pu) = match &scenario.grid {
        GridModel::Islanded {
            equivalent,
            initial_load_mw,
            ..
        } => {
            x[GRID_SPEED] = 1.0;
            let load = initial_load_mw * 1e6;
            (
                load,
                island_balance(equivalent, load, steady.mechanical_power),
            )
        }
        GridModel::Infinite { .. } => (0.0, 0.0),
    };

    let model = Model {
        scenario: &working,
        bus: InfiniteBus {
            nominal_hz,
            ramps: scenario.frequency_ramps(),
        },
        rated_speed: rating.rated_speed,
        base_torque: rating.base_torque(),
        rated_power: rating.rated_power,
        equivalent_base_pu,
    };

    let dt = scenario.dt_s;
    let steps = (scenario.duration_s / dt).round() as usize;
    let mut result = SimulationResult {
        name: scenario.name.clone(),
        dt_s: dt,
        output_interval_s: scenario.output_interval_s,
        ..SimulationResult::default()
    };
    for v in [
        &mut result.t_s,
        &mut result.f_grid_hz,
        &mut result.p_unit_mw,
        &mut result.n_rpm,
        &mut result.h1_m,
        &mut result.q1_m3s,
        &mut result.t1_pu,
        &mut result.y1_pu,
        &mut result.si_pu,
        &mut result.setpoint_pu,
        &mut result.p_mech_mw,
        &mut result.p_mech_total_mw,
        &mut result.load_mw,
        &mut result.kinetic_energy_j,
    ] {
        v.reserve_exact(steps + 1);
    }

    let ctrl = scenario.controller;
    let mut p_o = ctrl.p_o_pu.unwrap_or(p0_pu);
    let mut si = SiBranch::new();
    let mut fcr = FcrBranch::new();
    let mut ffr = FfrBranch::new();
    let mut governor = GovernorState::new(steady.opening);
    let mut speed_ref_rpm = steady.speed_rad_s * 60.0 / (2.0 * PI);
    let mut clipped: Option<ClipSide> = None;
    let mut band = vs.map(|u| u.speed_band(speed_ref_rpm));
    let mut next_event = 0;

    for k in 0..=steps {
        let t = k as f64 * dt;

        while next_event < scenario.events.len()
            && scenario.events[next_event].time_s() <= t + 1e-9 * dt
        {
            let e = scenario.events[next_event];
            next_event += 1;
            let detail = match e {
                Event::FrequencyRamp {
                    rocof_hz_per_s,
                    duration_s,
                    ..
                } => (
                    "frequency_ramp",
                    format!("rocof_hz_per_s={rocof_hz_per_s} duration_s={duration_s}"),
                ),
                Event::LoadStep { delta_mw, .. } => {
                    load_w += delta_mw * 1e6;
                    (
                        "load_step",
                        format!("delta_mw={delta_mw} load_mw={}", load_w / 1e6),
                    )
                }
                Event::Setpoint { p_o_pu, .. } => {
                    p_o = p_o_pu;
                    if p_o > 0.0 {
                        speed_ref_rpm = speed_setpoint_select(p_o, &scenario.speed_policy)?;
                    }
                    (
                        "setpoint",
                        format!("p_o_pu={p_o_pu} speed_ref_rpm={speed_ref_rpm}"),
                    )
                }
            };
            result.events.push(EventRecord {
                time_s: t,
                kind: detail.0.into(),
                detail: detail.1,
            });
        }

        let grid_pu = model.grid_pu(t, &x)?;
        let speed_pu = x[UNIT_SPEED];
        let mut si_out = 0.0;
        let mut setpoint = 0.0;
        if let Some(u) = vs {
            if ctrl.si_enabled {
                si_out = si.step(grid_pu, dt, ctrl.kd_s, ctrl.tau_d_s);
            }
            let fcr_out = if ctrl.fcr_enabled {
                fcr.step(grid_pu, dt, ctrl.bs_pu, ctrl.tau_p_s)
            } else {
                0.0
            };
            let ffr_out = if ctrl.ffr.enabled {
                let (out, transition) = ffr.step(grid_pu * nominal_hz, t, &ctrl.ffr);
                match transition {
                    FfrTransition::Activated => result.events.push(EventRecord {
                        time_s: t,
                        kind: "ffr_activated".into(),
                        detail: format!("f_hz={}", format_sig9(grid_pu * nominal_hz)),
                    }),
                    FfrTransition::Expired => result.events.push(EventRecord {
                        time_s: t,
                        kind: "ffr_expired".into(),
                        detail: String::new(),
                    }),
                    FfrTransition::None => {}
                }
                out
            } else {
                0.0
            };
            let sp = compose_setpoint(p_o, si_out, fcr_out, ffr_out, u.power_limits_pu);
            if sp.clipped != clipped {
                let detail = match sp.clipped {
                    Some(ClipSide::Upper) => format!("upper limit {} pu", u.power_limits_pu.1),
                    Some(ClipSide::Lower) => format!("lower limit {} pu", u.power_limits_pu.0),
                    None => "released".to_string(),
                };
                result.events.push(EventRecord {
                    time_s: t,
                    kind: "setpoint_clip".into(),
                    detail,
                });
                clipped = sp.clipped;
            }
            setpoint = sp.value;

            let rpm = speed_pu * rating.rated_speed_rpm();
            let now = u.speed_band(rpm);
            if Some(now) != band {
                result.events.push(EventRecord {
                    time_s: t,
                    kind: "speed_band".into(),
                    detail: format!(
                        "{} -> {} at {} rpm",
                        band.map_or("none", SpeedBand::as_str),
                        now.as_str(),
                        format_sig9(rpm)
                    ),
                });
                band = Some(now);
            }
            if scenario.governor.enabled {
                let error = (speed_ref_rpm - rpm) / rating.rated_speed_rpm();
                governor_step(error, &mut governor, dt, &scenario.governor);
            }
        }
        let held = Held {
            opening: governor.opening,
            setpoint_pu: setpoint,
            load_w,
        };

        let (_, out) = model.derivatives(t, &x, &held)?;
        let mut p_total = out.p_mech_w;
        let mut ke = rating.kinetic_energy(speed_pu);
        if let GridModel::Islanded { equivalent, .. } = &scenario.grid {
            p_total += (equivalent_base_pu + x[GOVERNOR]) * equivalent.rating.rated_power;
            ke += equivalent.rating.kinetic_energy(x[GRID_SPEED]);
        }
        result.t_s.push(t);
        result.f_grid_hz.push(out.grid_pu * nominal_hz);
        result
            .p_unit_mw
            .push(out.p_unit_pu * rating.rated_power / 1e6);
        result.n_rpm.push(speed_pu * rating.rated_speed_rpm());
        result.h1_m.push(out.net_head);
        result.q1_m3s.push(out.discharge);
        result.t1_pu.push(out.torque_pu);
        result.y1_pu.push(held.opening);
        result.si_pu.push(si_out);
        result.setpoint_pu.push(setpoint);
        result.p_mech_mw.push(out.p_mech_w / 1e6);
        result.p_mech_total_mw.push(p_total / 1e6);
        result.load_mw.push(load_w / 1e6);
        result.kinetic_energy_j.push(ke);

        if k == steps {
            break;
        }
        x = integrate_step(
            |tt, xx| model.derivatives(tt, xx, &held).map(|(d, _)| d),
            t,
            &x,
            dt,
        )?;
    }
    Ok(result)
}
