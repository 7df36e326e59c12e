use super::*;
use crate::control::{SpeedMode, SpeedPolicy};
use approx::assert_relative_eq;

fn plant() -> (HydraulicNetwork, PumpTurbineCharacteristic) {
    (
        HydraulicNetwork::default_network(),
        PumpTurbineCharacteristic::synthetic(&SyntheticParams::default()),
    )
}

fn rated_speed() -> f64 {
    375.0 * 2.0 * PI / 60.0
}

fn init(power: f64) -> SteadyState {
    let (net, ch) = plant();
    steady_state_init(
        power,
        431.8,
        &net,
        &ch,
        &SpeedSelection::Fixed(rated_speed()),
        &PlantEnvelope::default(),
    )
    .unwrap()
}

fn rk4(
    x: &HydraulicState,
    dt: f64,
    f: impl Fn(&HydraulicState) -> HydraulicState,
) -> HydraulicState {
    let add = |a: &HydraulicState, b: &HydraulicState, h: f64| {
        let (a, b) = (a.to_array(), b.to_array());
        let mut out = [0.0; 5];
        for i in 0..5 {
            out[i] = a[i] + h * b[i];
        }
        HydraulicState::from_slice(&out)
    };
    let k1 = f(x);
    let k2 = f(&add(x, &k1, dt / 2.0));
    let k3 = f(&add(x, &k2, dt / 2.0));
    let k4 = f(&add(x, &k3, dt));
    let (x, k1, k2, k3, k4) = (
        x.to_array(),
        k1.to_array(),
        k2.to_array(),
        k3.to_array(),
        k4.to_array(),
    );
    let mut out = [0.0; 5];
    for i in 0..5 {
        out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    HydraulicState::from_slice(&out)
}

#[test]
fn default_geometry_round_trips() {
    let net = HydraulicNetwork::default_network();
    let again = HydraulicNetwork::from_geometry_text(&net.to_geometry_text()).unwrap();
    assert_eq!(net, again);
    assert_relative_eq!(net.gross_head(), 431.8);
}

#[test]
fn broken_topology_is_a_configuration_error() {
    let net = HydraulicNetwork::default_network();
    let mut elements = net.to_elements();
    elements.remove(2);
    let err = HydraulicNetwork::from_elements(&elements).unwrap_err();
    assert!(matches!(err, Error::Configuration(_)), "{err}");
}

#[test]
fn unknown_geometry_field_is_rejected() {
    let text = DEFAULT_GEOMETRY.replace("section_area = 250.0", "section_area = 250.0\ncolour = 1");
    let err = HydraulicNetwork::from_geometry_text(&text).unwrap_err();
    assert!(err.to_string().contains("colour"), "{err}");
}

#[test]
fn closed_vanes_pass_no_flow_and_keep_windage() {
    let (_, ch) = plant();
    let (q, t) = turbine_operating_point(rated_speed(), 0.0, 420.0, &ch).unwrap();
    assert_eq!(q, 0.0);
    assert!(t < 0.0, "no-flow torque is a loss, got {t}");
}

#[test]
fn operating_point_rejects_bad_inputs() {
    let (_, ch) = plant();
    assert!(turbine_operating_point(rated_speed(), 1.2, 420.0, &ch).is_err());
    assert!(turbine_operating_point(rated_speed(), 0.5, 0.0, &ch).is_err());
    let err = turbine_operating_point(rated_speed(), 0.5, 2.0, &ch).unwrap_err();
    assert!(matches!(
        err,
        Error::OutOfEnvelope {
            axis: crate::error::Axis::UnitSpeed,
            ..
        }
    ));
}

#[test]
fn steady_state_is_a_fixed_point() {
    let (_, ch) = plant();
    let s = init(395e6);
    assert!(s.relative_residual(&ch).unwrap() < 1e-9);
    assert_relative_eq!(s.mechanical_power, 395e6, max_relative = 1e-3);
    let rates = hydraulic_derivatives(&s.state, s.opening, s.speed_rad_s, &s.network, &ch).unwrap();
    let q_rated = s.state.penstock_flow;
    for r in rates.junction_residuals(&s.state, &s.network) {
        assert!(r.abs() < 1e-9 * q_rated);
    }
}

#[test]
fn full_load_losses_are_about_two_percent() {
    let s = init(395e6);
    let q = s.state.penstock_flow;
    let loss = s.network.total_loss_coefficient() * q * q;
    let frac = loss / s.network.gross_head();
    assert!((0.015..0.025).contains(&frac), "loss fraction {frac}");
}

#[test]
fn efficiency_never_exceeds_one() {
    let (_, ch) = plant();
    for p in [190e6, 237e6, 300e6, 395e6] {
        let s = init(p);
        let t = &s.turbine;
        assert!(t.mechanical_power(s.speed_rad_s) <= t.hydraulic_power());
    }
    for &n11 in &ch.n11_axis {
        for &y in &ch.y_axis {
            let (q11, t11) = ch.interpolate(n11, y).unwrap();
            if q11 > 0.0 && t11 > 0.0 {
                let eta = t11 * n11 * 2.0 * PI / 60.0 / (RHO * G * q11);
                assert!(eta <= 1.0, "η = {eta} at n11 {n11}, y {y}");
            }
        }
    }
}

#[test]
fn out_of_range_targets_are_infeasible() {
    let (net, ch) = plant();
    let speed = SpeedSelection::Fixed(rated_speed());
    let env = PlantEnvelope::default();
    let err = steady_state_init(500e6, 431.8, &net, &ch, &speed, &env).unwrap_err();
    assert!(matches!(err, Error::InfeasibleSetpoint { .. }), "{err}");
    let err = steady_state_init(0.0, 431.8, &net, &ch, &speed, &env).unwrap_err();
    assert!(matches!(err, Error::InfeasibleSetpoint { .. }), "{err}");
}

#[test]
fn zero_target_gives_no_load_state_when_allowed() {
    let (net, ch) = plant();
    let env = PlantEnvelope {
        allow_no_load: true,
        ..PlantEnvelope::default()
    };
    let s = steady_state_init(
        0.0,
        431.8,
        &net,
        &ch,
        &SpeedSelection::Fixed(rated_speed()),
        &env,
    )
    .unwrap();
    assert_eq!(s.opening, 0.0);
    assert_eq!(s.state.penstock_flow, 0.0);
    assert!(s.relative_residual(&ch).unwrap() < 1e-12);
}

#[test]
fn speed_policy_sets_the_steady_speed() {
    let (net, ch) = plant();
    let speed = SpeedSelection::Policy {
        policy: SpeedPolicy {
            mode: SpeedMode::Middle,
            ..SpeedPolicy::default()
        },
        rated_power: 395e6,
    };
    let s = steady_state_init(237e6, 431.8, &net, &ch, &speed, &PlantEnvelope::default()).unwrap();
    assert_relative_eq!(
        s.speed_rad_s * 60.0 / (2.0 * PI),
        365.5,
        max_relative = 1e-12
    );
    assert!(s.relative_residual(&ch).unwrap() < 1e-9);
}

#[test]
fn closure_fills_the_upper_surge_tank() {
    let (_, ch) = plant();
    let s = init(395e6);
    let mut closed = s.state;
    // An instantaneous closure stops the penstock column.
    closed.penstock_flow = 0.0;
    let rates = hydraulic_derivatives(&closed, 0.0, s.speed_rad_s, &s.network, &ch).unwrap();
    assert!(rates.state.upper_surge_level > 0.0);
}

#[test]
fn closed_vanes_with_moving_column_is_an_error() {
    let (_, ch) = plant();
    let s = init(395e6);
    assert!(hydraulic_derivatives(&s.state, 0.0, s.speed_rad_s, &s.network, &ch).is_err());
}

#[test]
fn surge_oscillation_matches_the_mass_oscillation_period() {
    let (_, ch) = plant();
    let s = init(237e6);
    let expected = s.network.upper_surge_period();
    let mut x = s.state;
    x.upper_surge_level += 0.5;
    let f = |x: &HydraulicState| {
        hydraulic_derivatives(x, s.opening, s.speed_rad_s, &s.network, &ch)
            .unwrap()
            .state
    };
    let dt = 0.05;
    let z0 = s.state.upper_surge_level;
    let mut crossings = Vec::new();
    let mut prev = x.upper_surge_level - z0;
    for k in 1..=(700.0 / dt) as usize {
        x = rk4(&x, dt, f);
        let dev = x.upper_surge_level - z0;
        if prev > 0.0 && dev <= 0.0 {
            crossings.push(k as f64 * dt - dt * dev / (dev - prev));
        }
        prev = dev;
    }
    assert!(crossings.len() >= 3, "{crossings:?}");
    let period = (crossings[2] - crossings[0]) / 2.0;
    assert!(
        (period - expected).abs() < 0.05 * expected,
        "period {period} s, expected {expected} s"
    );
}

#[test]
fn frozen_controls_return_to_steady_state() {
    let (_, ch) = plant();
    let s = init(300e6);
    let mut x = s.state;
    x.headrace_flow *= 1.01;
    x.penstock_flow *= 0.99;
    x.lower_surge_level += 0.2;
    let f = |x: &HydraulicState| {
        hydraulic_derivatives(x, s.opening, s.speed_rad_s, &s.network, &ch)
            .unwrap()
            .state
    };
    for _ in 0..(3000.0 / 0.1) as usize {
        x = rk4(&x, 0.1, f);
    }
    let a = x.to_array();
    let b = s.state.to_array();
    for i in 0..5 {
        assert!(
            (a[i] - b[i]).abs() < 1e-4 * b[i].abs().max(1.0),
            "state {i}: {} vs {}",
            a[i],
            b[i]
        );
    }
}
