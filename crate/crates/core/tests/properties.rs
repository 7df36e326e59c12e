mod common;

use std::f64::consts::PI;

use common::scenario;
use hydro_inertia::analytics::{
    inertial_power_instant, kinetic_energy_delta, mean_power_contribution, FrequencyExcursion,
    UnitRating,
};
use hydro_inertia::control::{compose_setpoint, FfrBranch, FfrConfig, SiBranch};
use hydro_inertia::engine::{run_scenario, Event};
use hydro_inertia::hydraulics::{
    hydraulic_derivatives, steady_state_init, HydraulicNetwork, HydraulicState, PlantEnvelope,
    PumpTurbineCharacteristic, SpeedSelection, SyntheticParams, G, RHO,
};
use proptest::prelude::*;

const W50: f64 = 2.0 * PI * 50.0;

fn characteristic() -> PumpTurbineCharacteristic {
    PumpTurbineCharacteristic::synthetic(&SyntheticParams::default())
}

proptest! {
    #[test]
    fn small_excursions_agree_with_the_instantaneous_form(
        tau in 0.5f64..20.0,
        rel in -0.04f64..0.04,
        duration in 0.1f64..5.0,
    ) {
        prop_assume!(rel.abs() > 1e-6);
        let ex = FrequencyExcursion::new(W50, W50 * (1.0 + rel), duration).unwrap();
        // The excursion as represented, not as sampled.
        let rel = (ex.omega_end - ex.omega_start) / ex.omega_start;
        let mean = mean_power_contribution(tau, &ex);
        let instant = inertial_power_instant(tau, rel / duration);
        // Exact relation for a linear excursion; the linearised form is off by r/2.
        prop_assert!((mean - instant * (1.0 + rel / 2.0)).abs() <= 1e-12 * instant.abs());
        prop_assert!((mean - instant).abs() <= 0.02 * instant.abs() + 1e-15);
        if rel >= -0.039 {
            prop_assert!((mean - instant).abs() <= 0.02 * mean.abs());
        }
    }

    #[test]
    fn mean_power_is_linear_in_tau(
        tau in 0.5f64..20.0,
        rel in -0.2f64..0.2,
        duration in 0.1f64..5.0,
    ) {
        let ex = FrequencyExcursion::new(W50, W50 * (1.0 + rel), duration).unwrap();
        let one = mean_power_contribution(tau, &ex);
        let two = mean_power_contribution(2.0 * tau, &ex);
        prop_assert!((two - 2.0 * one).abs() <= 1e-12 * one.abs().max(1e-300));
    }

    #[test]
    fn energy_and_mean_power_forms_are_identical(
        power_mw in 10.0f64..2000.0,
        rpm in 100.0f64..1500.0,
        tau in 0.5f64..20.0,
        rel in -0.2f64..0.2,
        duration in 0.1f64..5.0,
    ) {
        let speed = rpm * 2.0 * PI / 60.0;
        let rating = UnitRating::from_time_constant(power_mw * 1e6, speed, tau, 50.0).unwrap();
        let ex = FrequencyExcursion::new(speed, speed * (1.0 + rel), duration).unwrap();
        let via_energy = kinetic_energy_delta(rating.inertia, &ex) / duration / rating.rated_power;
        let direct = mean_power_contribution(rating.tau_m(), &ex);
        prop_assert!((via_energy - direct).abs() <= 1e-12 * direct.abs().max(1e-12));
    }

    #[test]
    fn reversing_an_excursion_flips_the_energy(
        inertia in 1e3f64..1e8,
        w1 in 100.0f64..400.0,
        w2 in 100.0f64..400.0,
    ) {
        let ex = FrequencyExcursion::new(w1, w2, 1.0).unwrap();
        prop_assert_eq!(
            kinetic_energy_delta(inertia, &ex.reversed()),
            -kinetic_energy_delta(inertia, &ex)
        );
    }

    #[test]
    fn per_unit_round_trip(power_mw in 1.0f64..5000.0, watts in -1e10f64..1e10) {
        let rating = UnitRating::from_time_constant(power_mw * 1e6, W50, 7.9, 50.0).unwrap();
        let back = rating.power_from_pu(rating.power_to_pu(watts));
        prop_assert!((back - watts).abs() <= 1e-12 * watts.abs());
    }

    #[test]
    fn efficiency_never_exceeds_one(n11 in 40.0f64..130.0, y in 0.0f64..1.0) {
        let (q11, t11) = characteristic().interpolate(n11, y).unwrap();
        if q11 > 0.0 && t11 > 0.0 {
            let eta = t11 * n11 * 2.0 * PI / 60.0 / (RHO * G * q11);
            prop_assert!(eta <= 1.0, "eta {} at ({}, {})", eta, n11, y);
        }
    }

    #[test]
    fn discharge_rises_with_opening(n11 in 40.0f64..130.0, y in 0.0f64..0.99, dy in 0.001f64..0.2) {
        let ch = characteristic();
        let y2 = (y + dy).min(1.0);
        let (a, _) = ch.interpolate(n11, y).unwrap();
        let (b, _) = ch.interpolate(n11, y2).unwrap();
        prop_assert!(b > a, "q11({}) = {} !< q11({}) = {}", y, a, y2, b);
    }

    #[test]
    fn junctions_conserve_mass(
        power_mw in 190.0f64..400.0,
        dq in prop::array::uniform3(-0.05f64..0.05),
        dz in prop::array::uniform2(-2.0f64..2.0),
    ) {
        let ch = characteristic();
        let net = HydraulicNetwork::default_network();
        let s = steady_state_init(
            power_mw * 1e6, 431.8, &net, &ch,
            &SpeedSelection::Fixed(375.0 * 2.0 * PI / 60.0), &PlantEnvelope::default(),
        ).unwrap();
        let q = s.state.penstock_flow;
        let x = HydraulicState {
            headrace_flow: q * (1.0 + dq[0]),
            upper_surge_level: s.state.upper_surge_level + dz[0],
            penstock_flow: q * (1.0 + dq[1]),
            lower_surge_level: s.state.lower_surge_level + dz[1],
            tailrace_flow: q * (1.0 + dq[2]),
        };
        let rates = hydraulic_derivatives(&x, s.opening, s.speed_rad_s, &s.network, &ch).unwrap();
        for r in rates.junction_residuals(&x, &s.network) {
            prop_assert!(r.abs() < 1e-9 * q);
        }
    }

    #[test]
    fn si_output_is_linear_in_gain(
        kd in 0.1f64..20.0,
        tau in 0.02f64..0.5,
        trace in prop::collection::vec(0.9f64..1.1, 2..200),
    ) {
        let (mut a, mut b) = (SiBranch::new(), SiBranch::new());
        for f in trace {
            let x = a.step(f, 0.001, kd, tau);
            let y = b.step(f, 0.001, 2.0 * kd, tau);
            prop_assert!((y - 2.0 * x).abs() <= 1e-9 * y.abs());
        }
    }

    #[test]
    fn si_settles_within_three_filter_constants(
        kd in 0.5f64..20.0,
        tau in 0.02f64..0.15,
        rocof_hz in prop::sample::select(vec![-2.0, -1.0, -0.5, 0.5, 1.0, 2.0]),
    ) {
        let dt = 0.001;
        let rocof_pu = rocof_hz / 50.0;
        let target = -kd * rocof_pu;
        let mut si = SiBranch::new();
        si.step(1.0, dt, kd, tau);
        let mut reached = None;
        for k in 1..=600 {
            let t = k as f64 * dt;
            let out = si.step(1.0 + rocof_pu * t, dt, kd, tau);
            if reached.is_none() && out / target >= 0.95 {
                reached = Some(t);
            }
        }
        let t95 = reached.expect("never reached 95 %");
        prop_assert!(t95 <= 3.0 * tau + dt, "t95 {} for tau {}", t95, tau);
        prop_assert!(t95 < 0.5);
    }

    #[test]
    fn ffr_is_all_or_nothing_for_its_duration(
        duration in 0.1f64..3.0,
        step in 0.01f64..0.5,
        dips in prop::collection::vec((0.0f64..8.0, 0.01f64..4.0), 0..4),
    ) {
        let dt = 0.01;
        let cfg = FfrConfig { enabled: true, threshold_hz: 49.8, step_pu: step, duration_s: duration };
        let mut ffr = FfrBranch::new();
        let mut runs = Vec::new();
        let mut active_for = 0usize;
        for k in 0..1200 {
            let t = k as f64 * dt;
            let below = dips.iter().any(|&(s, d)| t >= s && t < s + d);
            let (out, _) = ffr.step(if below { 49.5 } else { 50.0 }, t, &cfg);
            prop_assert!(out == 0.0 || out == step);
            if out == step {
                active_for += 1;
            } else if active_for > 0 {
                runs.push(active_for);
                active_for = 0;
            }
        }
        for n in runs {
            prop_assert!((n as f64 * dt - duration).abs() <= dt + 1e-9, "{} steps for {}", n, duration);
        }
    }

    #[test]
    fn composed_setpoint_respects_limits(
        p_o in -1.0f64..2.0, si in -1.0f64..1.0, fcr in -1.0f64..1.0, ffr in 0.0f64..0.5,
        lo in -0.5f64..0.5, span in 0.1f64..1.5,
    ) {
        let sp = compose_setpoint(p_o, si, fcr, ffr, (lo, lo + span));
        prop_assert!(sp.value >= lo && sp.value <= lo + span);
        prop_assert_eq!(sp.clipped.is_none(), sp.value == p_o + si + fcr + ffr);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn frozen_controls_settle_from_any_small_perturbation(
        power_mw in 200.0f64..395.0,
        dq in prop::array::uniform3(-0.02f64..0.02),
        dz in prop::array::uniform2(-0.5f64..0.5),
    ) {
        let ch = characteristic();
        let net = HydraulicNetwork::default_network();
        let s = steady_state_init(
            power_mw * 1e6, 431.8, &net, &ch,
            &SpeedSelection::Fixed(375.0 * 2.0 * PI / 60.0), &PlantEnvelope::default(),
        ).unwrap();
        let mut x = s.state.to_array();
        x[0] *= 1.0 + dq[0];
        x[1] += dz[0];
        x[2] *= 1.0 + dq[1];
        x[3] += dz[1];
        x[4] *= 1.0 + dq[2];
        let f = |_t: f64, x: &[f64; 5]| {
            hydraulic_derivatives(&HydraulicState::from_slice(x), s.opening, s.speed_rad_s, &s.network, &ch)
                .map(|r| r.state.to_array())
        };
        let dt = 0.2;
        for k in 0..(4000.0 / dt) as usize {
            x = hydro_inertia::engine::integrate_step(f, k as f64 * dt, &x, dt).unwrap();
        }
        let d = f(0.0, &x).unwrap();
        let scale = [s.state.penstock_flow, 1.0, s.state.penstock_flow, 1.0, s.state.penstock_flow];
        for i in 0..5 {
            prop_assert!(d[i].abs() < 1e-5 * scale[i], "rate {} = {}", i, d[i]);
        }
    }

    #[test]
    fn variable_speed_without_gain_ignores_the_grid(
        ramps in prop::collection::vec((-2.0f64..2.0, 0.1f64..1.0), 1..3),
    ) {
        let mut s = scenario("fig12");
        s.controller.kd_s = 0.0;
        s.duration_s = 5.0;
        let mut t = 0.5;
        s.events = ramps
            .iter()
            .map(|&(rocof, d)| {
                let e = Event::FrequencyRamp { time_s: t, rocof_hz_per_s: rocof, duration_s: d };
                t += d + 0.25;
                e
            })
            .collect();
        s.validate().unwrap();
        let r = run_scenario(&s).unwrap();
        let p0 = r.p_unit_mw[0];
        for p in &r.p_unit_mw {
            prop_assert!(((p - p0) / 395.0).abs() < 1e-6);
        }
    }
}
