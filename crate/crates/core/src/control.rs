//! Unit controller of the variable-speed machine.
//!
//! The converter follows a power setpoint built from the base setpoint P_o
//! plus three frequency-driven branches (FCR droop, synthetic inertia, FFR).
//! The speed governor holds rotor speed through the guide vanes.
//! All branch updates are discrete and applied once per integration step.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FfrConfig {
    pub enabled: bool,
    /// Activation threshold [Hz].
    pub threshold_hz: f64,
    /// Power step while active [pu].
    pub step_pu: f64,
    /// Support duration [s].
    pub duration_s: f64,
}

impl Default for FfrConfig {
    fn default() -> Self {
        FfrConfig {
            enabled: false,
            threshold_hz: 49.8,
            step_pu: 0.1,
            duration_s: 5.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerConfig {
    pub si_enabled: bool,
    /// SI gain K_d [s].
    pub kd_s: f64,
    /// SI filter time constant τ_d [s].
    pub tau_d_s: f64,
    pub fcr_enabled: bool,
    /// Permanent droop B_s [pu].
    pub bs_pu: f64,
    /// FCR time constant τ_p [s].
    pub tau_p_s: f64,
    pub ffr: FfrConfig,
    /// Base power setpoint P_o [pu]; `None` means the initial operating point.
    pub p_o_pu: Option<f64>,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        ControllerConfig {
            si_enabled: true,
            kd_s: 8.0,
            tau_d_s: 0.1,
            fcr_enabled: false,
            bs_pu: 0.04,
            tau_p_s: 2.0,
            ffr: FfrConfig::default(),
            p_o_pu: None,
        }
    }
}

impl ControllerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau_d_s > 0.0) {
            return Err(Error::field("controller.tau_d_s", "must be > 0"));
        }
        if !(self.tau_p_s > 0.0) {
            return Err(Error::field("controller.tau_p_s", "must be > 0"));
        }
        if !(self.bs_pu > 0.0) {
            return Err(Error::field("controller.bs_pu", "must be > 0"));
        }
        if !(self.kd_s >= 0.0) {
            return Err(Error::field("controller.kd_s", "must be >= 0"));
        }
        if !(self.ffr.duration_s > 0.0) {
            return Err(Error::field("controller.ffr_duration_s", "must be > 0"));
        }
        if !self.ffr.threshold_hz.is_finite() || !self.ffr.step_pu.is_finite() {
            return Err(Error::field(
                "controller.ffr_threshold_hz",
                "must be finite",
            ));
        }
        Ok(())
    }
}

/// Filtered derivative K_d·s/(1 + τ_d·s) of the per-unit grid frequency,
/// discretised with the bilinear transform.
#[derive(Debug, Clone, Default)]
pub struct SiBranch {
    previous_input: Option<f64>,
    derivative: f64,
}

impl SiBranch {
    pub fn new() -> Self {
        Self::default()
    }

    /// Filtered dω̄/dt [1/s] after the last update.
    pub fn filtered_derivative(&self) -> f64 {
        self.derivative
    }

    /// Advances by `dt` with the latest frequency sample and returns the
    /// power correction −K_d·(filtered dω̄/dt) [pu].
    pub fn step(&mut self, grid_frequency_pu: f64, dt: f64, kd_s: f64, tau_d_s: f64) -> f64 {
        debug_assert!(dt > 0.0);
        let previous = self.previous_input.replace(grid_frequency_pu);
        if let Some(previous) = previous {
            let num = 2.0 * (grid_frequency_pu - previous) - (dt - 2.0 * tau_d_s) * self.derivative;
            self.derivative = num / (dt + 2.0 * tau_d_s);
        }
        -kd_s * self.derivative
    }
}

/// First-order droop response toward (−1/B_s)·Δf̄, exact for a held input.
#[derive(Debug, Clone, Default)]
pub struct FcrBranch {
    output: f64,
}

impl FcrBranch {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn output(&self) -> f64 {
        self.output
    }

    pub fn step(&mut self, grid_frequency_pu: f64, dt: f64, bs_pu: f64, tau_p_s: f64) -> f64 {
        let target = -(grid_frequency_pu - 1.0) / bs_pu;
        let alpha = 1.0 - (-dt / tau_p_s).exp();
        self.output += alpha * (target - self.output);
        self.output
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FfrPhase {
    Armed,
    Active {
        since: f64,
    },
    /// Support expired while frequency is still below threshold.
    Locked,
}

#[derive(Debug, Clone)]
pub struct FfrBranch {
    phase: FfrPhase,
}

/// What happened during one FFR update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FfrTransition {
    None,
    Activated,
    Expired,
}

impl Default for FfrBranch {
    fn default() -> Self {
        FfrBranch {
            phase: FfrPhase::Armed,
        }
    }
}

impl FfrBranch {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn phase(&self) -> FfrPhase {
        self.phase
    }

    /// Updates with the grid frequency [Hz] at time `t` and returns the
    /// correction [pu] to hold until the next update.
    pub fn step(
        &mut self,
        grid_frequency_hz: f64,
        t: f64,
        cfg: &FfrConfig,
    ) -> (f64, FfrTransition) {
        let below = grid_frequency_hz < cfg.threshold_hz;
        let mut transition = FfrTransition::None;
        // Tolerance so a duration that is a whole number of steps is not cut short
        // by rounding in t.
        let eps = 1e-9 * cfg.duration_s.max(1.0);
        loop {
            match self.phase {
                FfrPhase::Armed => {
                    if below {
                        self.phase = FfrPhase::Active { since: t };
                        transition = FfrTransition::Activated;
                    }
                    break;
                }
                FfrPhase::Active { since } => {
                    if t - since < cfg.duration_s - eps {
                        break;
                    }
                    self.phase = if below {
                        FfrPhase::Locked
                    } else {
                        FfrPhase::Armed
                    };
                    transition = FfrTransition::Expired;
                    break;
                }
                FfrPhase::Locked => {
                    if !below {
                        self.phase = FfrPhase::Armed;
                        continue;
                    }
                    break;
                }
            }
        }
        let out = match self.phase {
            FfrPhase::Active { .. } => cfg.step_pu,
            _ => 0.0,
        };
        (out, transition)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClipSide {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setpoint {
    pub value: f64,
    pub clipped: Option<ClipSide>,
}

/// Sums the branches onto P_o and clips to the unit power limits.
pub fn compose_setpoint(p_o: f64, si: f64, fcr: f64, ffr: f64, limits: (f64, f64)) -> Setpoint {
    let raw = p_o + si + fcr + ffr;
    if raw > limits.1 {
        Setpoint {
            value: limits.1,
            clipped: Some(ClipSide::Upper),
        }
    } else if raw < limits.0 {
        Setpoint {
            value: limits.0,
            clipped: Some(ClipSide::Lower),
        }
    } else {
        Setpoint {
            value: raw,
            clipped: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeedMode {
    /// Best-efficiency speed.
    Optimal,
    /// Middle of the continuous speed range.
    Middle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedPolicy {
    pub mode: SpeedMode,
    pub n_min_rpm: f64,
    pub n_max_rpm: f64,
    pub n_middle_rpm: f64,
    /// Power above which the optimal speed leaves n_min [pu].
    pub optimal_knee_pu: f64,
}

impl Default for SpeedPolicy {
    fn default() -> Self {
        SpeedPolicy {
            mode: SpeedMode::Middle,
            n_min_rpm: 350.0,
            n_max_rpm: 381.0,
            n_middle_rpm: 365.5,
            optimal_knee_pu: 0.98,
        }
    }
}

impl SpeedPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.n_min_rpm < self.n_middle_rpm && self.n_middle_rpm < self.n_max_rpm) {
            return Err(Error::field(
                "speed_policy",
                "requires n_min_rpm < n_middle_rpm < n_max_rpm",
            ));
        }
        if !(self.optimal_knee_pu > 0.0 && self.optimal_knee_pu < 1.0) {
            return Err(Error::field(
                "speed_policy.optimal_knee_pu",
                "must lie in (0, 1)",
            ));
        }
        Ok(())
    }
}

pub const MAX_POLICY_POWER_PU: f64 = 1.05;

/// Speed setpoint [min⁻¹] for a unit delivering `power_pu`.
///
/// Optimal mode sits on n_min up to the knee, then rises linearly to n_max
/// at 1 pu and stays there.
pub fn speed_setpoint_select(power_pu: f64, policy: &SpeedPolicy) -> Result<f64> {
    if !(power_pu > 0.0 && power_pu <= MAX_POLICY_POWER_PU) {
        return Err(Error::domain(format!(
            "power {power_pu} pu outside speed-policy envelope (0, {MAX_POLICY_POWER_PU}]"
        )));
    }
    Ok(match policy.mode {
        SpeedMode::Middle => policy.n_middle_rpm,
        SpeedMode::Optimal => {
            if power_pu <= policy.optimal_knee_pu {
                policy.n_min_rpm
            } else if power_pu >= 1.0 {
                policy.n_max_rpm
            } else {
                let frac = (power_pu - policy.optimal_knee_pu) / (1.0 - policy.optimal_knee_pu);
                policy.n_min_rpm + frac * (policy.n_max_rpm - policy.n_min_rpm)
            }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GovernorConfig {
    pub enabled: bool,
    /// Proportional gain [pu opening / pu speed].
    pub kp: f64,
    /// Integral gain [pu opening / (pu speed · s)].
    pub ki_per_s: f64,
    /// Guide-vane rate limit [pu/s].
    pub rate_limit_pu_per_s: f64,
    pub opening_min: f64,
    pub opening_max: f64,
}

impl Default for GovernorConfig {
    fn default() -> Self {
        GovernorConfig {
            enabled: true,
            kp: 3.0,
            ki_per_s: 1.5,
            rate_limit_pu_per_s: 0.1,
            opening_min: 0.0,
            opening_max: 1.0,
        }
    }
}

impl GovernorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rate_limit_pu_per_s > 0.0) {
            return Err(Error::field("governor.rate_limit_pu_per_s", "must be > 0"));
        }
        if !(self.opening_min >= 0.0
            && self.opening_min < self.opening_max
            && self.opening_max <= 1.0)
        {
            return Err(Error::field(
                "governor",
                "opening limits must satisfy 0 <= opening_min < opening_max <= 1",
            ));
        }
        if !(self.kp >= 0.0 && self.ki_per_s >= 0.0) {
            return Err(Error::field("governor", "gains must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GovernorState {
    pub opening: f64,
    previous_error: Option<f64>,
}

impl GovernorState {
    pub fn new(opening: f64) -> Self {
        GovernorState {
            opening,
            previous_error: None,
        }
    }
}

/// PI speed governor in velocity form: the opening rate is
/// kp·de/dt + ki·e, rate limited, then the position is clamped. Clamping the
/// position is the anti-windup since no separate integrator state exists.
pub fn governor_step(
    speed_error_pu: f64,
    state: &mut GovernorState,
    dt: f64,
    cfg: &GovernorConfig,
) -> f64 {
    debug_assert!(dt > 0.0);
    let de = match state.previous_error {
        Some(prev) => speed_error_pu - prev,
        None => 0.0,
    };
    state.previous_error = Some(speed_error_pu);
    let rate = (cfg.kp * de / dt + cfg.ki_per_s * speed_error_pu)
        .clamp(-cfg.rate_limit_pu_per_s, cfg.rate_limit_pu_per_s);
    state.opening = (state.opening + rate * dt).clamp(cfg.opening_min, cfg.opening_max);
    state.opening
}

/// Which actuator regulates which quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ControlStrategy {
    /// Guide vanes regulate power, converter regulates speed.
    GuideVanePower,
    /// Converter regulates power, guide vanes regulate speed.
    #[default]
    ConverterPower,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn si_constant_frequency_decays() {
        let mut si = SiBranch::new();
        let dt = 1e-3;
        si.step(1.0, dt, 8.0, 0.1);
        // Kick the filter then hold frequency.
        let first = si.step(1.001, dt, 8.0, 0.1);
        assert!(first < 0.0);
        let mut out = first;
        for _ in 0..100 {
            out = si.step(1.001, dt, 8.0, 0.1);
        }
        // One time constant later the output has decayed by ≈ e⁻¹.
        assert_relative_eq!(out / first, (-1.0f64).exp(), max_relative = 1e-3);
        for _ in 0..2000 {
            out = si.step(1.001, dt, 8.0, 0.1);
        }
        assert!(out.abs() < 1e-9 * first.abs());
    }

    fn si_under_ramp(kd: f64, rocof_hz: f64, seconds: f64) -> f64 {
        let dt = 1e-3;
        let mut si = SiBranch::new();
        let n = (seconds / dt).round() as usize;
        let mut out = 0.0;
        for k in 0..=n {
            let f = 1.0 + rocof_hz / 50.0 * k as f64 * dt;
            out = si.step(f, dt, kd, 0.1);
        }
        out
    }

    #[test]
    fn si_ramp_steady_output() {
        let out = si_under_ramp(8.0, 1.0, 2.0);
        assert_relative_eq!(out, -0.16, max_relative = 1e-6);
        assert_relative_eq!(out * 395.0, -63.2, max_relative = 1e-6);
        let half = si_under_ramp(4.0, 1.0, 2.0);
        assert_relative_eq!(half * 2.0, out, max_relative = 1e-12);
    }

    #[test]
    fn si_reaches_95_percent_within_three_time_constants() {
        let dt = 1e-3;
        let mut si = SiBranch::new();
        let target = -8.0 * 2.0 / 50.0;
        let mut reached = None;
        for k in 0..1000 {
            let f = 1.0 + 2.0 / 50.0 * k as f64 * dt;
            let out = si.step(f, dt, 8.0, 0.1);
            if reached.is_none() && out / target >= 0.95 {
                reached = Some(k as f64 * dt);
            }
        }
        let t = reached.unwrap();
        assert!(t <= 0.3 + 2.0 * dt, "reached at {t}");
    }

    #[test]
    fn fcr_examples() {
        let mut fcr = FcrBranch::new();
        assert_eq!(fcr.step(1.0, 1e-3, 0.1, 2.0), 0.0);

        let mut fcr = FcrBranch::new();
        let mut out = 0.0;
        for _ in 0..40_000 {
            out = fcr.step(0.99, 1e-3, 0.10, 2.0);
        }
        assert_relative_eq!(out, 0.10, max_relative = 1e-6);

        let mut fcr = FcrBranch::new();
        let tau: f64 = 2.0;
        let dt = 1e-3;
        let steps = (tau / dt).round() as usize;
        for _ in 0..steps {
            out = fcr.step(0.99, dt, 0.10, tau);
        }
        assert_relative_eq!(out / 0.10, 1.0 - (-1.0f64).exp(), max_relative = 1e-9);
    }

    fn ffr_cfg() -> FfrConfig {
        FfrConfig {
            enabled: true,
            threshold_hz: 49.8,
            step_pu: 0.1,
            duration_s: 1.0,
        }
    }

    fn run_ffr(freq: impl Fn(f64) -> f64, seconds: f64, dt: f64) -> (Vec<f64>, usize) {
        let cfg = ffr_cfg();
        let mut ffr = FfrBranch::new();
        let mut outs = Vec::new();
        let mut activations = 0;
        let n = (seconds / dt).round() as usize;
        for k in 0..n {
            let t = k as f64 * dt;
            let (out, tr) = ffr.step(freq(t), t, &cfg);
            if tr == FfrTransition::Activated {
                activations += 1;
            }
            outs.push(out);
        }
        (outs, activations)
    }

    #[test]
    fn ffr_never_crossing_is_zero() {
        let (outs, n) = run_ffr(|_| 49.9, 5.0, 1e-2);
        assert_eq!(n, 0);
        assert!(outs.iter().all(|&o| o == 0.0));
    }

    #[test]
    fn ffr_window_is_half_open() {
        let dt = 1e-2;
        let (outs, n) = run_ffr(|t| if t >= 1.0 - 1e-12 { 49.5 } else { 50.0 }, 4.0, dt);
        assert_eq!(n, 1);
        for (k, o) in outs.iter().enumerate() {
            let t = k as f64 * dt;
            let expected = if (1.0 - 1e-9..2.0 - 1e-9).contains(&t) {
                0.1
            } else {
                0.0
            };
            assert_eq!(*o, expected, "t = {t}");
        }
        let active = outs.iter().filter(|&&o| o != 0.0).count() as f64 * dt;
        assert!((active - 1.0).abs() <= dt + 1e-12);
    }

    /// Reference behaviour written as an explicit event replay over the
    /// sequence of threshold crossings.
    fn ffr_oracle(crossings: &[(f64, bool)], duration: f64, t: f64) -> bool {
        // crossings: (time, below-after-crossing), starting above threshold.
        let mut armed = true;
        let mut active_since: Option<f64> = None;
        let mut below = false;
        let mut events: Vec<(f64, bool)> = crossings.to_vec();
        events.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut i = 0;
        loop {
            let next_cross = events.get(i).map(|e| e.0).unwrap_or(f64::INFINITY);
            let expiry = active_since.map(|s| s + duration).unwrap_or(f64::INFINITY);
            let next = next_cross.min(expiry);
            if next > t {
                break;
            }
            if expiry <= next_cross {
                active_since = None;
                armed = !below;
            } else {
                below = events[i].1;
                i += 1;
                if below && armed && active_since.is_none() {
                    active_since = Some(next);
                    armed = false;
                } else if !below && active_since.is_none() {
                    armed = true;
                }
            }
        }
        active_since.is_some()
    }

    #[test]
    fn ffr_matches_crossing_enumeration() {
        let dt = 1e-2;
        let duration = ffr_cfg().duration_s;
        // Every sequence of up to four alternating crossings on a 0.3 s grid.
        let slots: Vec<f64> = (1..=12).map(|k| k as f64 * 0.3 + 0.005).collect();
        let mut checked = 0;
        for n in 1..=4usize {
            let mut idx: Vec<usize> = (0..n).collect();
            loop {
                let times: Vec<f64> = idx.iter().map(|&i| slots[i]).collect();
                let crossings: Vec<(f64, bool)> = times
                    .iter()
                    .enumerate()
                    .map(|(j, &t)| (t, j % 2 == 0))
                    .collect();
                let freq = |t: f64| {
                    let flips = times.iter().filter(|&&c| c <= t).count();
                    if flips % 2 == 1 {
                        49.5
                    } else {
                        50.0
                    }
                };
                let (outs, activations) = run_ffr(freq, 6.0, dt);
                let mut oracle_activations = 0;
                let mut prev = false;
                for (k, o) in outs.iter().enumerate() {
                    let t = k as f64 * dt;
                    let expect = ffr_oracle(&crossings, duration, t);
                    assert_eq!(*o != 0.0, expect, "times {times:?} t {t}");
                    if expect && !prev {
                        oracle_activations += 1;
                    }
                    prev = expect;
                }
                assert_eq!(activations, oracle_activations, "times {times:?}");
                checked += 1;
                // next combination
                let mut j = n;
                loop {
                    if j == 0 {
                        break;
                    }
                    j -= 1;
                    if idx[j] < slots.len() - n + j {
                        idx[j] += 1;
                        for l in j + 1..n {
                            idx[l] = idx[l - 1] + 1;
                        }
                        j = usize::MAX;
                        break;
                    }
                }
                if j != usize::MAX {
                    break;
                }
            }
        }
        assert!(checked > 500);
    }

    #[test]
    fn ffr_double_crossing_in_window_fires_once() {
        let (outs, n) = run_ffr(
            |t| {
                if (1.0..1.2).contains(&t) || (1.5..3.0).contains(&t) {
                    49.5
                } else {
                    50.0
                }
            },
            5.0,
            1e-2,
        );
        assert_eq!(n, 1);
        let active = outs.iter().filter(|&&o| o != 0.0).count();
        assert_eq!(active, 100);
    }

    #[test]
    fn compose_examples() {
        let s = compose_setpoint(0.6, 0.0, 0.0, 0.0, (0.0, 1.0));
        assert_eq!(
            s,
            Setpoint {
                value: 0.6,
                clipped: None
            }
        );
        assert_eq!(
            compose_setpoint(0.6, 0.1, 0.0, 0.0, (0.0, 1.0)).value,
            0.6 + 0.1
        );
        assert_eq!(
            compose_setpoint(0.6, 0.0, 0.05, 0.0, (0.0, 1.0)).value,
            0.6 + 0.05
        );
        assert_eq!(
            compose_setpoint(0.6, 0.0, 0.0, 0.2, (0.0, 1.0)).value,
            0.6 + 0.2
        );
        let s = compose_setpoint(0.9, 0.2, 0.0, 0.0, (0.0, 1.0));
        assert_eq!(s.value, 1.0);
        assert_eq!(s.clipped, Some(ClipSide::Upper));
        let s = compose_setpoint(0.1, -0.2, 0.0, 0.0, (0.0, 1.0));
        assert_eq!(s.clipped, Some(ClipSide::Lower));
    }

    #[test]
    fn speed_policy_examples() {
        let optimal = SpeedPolicy {
            mode: SpeedMode::Optimal,
            ..SpeedPolicy::default()
        };
        let middle = SpeedPolicy::default();
        assert_eq!(speed_setpoint_select(0.5, &optimal).unwrap(), 350.0);
        assert_eq!(speed_setpoint_select(0.5, &middle).unwrap(), 365.5);
        let n = speed_setpoint_select(0.99, &optimal).unwrap();
        let oracle = 350.0 + (0.99 - 0.98) / (1.0 - 0.98) * (381.0 - 350.0);
        assert_relative_eq!(n, oracle, max_relative = 1e-12);
        assert!(n > 350.0 && n < 381.0);
        assert_eq!(speed_setpoint_select(1.02, &optimal).unwrap(), 381.0);
        assert!(speed_setpoint_select(0.0, &optimal).is_err());
        assert!(speed_setpoint_select(1.2, &middle).is_err());
    }

    #[test]
    fn governor_examples() {
        let cfg = GovernorConfig::default();
        let mut st = GovernorState::new(0.5);
        for _ in 0..100 {
            governor_step(0.0, &mut st, 1e-3, &cfg);
        }
        assert_eq!(st.opening, 0.5);

        let mut st = GovernorState::new(0.5);
        let mut last = st.opening;
        for _ in 0..1000 {
            let y = governor_step(0.05, &mut st, 1e-3, &cfg);
            assert!((y - last) <= cfg.rate_limit_pu_per_s * 1e-3 + 1e-15);
            assert!(y >= last);
            last = y;
        }
        assert!(last > 0.5);

        let mut st = GovernorState::new(0.99);
        for _ in 0..1000 {
            governor_step(1.0, &mut st, 1e-2, &cfg);
        }
        assert_eq!(st.opening, 1.0);
        // No wind-up: the opening leaves the limit on the first reversed step.
        let y = governor_step(-1.0, &mut st, 1e-2, &cfg);
        assert!(y < 1.0);
    }

    #[test]
    fn config_validation() {
        assert!(ControllerConfig::default().validate().is_ok());
        let bad = ControllerConfig {
            tau_d_s: 0.0,
            ..ControllerConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = ControllerConfig {
            kd_s: -1.0,
            ..ControllerConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(SpeedPolicy {
            n_middle_rpm: 390.0,
            ..SpeedPolicy::default()
        }
        .validate()
        .is_err());
    }
}
