//! One-group point kinetics and the delayed measurement channel.
//!
//! ```text
//! dP/dt = (ρ(t) - β)/l · P + λ C
//! dC/dt = β/l · P - λ C
//! ```
//!
//! Power is normalised to `P(0) = 1` and the precursors start at their
//! equilibrium `C(0) = β/(lλ)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReactorParams {
    /// Delayed neutron fraction β.
    pub beta: f64,
    /// Precursor decay constant λ, 1/s.
    pub lambda: f64,
    /// Neutron generation time l, s.
    pub gen_time: f64,
}

impl Default for ReactorParams {
    fn default() -> Self {
        ReactorParams { beta: 0.0065, lambda: 0.08, gen_time: 1e-4 }
    }
}

impl ReactorParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::InvalidParams("beta must lie in (0, 1)"));
        }
        if !(self.lambda > 0.0 && self.gen_time > 0.0) {
            return Err(Error::InvalidParams("lambda and gen_time must be positive"));
        }
        Ok(())
    }

    /// Precursor concentration in equilibrium with unit power.
    pub fn equilibrium_precursors(&self) -> f64 {
        self.beta / (self.gen_time * self.lambda)
    }

    /// Largest step accepted by [`simulate`].
    pub fn max_step(&self) -> f64 {
        10.0 * self.gen_time
    }

    /// Prompt-jump approximation `β / (β - ρ)` of the power right after a
    /// step from zero to `rho`.
    pub fn prompt_jump(&self, rho: f64) -> f64 {
        self.beta / (self.beta - rho)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReactorState {
    /// Normalised power.
    pub p: f64,
    /// Precursor concentration.
    pub c: f64,
    /// Time, s.
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProgramKind {
    /// `rho0` before `t_event`, `rho1` from then on.
    Step,
    /// Linear from `rho0` at `t = 0` to `rho1` at `t_event`, then held.
    Ramp,
    /// `rho0` throughout.
    Constant,
}

/// Reactivity as a function of time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReactivityProgram {
    pub kind: ProgramKind,
    pub rho0: f64,
    pub rho1: f64,
    pub t_event: f64,
}

impl ReactivityProgram {
    pub fn constant(rho: f64) -> Self {
        ReactivityProgram { kind: ProgramKind::Constant, rho0: rho, rho1: rho, t_event: 0.0 }
    }

    /// Step from zero to `rho` at `t = 0`.
    pub fn step(rho: f64) -> Self {
        ReactivityProgram { kind: ProgramKind::Step, rho0: 0.0, rho1: rho, t_event: 0.0 }
    }

    pub fn rho(&self, t: f64) -> f64 {
        match self.kind {
            ProgramKind::Constant => self.rho0,
            ProgramKind::Step => {
                if t < self.t_event {
                    self.rho0
                } else {
                    self.rho1
                }
            }
            ProgramKind::Ramp => {
                if t >= self.t_event {
                    self.rho1
                } else {
                    self.rho0 + (self.rho1 - self.rho0) * t / self.t_event
                }
            }
        }
    }

    /// True when the program ever reaches `|ρ| ≥ β`, where the prompt
    /// neutrons alone sustain the chain reaction.
    pub fn is_super_prompt_critical(&self, params: &ReactorParams) -> bool {
        let peak = match self.kind {
            ProgramKind::Constant => self.rho0.abs(),
            _ => self.rho0.abs().max(self.rho1.abs()),
        };
        peak >= params.beta
    }
}

fn derivatives(params: &ReactorParams, rho: f64, p: f64, c: f64) -> (f64, f64) {
    let l = params.gen_time;
    let dp = (rho - params.beta) / l * p + params.lambda * c;
    let dc = params.beta / l * p - params.lambda * c;
    (dp, dc)
}

/// Fixed-step RK4 integration from equilibrium, returning the states at
/// `t = 0, dt, 2dt, …` up to `t_end` inclusive.
pub fn simulate(
    params: &ReactorParams,
    program: &ReactivityProgram,
    t_end: f64,
    dt: f64,
) -> Result<Vec<ReactorState>> {
    params.validate()?;
    if !(t_end > 0.0 && t_end.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParams("t_end and dt must be positive"));
    }
    if dt > params.max_step() {
        return Err(Error::StepTooLarge { dt, limit: params.max_step() });
    }
    let steps = libm::ceil(t_end / dt - 1e-9) as usize;
    let mut states = Vec::with_capacity(steps + 1);
    let (mut p, mut c) = (1.0, params.equilibrium_precursors());
    states.push(ReactorState { p, c, t: 0.0 });
    for i in 0..steps {
        let t = i as f64 * dt;
        let rho_start = program.rho(t);
        let rho_mid = program.rho(t + 0.5 * dt);
        let rho_end = program.rho(t + dt);
        let (k1p, k1c) = derivatives(params, rho_start, p, c);
        let (k2p, k2c) = derivatives(params, rho_mid, p + 0.5 * dt * k1p, c + 0.5 * dt * k1c);
        let (k3p, k3c) = derivatives(params, rho_mid, p + 0.5 * dt * k2p, c + 0.5 * dt * k2c);
        let (k4p, k4c) = derivatives(params, rho_end, p + dt * k3p, c + dt * k3c);
        p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        c += dt / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
        let t_next = (i + 1) as f64 * dt;
        if !(p > 0.0 && c > 0.0) {
            return Err(Error::NonPositiveState { t: t_next });
        }
        states.push(ReactorState { p, c, t: t_next });
    }
    Ok(states)
}

/// Power at time `t` by linear interpolation between integrator states.
/// Times before the first state read the first state.
pub fn power_at(states: &[ReactorState], t: f64) -> f64 {
    if states.len() == 1 || t <= states[0].t {
        return states[0].p;
    }
    let dt = states[1].t - states[0].t;
    let pos = (t - states[0].t) / dt;
    let nearest = libm::round(pos);
    // Grid-aligned reads return the state itself.
    if (pos - nearest).abs() < 1e-9 {
        let i = (nearest as usize).min(states.len() - 1);
        return states[i].p;
    }
    let i = libm::floor(pos) as usize;
    if i + 1 >= states.len() {
        return states[states.len() - 1].p;
    }
    let frac = pos - i as f64;
    states[i].p + frac * (states[i + 1].p - states[i].p)
}

/// Sampling and transport of the power signal.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelConfig {
    /// Measurement interval, s.
    pub tick: f64,
    /// Per-tick delay, s.
    pub delays: TimeSeries,
}

impl ChannelConfig {
    /// Number of ticks `floor(t_end / tick) + 1` covering `[0, t_end]`.
    pub fn tick_count(&self, t_end: f64) -> usize {
        tick_count(t_end, self.tick)
    }
}

fn tick_count(t_end: f64, tick: f64) -> usize {
    libm::floor(t_end / tick + 1e-9) as usize + 1
}

/// Stale-sample channel: tick `k` delivers `P(max(0, k·tick - τ_k))`.
pub fn measure_through_channel(states: &[ReactorState], channel: &ChannelConfig) -> Result<TimeSeries> {
    if states.is_empty() {
        return Err(Error::EmptySeries);
    }
    if !(channel.tick > 0.0) {
        return Err(Error::InvalidParams("channel tick must be positive"));
    }
    let delays = channel.delays.values();
    if delays.iter().any(|&d| d < 0.0) {
        return Err(Error::InvalidParams("channel delays must be non-negative"));
    }
    let t_end = states[states.len() - 1].t;
    let ticks = channel.tick_count(t_end);
    if delays.len() < ticks {
        return Err(Error::TraceTooShort { needed: ticks, got: delays.len() });
    }
    let out = (0..ticks)
        .map(|k| {
            let t = k as f64 * channel.tick;
            power_at(states, (t - delays[k]).max(0.0))
        })
        .collect();
    TimeSeries::new(out, channel.tick)
}

/// Undelayed power on the tick grid.
pub fn sample_on_ticks(states: &[ReactorState], tick: f64) -> Result<TimeSeries> {
    if states.is_empty() {
        return Err(Error::EmptySeries);
    }
    let ticks = tick_count(states[states.len() - 1].t, tick);
    let zero = TimeSeries::new(alloc::vec![0.0; ticks], tick)?;
    measure_through_channel(states, &ChannelConfig { tick, delays: zero })
}
