use selfsim_core::reactor::{
    measure_through_channel, power_at, sample_on_ticks, simulate, ChannelConfig, ProgramKind,
    ReactivityProgram, ReactorParams,
};
use selfsim_core::TimeSeries;

const RHO: f64 = 0.0022;

/// Positive root of the one-group inhour equation `ρ = ωl + ωβ/(ω + λ)`,
/// by bisection.
fn inhour_root(p: &ReactorParams, rho: f64) -> f64 {
    let f = |w: f64| w * p.gen_time + w * p.beta / (w + p.lambda) - rho;
    let (mut lo, mut hi) = (0.0, 1.0);
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn prompt_jump_after_step() {
    let p = ReactorParams::default();
    let prog = ReactivityProgram::step(RHO);
    let coarse = simulate(&p, &prog, 0.1, 1e-3).unwrap();
    let fine = simulate(&p, &prog, 0.1, 1e-5).unwrap();
    let jump = p.prompt_jump(RHO);
    assert!((jump - 1.5116).abs() < 1e-4);
    let got = power_at(&coarse, 0.05);
    let reference = power_at(&fine, 0.05);
    assert!((got - jump).abs() / jump < 0.05, "{got} vs {jump}");
    assert!((got - reference).abs() / reference < 1e-6, "{got} vs {reference}");
}

#[test]
fn power_rises_monotonically() {
    let states = simulate(&ReactorParams::default(), &ReactivityProgram::step(RHO), 10.0, 1e-3).unwrap();
    let tail: Vec<f64> = states.iter().filter(|s| s.t >= 0.1).map(|s| s.p).collect();
    assert!(tail.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn fourth_order_convergence() {
    let p = ReactorParams::default();
    let prog = ReactivityProgram::step(RHO);
    // Measured inside the prompt transient; afterwards the error is round-off.
    let end = |dt: f64| simulate(&p, &prog, 0.02, dt).unwrap().last().unwrap().p;
    let reference = end(1e-6);
    let e1 = (end(1e-3) - reference).abs();
    let e2 = (end(5e-4) - reference).abs();
    assert!(e1 / e2 >= 8.0, "error ratio {} ({e1} {e2})", e1 / e2);
}

#[test]
fn asymptotic_period_matches_inhour() {
    let p = ReactorParams::default();
    let states = simulate(&p, &ReactivityProgram::step(RHO), 50.0, 1e-3).unwrap();
    let a = power_at(&states, 49.0);
    let b = power_at(&states, 50.0);
    let omega = (b / a).ln();
    let want = inhour_root(&p, RHO);
    assert!((omega - want).abs() / want < 0.01, "{omega} vs {want}");
}

#[test]
fn zero_reactivity_holds_equilibrium() {
    let p = ReactorParams::default();
    let states = simulate(&p, &ReactivityProgram::constant(0.0), 100.0, 1e-3).unwrap();
    let c0 = p.equilibrium_precursors();
    for s in &states {
        assert!((s.p - 1.0).abs() < 1e-9);
        assert!((s.c - c0).abs() < 1e-9 * c0);
    }
}

#[test]
fn ramp_reaches_target() {
    let prog = ReactivityProgram { kind: ProgramKind::Ramp, rho0: 0.0, rho1: RHO, t_event: 2.0 };
    assert_eq!(prog.rho(0.0), 0.0);
    assert!((prog.rho(1.0) - RHO / 2.0).abs() < 1e-15);
    assert_eq!(prog.rho(3.0), RHO);
    let states = simulate(&ReactorParams::default(), &prog, 3.0, 1e-3).unwrap();
    assert!(states.windows(2).all(|w| w[1].p >= w[0].p));
}

#[test]
fn oversized_step_is_refused() {
    let err = simulate(&ReactorParams::default(), &ReactivityProgram::step(RHO), 1.0, 0.01).unwrap_err();
    assert_eq!(err.name(), "StepTooLarge");
}

#[test]
fn channel_delivers_stale_samples() {
    let states = simulate(&ReactorParams::default(), &ReactivityProgram::step(RHO), 1.0, 1e-3).unwrap();
    let clean = sample_on_ticks(&states, 0.01).unwrap();
    assert_eq!(clean.len(), 101);
    // A constant delay of k ticks shifts the clean trace by k samples.
    let delays = TimeSeries::new(vec![0.03; 101], 0.01).unwrap();
    let late = measure_through_channel(&states, &ChannelConfig { tick: 0.01, delays }).unwrap();
    for k in 0..101usize {
        let want = clean.values()[k.saturating_sub(3)];
        assert!((late.values()[k] - want).abs() < 1e-12, "tick {k}");
    }
    let short = TimeSeries::new(vec![0.0; 50], 0.01).unwrap();
    let err = measure_through_channel(&states, &ChannelConfig { tick: 0.01, delays: short }).unwrap_err();
    assert_eq!(err.name(), "TraceTooShort");
}

#[test]
fn persistent_delays_corrupt_the_rise() {
    use selfsim_core::series::{running_variance, summary_stats};
    use selfsim_core::synthesis::{generate_fgn, DelayModel, FgnSpec};

    let states = simulate(&ReactorParams::default(), &ReactivityProgram::step(RHO), 10.0, 1e-3).unwrap();
    let clean = sample_on_ticks(&states, 0.01).unwrap();
    let noise = generate_fgn(&FgnSpec::new(0.88, clean.len(), 11)).unwrap();
    let (delays, _) = DelayModel { mu: 0.127, sigma_d: 0.03, tau_max: 0.5 }.apply(&noise).unwrap();
    let measured = measure_through_channel(&states, &ChannelConfig { tick: 0.01, delays }).unwrap();
    let err: Vec<f64> = measured.values().iter().zip(clean.values()).map(|(y, c)| y - c).collect();
    let err = TimeSeries::from_values(err).unwrap();
    assert!(summary_stats(&err).unwrap().variance > 0.0);
    // Stale samples lag the prompt jump, so the running variance climbs
    // through the first 0.3 s before the slow rise dilutes it.
    let rv = running_variance(&err).unwrap();
    let window = &rv.values()[..=30];
    let (n, mean_t) = (window.len() as f64, 15.0);
    let mean_v = window.iter().sum::<f64>() / n;
    let slope: f64 = window.iter().enumerate().map(|(t, v)| (t as f64 - mean_t) * (v - mean_v)).sum();
    assert!(slope > 0.0);
    assert!(rv.values()[30] > rv.values()[3]);
    assert!(err.values().iter().all(|&e| e <= 1e-12));
}
