//! Command-line front end.
//!
//! Exit status 0 on success, 1 for usage errors (bad flags, missing files),
//! 2 for data and numeric errors. Error messages start with the error name.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use selfsim_core::benchmark::{format_report, BenchmarkPlan, NamedSmoother, Scenario, MAX_CLAMP_FRACTION};
use selfsim_core::hurst::{estimate_all, EstimatorConfig, Method};
use selfsim_core::reactor::{
    measure_through_channel, sample_on_ticks, simulate, ChannelConfig, ProgramKind, ReactivityProgram,
    ReactorParams,
};
use selfsim_core::series::{autocorrelation, running_variance, summary_stats};
use selfsim_core::smoothing::{KernelConfig, MovingAverageConfig, SavitzkyGolayConfig, Smoother};
use selfsim_core::spectral::{periodogram, welch_psd, WelchConfig, Window};
use selfsim_core::synthesis::{generate_fgn, DelayModel, FgnSpec};
use selfsim_core::TimeSeries;

use crate::config::{expand_args, ConfigError};
use crate::io::{self, IoError, Sink};
use crate::parallel::{run_benchmark_parallel, RunError};

#[derive(Debug, Parser)]
#[command(
    name = "selfsim",
    version,
    about = "Self-similarity analysis, fGn synthesis and smoothing of delay traces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean, variance, skewness and kurtosis of a trace.
    Stats(StatsArgs),
    /// Hurst parameter, fractional order and fractal dimension.
    Hurst(HurstArgs),
    /// Fractional Gaussian noise, or a delay trace driven by it.
    Synth(SynthArgs),
    /// Periodogram or Welch power spectral density.
    Psd(PsdArgs),
    /// Moving-average, Savitzky-Golay or Gaussian-kernel smoothing.
    Smooth(SmoothArgs),
    /// Point-kinetics transient seen through a delayed channel.
    Simulate(SimulateArgs),
    /// Smoother MSE against the fractional order of the delay process.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// key=value file; flags on the command line override it.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Trace CSV (`value` or `t,value`).
    pub input: PathBuf,
    /// Write the statistics here instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Write the running variance as a trace CSV.
    #[arg(long, value_name = "FILE")]
    pub running_variance: Option<PathBuf>,
    /// Write the autocorrelation as `lag,acf` rows.
    #[arg(long, value_name = "FILE")]
    pub acf: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    pub max_lag: usize,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct EstimatorArgs {
    #[arg(long, default_value_t = 8)]
    pub min_block: usize,
    #[arg(long, default_value_t = 0.25)]
    pub max_block_fraction: f64,
    #[arg(long, default_value_t = 20)]
    pub num_scales: usize,
    /// Fraction of Fourier frequencies used by the periodogram method.
    #[arg(long, default_value_t = 0.1)]
    pub low_freq_fraction: f64,
    /// Report the raw Aggvar, Absval and Higuchi fits.
    #[arg(long)]
    pub no_correction: bool,
}

impl EstimatorArgs {
    fn to_config(&self) -> EstimatorConfig {
        EstimatorConfig {
            min_block: self.min_block,
            max_block_fraction: self.max_block_fraction,
            num_scales: self.num_scales,
            low_freq_fraction: self.low_freq_fraction,
            small_sample_correction: !self.no_correction,
        }
    }
}

#[derive(Debug, Args)]
pub struct HurstArgs {
    pub input: PathBuf,
    /// `all`, or one of absval, aggvar, boxper, diffvar, higuchi, peng, per, rs.
    #[arg(long, default_value = "all")]
    pub method: String,
    /// Also write `method,h,alpha,fractal_dim,r_squared,error` rows.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Hurst parameter in (0, 1).
    #[arg(long)]
    pub h: f64,
    /// Number of samples.
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Emit delays `clamp(mu + sigma_d·G, 0, tau_max)` instead of the noise.
    #[arg(long, requires_all = ["delay_sigma", "delay_max"])]
    pub delay_mu: Option<f64>,
    #[arg(long, requires = "delay_mu")]
    pub delay_sigma: Option<f64>,
    #[arg(long, requires = "delay_mu")]
    pub delay_max: Option<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PsdMethod {
    Periodogram,
    Welch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    Hann,
    Rectangular,
}

#[derive(Debug, Args)]
pub struct PsdArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = PsdMethod::Welch)]
    pub method: PsdMethod,
    #[arg(long, default_value_t = 256)]
    pub segment_length: usize,
    /// Segment overlap as a fraction in [0, 1).
    #[arg(long, default_value_t = 0.5)]
    pub overlap: f64,
    #[arg(long, value_enum, default_value_t = WindowArg::Hann)]
    pub window: WindowArg,
    /// Frequencies in cycles per sample instead of radians per sample.
    #[arg(long)]
    pub cycles: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SmootherKind {
    Ma,
    Sg,
    Kernel,
}

#[derive(Debug, Args)]
pub struct SmootherArgs {
    /// Moving-average window (odd).
    #[arg(long, default_value_t = 11)]
    pub window: usize,
    /// Moving-average weights, comma separated; uniform when absent.
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,
    #[arg(long, default_value_t = 5)]
    pub n_left: usize,
    #[arg(long, default_value_t = 5)]
    pub n_right: usize,
    /// Savitzky-Golay polynomial degree.
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    /// Kernel bandwidth in samples.
    #[arg(long, default_value_t = 4.0)]
    pub bandwidth: f64,
}

impl SmootherArgs {
    fn build(&self, kind: SmootherKind, valid_only: bool) -> Smoother {
        match kind {
            SmootherKind::Ma => Smoother::MovingAverage(MovingAverageConfig {
                window: self.window,
                weights: self.weights.clone(),
                valid_only,
            }),
            SmootherKind::Sg => Smoother::SavitzkyGolay(SavitzkyGolayConfig {
                n_left: self.n_left,
                n_right: self.n_right,
                degree: self.degree,
                valid_only,
            }),
            SmootherKind::Kernel => Smoother::Kernel(KernelConfig { bandwidth: self.bandwidth }),
        }
    }
}

#[derive(Debug, Args)]
pub struct SmoothArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub method: SmootherKind,
    #[command(flatten)]
    pub params: SmootherArgs,
    /// Emit only fully supported points (ma and sg).
    #[arg(long)]
    pub valid_only: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProgramArg {
    Step,
    Ramp,
    Constant,
}

#[derive(Debug, Args)]
pub struct ReactorArgs {
    #[arg(long, default_value_t = 0.0065)]
    pub beta: f64,
    /// Precursor decay constant, 1/s.
    #[arg(long, default_value_t = 0.08)]
    pub lambda: f64,
    /// Neutron generation time, s.
    #[arg(long, default_value_t = 1e-4)]
    pub gen_time: f64,
    /// Reactivity after the step, at the end of the ramp, or throughout.
    #[arg(long, default_value_t = 0.0022)]
    pub rho: f64,
    /// Horizon, s.
    #[arg(long, default_value_t = 10.0)]
    pub t_end: f64,
    /// Integrator step, s.
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Measurement interval, s.
    #[arg(long, default_value_t = 0.01)]
    pub tick: f64,
    /// Mean delay, s.
    #[arg(long, default_value_t = 0.127)]
    pub delay_mu: f64,
    /// Delay scale, s.
    #[arg(long, default_value_t = 0.03)]
    pub delay_sigma: f64,
    /// Delay bound, s.
    #[arg(long, default_value_t = 0.5)]
    pub delay_max: f64,
}

impl ReactorArgs {
    fn params(&self) -> ReactorParams {
        ReactorParams { beta: self.beta, lambda: self.lambda, gen_time: self.gen_time }
    }

    fn delay(&self) -> DelayModel {
        DelayModel { mu: self.delay_mu, sigma_d: self.delay_sigma, tau_max: self.delay_max }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub reactor: ReactorArgs,
    #[arg(long, value_enum, default_value_t = ProgramArg::Step)]
    pub program: ProgramArg,
    /// Reactivity before the step or at the start of the ramp.
    #[arg(long, default_value_t = 0.0)]
    pub rho0: f64,
    /// Step time or ramp duration, s.
    #[arg(long, default_value_t = 0.0)]
    pub t_event: f64,
    /// Hurst parameter of the delay process.
    #[arg(long, default_value_t = 0.88)]
    pub h: f64,
    #[arg(long, required_unless_present = "delay_trace")]
    pub seed: Option<u64>,
    /// Per-tick delays in seconds from a trace CSV instead of synthesis.
    #[arg(long, value_name = "FILE")]
    pub delay_trace: Option<PathBuf>,
    /// Add a smoothed column.
    #[arg(long, value_enum)]
    pub smooth: Option<SmootherKind>,
    #[command(flatten)]
    pub smoother: SmootherArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[command(flatten)]
    pub reactor: ReactorArgs,
    /// Fractional orders, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")]
    pub alphas: Vec<f64>,
    /// Seeds per order.
    #[arg(long, default_value_t = 20)]
    pub seeds: usize,
    /// Seed of the first trial at each order.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Kernel bandwidths, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,4,8")]
    pub bandwidths: Vec<f64>,
    /// Largest fraction of clamped delays a trial may have.
    #[arg(long, default_value_t = MAX_CLAMP_FRACTION)]
    pub max_clamp_fraction: f64,
    #[arg(long)]
    pub no_clamp_guard: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Per-trial `smoother,alpha,seed,mse` rows.
    #[arg(long, value_name = "FILE")]
    pub results: Option<PathBuf>,
    /// Per-order `smoother,alpha,mean_mse,std_mse` rows.
    #[arg(long, value_name = "FILE")]
    pub aggregate: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{}: {}", .0.name(), .0)]
    Numeric(#[from] selfsim_core::Error),
    #[error("{}: {}", .0.source.name(), .0)]
    Benchmark(selfsim_core::benchmark::TrialError),
    #[error("{0}")]
    Pool(rayon::ThreadPoolBuildError),
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Trial(t) => CliError::Benchmark(t),
            RunError::Pool(p) => CliError::Pool(p),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Pool(_) => 1,
            CliError::Io(IoError::FileNotFound(_) | IoError::Io { .. }) => 1,
            CliError::Io(_) | CliError::Numeric(_) | CliError::Benchmark(_) => 2,
        }
    }
}

pub fn command() -> clap::Command {
    Cli::command().args_override_self(true).mut_subcommands(|s| s.args_override_self(true))
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit status. Errors are reported on standard error.
pub fn run(args: impl IntoIterator<Item = OsString>) -> i32 {
    let cmd = command();
    let args = match expand_args(&cmd, args.into_iter().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let cli = match cmd.try_get_matches_from(args).and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Stats(a) => stats(a),
        Command::Hurst(a) => hurst(a),
        Command::Synth(a) => synth(a),
        Command::Psd(a) => psd(a),
        Command::Smooth(a) => smooth(a),
        Command::Simulate(a) => run_simulation(a),
        Command::Benchmark(a) => benchmark(a),
    }
}

fn stats(a: StatsArgs) -> Result<(), CliError> {
    let trace = io::read_trace(&a.input)?;
    let x = &trace.series;
    let s = summary_stats(x)?;
    let mut out = Sink::open(a.output.as_deref())?;
    out.line(format_args!("n={}", s.n))?;
    out.line(format_args!("mean={}", s.mean))?;
    out.line(format_args!("variance={}", s.variance))?;
    out.line(format_args!("skewness={}", s.skewness))?;
    out.line(format_args!("kurtosis={}", s.kurtosis_raw))?;
    out.line(format_args!("excess_kurtosis={}", s.kurtosis_excess))?;
    out.finish()?;
    if let Some(path) = &a.running_variance {
        let rv = running_variance(x)?;
        let mut sink = Sink::open(Some(path))?;
        io::write_trace(&mut sink, &rv, trace.t0)?;
        sink.finish()?;
    }
    if let Some(path) = &a.acf {
        let rho = autocorrelation(x, a.max_lag)?;
        let mut sink = Sink::open(Some(path))?;
        sink.line("lag,acf")?;
        for (k, r) in rho.iter().enumerate() {
            sink.line(format_args!("{k},{r}"))?;
        }
        sink.finish()?;
    }
    Ok(())
}

fn hurst(a: HurstArgs) -> Result<(), CliError> {
    let config = a.estimator.to_config();
    config.validate()?;
    let methods: Vec<Method> = if a.method.eq_ignore_ascii_case("all") {
        Method::ALL.to_vec()
    } else {
        vec![a.method.parse().map_err(|_| CliError::Usage(format!("UnknownMethod: `{}`", a.method)))?]
    };
    let x = io::read_trace(&a.input)?.series;
    let results: Vec<_> = if methods.len() == Method::ALL.len() {
        estimate_all(&x, &config)
    } else {
        methods.iter().map(|m| (*m, m.estimate(&x, &config))).collect()
    };
    print!("{}", format_report(&results));
    if let Some(path) = &a.csv {
        let mut sink = Sink::open(Some(path))?;
        sink.line("method,h,alpha,fractal_dim,r_squared,error")?;
        for (m, r) in &results {
            match r {
                Ok(e) => sink.line(format_args!(
                    "{},{},{},{},{},",
                    m.id(),
                    e.h,
                    e.alpha,
                    e.fractal_dim,
                    e.fit.r_squared
                ))?,
                Err(err) => sink.line(format_args!("{},,,,,{}", m.id(), err.name()))?,
            }
        }
        sink.finish()?;
    }
    // Partial failures are part of the report; only a total one is an error.
    if results.iter().all(|(_, r)| r.is_err()) {
        if let Some((_, Err(e))) = results.into_iter().next() {
            return Err(e.into());
        }
    }
    Ok(())
}

fn synth(a: SynthArgs) -> Result<(), CliError> {
    let spec = FgnSpec { h: a.h, n: a.n, sigma: a.sigma, seed: a.seed };
    let noise = generate_fgn(&spec)?;
    let series = match (a.delay_mu, a.delay_sigma, a.delay_max) {
        (Some(mu), Some(sigma_d), Some(tau_max)) => {
            if a.sigma != 1.0 {
                return Err(CliError::Usage(
                    "--sigma does not apply to delay traces; use --delay-sigma".into(),
                ));
            }
            DelayModel { mu, sigma_d, tau_max }.apply(&noise)?.0
        }
        _ => noise,
    };
    let mut sink = Sink::open(a.output.as_deref())?;
    io::write_trace(&mut sink, &series, None)?;
    sink.finish()?;
    Ok(())
}

fn psd(a: PsdArgs) -> Result<(), CliError> {
    let x = io::read_trace(&a.input)?.series;
    let spectrum = match a.method {
        PsdMethod::Periodogram => periodogram(&x)?,
        PsdMethod::Welch => {
            let window = match a.window {
                WindowArg::Hann => Window::Hann,
                WindowArg::Rectangular => Window::Rectangular,
            };
            welch_psd(
                &x,
                &WelchConfig { segment_length: a.segment_length, overlap_fraction: a.overlap, window },
            )?
        }
    };
    let mut sink = Sink::open(a.output.as_deref())?;
    io::write_spectrum(&mut sink, &spectrum, a.cycles)?;
    sink.finish()?;
    Ok(())
}

fn smooth(a: SmoothArgs) -> Result<(), CliError> {
    if a.valid_only && a.method == SmootherKind::Kernel {
        return Err(CliError::Usage("--valid-only applies to ma and sg only".into()));
    }
    let trace = io::read_trace(&a.input)?;
    let smoother = a.params.build(a.method, a.valid_only);
    let y = smoother.apply(&trace.series)?;
    let lead = match (&smoother, a.valid_only) {
        (Smoother::MovingAverage(c), true) => c.window / 2,
        (Smoother::SavitzkyGolay(c), true) => c.n_left,
        _ => 0,
    };
    let t0 = trace.t0.map(|t| t + lead as f64 * trace.series.dt());
    let mut sink = Sink::open(a.output.as_deref())?;
    io::write_trace(&mut sink, &y, t0)?;
    sink.finish()?;
    Ok(())
}

fn program(kind: ProgramArg, rho0: f64, rho: f64, t_event: f64) -> ReactivityProgram {
    match kind {
        ProgramArg::Constant => ReactivityProgram::constant(rho),
        ProgramArg::Step => ReactivityProgram { kind: ProgramKind::Step, rho0, rho1: rho, t_event },
        ProgramArg::Ramp => ReactivityProgram { kind: ProgramKind::Ramp, rho0, rho1: rho, t_event },
    }
}

fn run_simulation(a: SimulateArgs) -> Result<(), CliError> {
    let r = &a.reactor;
    if a.program == ProgramArg::Ramp && !(a.t_event > 0.0) {
        return Err(CliError::Usage("a ramp needs --t-event > 0".into()));
    }
    let prog = program(a.program, a.rho0, r.rho, a.t_event);
    let states = simulate(&r.params(), &prog, r.t_end, r.dt)?;
    let clean = sample_on_ticks(&states, r.tick)?;
    let delays = match (&a.delay_trace, a.seed) {
        (Some(path), _) => {
            let d = io::read_trace(path)?.series;
            TimeSeries::new(d.into_values(), r.tick)?
        }
        (None, Some(seed)) => {
            let noise = generate_fgn(&FgnSpec::new(a.h, clean.len(), seed))?;
            let (d, _) = r.delay().apply(&noise)?;
            TimeSeries::new(d.into_values(), r.tick)?
        }
        (None, None) => unreachable!("clap requires --seed without --delay-trace"),
    };
    let measured = measure_through_channel(&states, &ChannelConfig { tick: r.tick, delays })?;
    let smoothed = match a.smooth {
        Some(kind) => Some(a.smoother.build(kind, false).apply(&measured)?),
        None => None,
    };
    let mut sink = Sink::open(a.output.as_deref())?;
    io::write_simulation(
        &mut sink,
        r.tick,
        clean.values(),
        measured.values(),
        smoothed.as_ref().map(|s| s.values()),
    )?;
    sink.finish()?;
    Ok(())
}

fn benchmark(a: BenchmarkArgs) -> Result<(), CliError> {
    let r = &a.reactor;
    let mut smoothers = vec![
        NamedSmoother::identity(),
        NamedSmoother::new("ma", Smoother::MovingAverage(MovingAverageConfig::default())),
        NamedSmoother::new("sg", Smoother::SavitzkyGolay(SavitzkyGolayConfig::default())),
    ];
    smoothers.extend(a.bandwidths.iter().map(|&b| NamedSmoother::kernel(b)));
    let plan = BenchmarkPlan {
        alphas: a.alphas.clone(),
        seeds: a.seeds,
        seed_base: a.seed,
        smoothers,
        scenario: Scenario {
            params: r.params(),
            program: ReactivityProgram::step(r.rho),
            t_end: r.t_end,
            dt: r.dt,
            tick: r.tick,
            delay: r.delay(),
        },
        clamp_guard: if a.no_clamp_guard { None } else { Some(a.max_clamp_fraction) },
    };
    let result = run_benchmark_parallel(&plan, a.threads)?;
    if let Some(path) = &a.results {
        let mut sink = Sink::open(Some(path))?;
        io::write_records(&mut sink, &result.records)?;
        sink.finish()?;
    }
    if let Some(path) = &a.aggregate {
        let mut sink = Sink::open(Some(path))?;
        io::write_aggregate(&mut sink, &result.aggregate)?;
        sink.finish()?;
    }
    let mut out = Sink::open(None)?;
    for f in result.findings() {
        let status = if f.holds { "HOLDS" } else { "FAILS" };
        out.line(format_args!("{status}  {} ({})", f.claim, f.detail))?;
    }
    out.finish()?;
    Ok(())
}
