//! Hurst-parameter estimators.
//!
//! Every estimator reduces the series to a statistic evaluated over a
//! ladder of scales, then reads `H` off the slope of a log-log regression.
//! The slope-to-`H` map differs per method:
//!
//! | method   | statistic                              | `H`            |
//! |----------|----------------------------------------|----------------|
//! | R/S      | mean rescaled range per block          | slope          |
//! | Aggvar   | variance of block means                | 1 + slope / 2  |
//! | Absval   | mean absolute centered block mean      | 1 + slope      |
//! | Diffvar  | differences of aggregated variances    | 1 + slope / 2  |
//! | Per      | low-frequency periodogram              | (1 - slope)/2  |
//! | Boxper   | log-boxed periodogram                  | (1 - slope)/2  |
//! | Higuchi  | curve length of the cumulative sum     | 2 + slope      |
//! | Peng     | residual variance of the cumulative sum| slope / 2      |
//!
//! Aggvar, Absval and Higuchi center by the sample mean, which biases them
//! low for strongly persistent series; by default they refit with the
//! expected fGn bias divided out.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::series::{is_constant, TimeSeries};

mod blocks;
mod correction;
mod fit;
mod fractal;
mod spectral;

pub use blocks::{absval_estimate, aggregate, aggvar_estimate, diffvar_estimate, rs_estimate};
pub use fit::{loglog_fit, LogLogFit};
pub use fractal::{higuchi_estimate, peng_estimate};
pub use spectral::{boxper_estimate, periodogram_estimate, BOXPER_BOXES};

/// Estimator identifier, in the row order of the report table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Absval,
    Aggvar,
    Boxper,
    Diffvar,
    Higuchi,
    Peng,
    Per,
    RescaledRange,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Absval,
        Method::Aggvar,
        Method::Boxper,
        Method::Diffvar,
        Method::Higuchi,
        Method::Peng,
        Method::Per,
        Method::RescaledRange,
    ];

    /// Display label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            Method::Absval => "Absval",
            Method::Aggvar => "Aggvar",
            Method::Boxper => "Boxper",
            Method::Diffvar => "Diffvar",
            Method::Higuchi => "Higuchi",
            Method::Peng => "Peng",
            Method::Per => "Per",
            Method::RescaledRange => "R/S",
        }
    }

    /// Lower-case identifier accepted on the command line.
    pub fn id(self) -> &'static str {
        match self {
            Method::Absval => "absval",
            Method::Aggvar => "aggvar",
            Method::Boxper => "boxper",
            Method::Diffvar => "diffvar",
            Method::Higuchi => "higuchi",
            Method::Peng => "peng",
            Method::Per => "per",
            Method::RescaledRange => "rs",
        }
    }

    pub fn estimate(self, series: &TimeSeries, config: &EstimatorConfig) -> Result<HurstEstimate> {
        match self {
            Method::Absval => absval_estimate(series, config),
            Method::Aggvar => aggvar_estimate(series, config),
            Method::Boxper => boxper_estimate(series, config),
            Method::Diffvar => diffvar_estimate(series, config),
            Method::Higuchi => higuchi_estimate(series, config),
            Method::Peng => peng_estimate(series, config),
            Method::Per => periodogram_estimate(series, config),
            Method::RescaledRange => rs_estimate(series, config),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Method::ALL
            .into_iter()
            .find(|m| m.id() == lower || m.label().eq_ignore_ascii_case(s))
            .ok_or(Error::InvalidConfig("unknown estimator"))
    }
}

/// Estimated Hurst parameter with the derived fractional order and fractal
/// dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct HurstEstimate {
    pub h: f64,
    /// `2h - 1`.
    pub alpha: f64,
    /// `2 - h`.
    pub fractal_dim: f64,
    pub method: Method,
    pub fit: LogLogFit,
}

impl HurstEstimate {
    pub fn new(method: Method, h: f64, fit: LogLogFit) -> Self {
        HurstEstimate { h, alpha: 2.0 * h - 1.0, fractal_dim: 2.0 - h, method, fit }
    }

    /// Raised when `h` falls outside `(0, 1.5)`. The value is still reported
    /// as estimated.
    pub fn out_of_range(&self) -> bool {
        !(self.h > 0.0 && self.h < 1.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    /// Smallest block size of the scale ladder.
    pub min_block: usize,
    /// Largest block size as a fraction of the series length.
    pub max_block_fraction: f64,
    /// Number of geometrically spaced scales before deduplication.
    pub num_scales: usize,
    /// Fraction of the Fourier frequencies used by the periodogram fit.
    pub low_freq_fraction: f64,
    /// Remove the finite-sample bias that mean-centering introduces in the
    /// Aggvar, Absval and Higuchi statistics (see the `correction` module).
    pub small_sample_correction: bool,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            min_block: 8,
            max_block_fraction: 0.25,
            num_scales: 20,
            low_freq_fraction: 0.1,
            small_sample_correction: true,
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_block < 4 {
            return Err(Error::InvalidConfig("min_block must be at least 4"));
        }
        if self.num_scales < 3 {
            return Err(Error::InvalidConfig("num_scales must be at least 3"));
        }
        if !(self.max_block_fraction > 0.0 && self.max_block_fraction <= 1.0) {
            return Err(Error::InvalidConfig("max_block_fraction must lie in (0, 1]"));
        }
        if !(self.low_freq_fraction > 0.0 && self.low_freq_fraction <= 1.0) {
            return Err(Error::InvalidConfig("low_freq_fraction must lie in (0, 1]"));
        }
        Ok(())
    }

    /// Block sizes geometrically spaced from `min_block` to
    /// `floor(max_block_fraction · n)`, rounded and deduplicated.
    pub fn scale_ladder(&self, n: usize) -> Vec<usize> {
        let lo = self.min_block;
        let hi = libm::floor(self.max_block_fraction * n as f64) as usize;
        if hi < lo {
            return Vec::new();
        }
        if hi == lo {
            return alloc::vec![lo];
        }
        let ratio = hi as f64 / lo as f64;
        let steps = (self.num_scales - 1) as f64;
        let mut ladder: Vec<usize> = (0..self.num_scales)
            .map(|i| libm::round(lo as f64 * libm::pow(ratio, i as f64 / steps)) as usize)
            .map(|m| m.clamp(lo, hi))
            .collect();
        ladder.dedup();
        ladder
    }
}

/// Shared precondition of the block-based estimators.
pub(crate) fn check_block_input(series: &TimeSeries, config: &EstimatorConfig) -> Result<()> {
    config.validate()?;
    let needed = 4 * config.min_block;
    check_input(series, needed)
}

pub(crate) fn check_input(series: &TimeSeries, needed: usize) -> Result<()> {
    if series.len() < needed {
        return Err(Error::SeriesTooShort { needed, got: series.len() });
    }
    if is_constant(series.values()) {
        return Err(Error::DegenerateSeries);
    }
    Ok(())
}

/// Runs every estimator in table order. Failures stay in place as errors.
pub fn estimate_all(series: &TimeSeries, config: &EstimatorConfig) -> Vec<(Method, Result<HurstEstimate>)> {
    Method::ALL.into_iter().map(|m| (m, m.estimate(series, config))).collect()
}
