//! Moving-average, Savitzky-Golay and Gaussian-kernel smoothers.
//!
//! All three return one output sample per input sample. Near the ends the
//! moving average drops the offsets that fall outside the series and
//! renormalises, Savitzky-Golay refits its polynomial on a window shifted
//! inside the series, and the kernel smoother needs no special case.
//! Moving average and Savitzky-Golay can instead emit only the fully
//! supported interior (`valid_only`), which has length `n - r + 1`.

use alloc::borrow::Cow;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::polyfit_weights;
use crate::series::TimeSeries;

#[derive(Debug, Clone, PartialEq)]
pub struct MovingAverageConfig {
    /// Odd window length `r`.
    pub window: usize,
    /// `r` non-negative weights summing to one; uniform when `None`.
    pub weights: Option<Vec<f64>>,
    pub valid_only: bool,
}

impl Default for MovingAverageConfig {
    fn default() -> Self {
        MovingAverageConfig { window: 11, weights: None, valid_only: false }
    }
}

impl MovingAverageConfig {
    pub fn uniform(window: usize) -> Self {
        MovingAverageConfig { window, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.window % 2 != 1 {
            return Err(Error::InvalidConfig("moving-average window must be a positive odd integer"));
        }
        if let Some(w) = &self.weights {
            if w.len() != self.window {
                return Err(Error::InvalidConfig(
                    "moving-average weights must have one entry per window slot",
                ));
            }
            if w.iter().any(|&v| !(v >= 0.0 && v.is_finite())) {
                return Err(Error::InvalidConfig("moving-average weights must be non-negative"));
            }
            if (w.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidConfig("moving-average weights must sum to 1"));
            }
        }
        Ok(())
    }

    fn weights(&self) -> Cow<'_, [f64]> {
        match &self.weights {
            Some(w) => Cow::Borrowed(w),
            None => Cow::Owned(alloc::vec![1.0 / self.window as f64; self.window]),
        }
    }
}

/// Centered weighted moving average.
///
/// Sums are taken relative to the center sample so constants pass through
/// unchanged.
/// At the ends, offsets outside the series are dropped and the remaining
/// weights are rescaled to sum to one, so `[1, 2, 3, 4, 5]` with `r = 3`
/// smooths to `[1.5, 2, 3, 4, 4.5]`.
pub fn moving_average(series: &TimeSeries, config: &MovingAverageConfig) -> Result<TimeSeries> {
    config.validate()?;
    let x = series.values();
    let n = x.len();
    let r = config.window;
    if r > n {
        return Err(Error::WindowTooLarge { window: r, len: n });
    }
    let half = r / 2;
    let w = config.weights();
    let range = if config.valid_only { half..n - half } else { 0..n };
    let out = range
        .map(|k| {
            let lo = k.saturating_sub(half);
            let hi = (k + half).min(n - 1);
            let (mut acc, mut norm) = (0.0, 0.0);
            for i in lo..=hi {
                let wi = w[i + half - k];
                acc += wi * (x[i] - x[k]);
                norm += wi;
            }
            x[k] + acc / norm
        })
        .collect();
    series.with_values(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SavitzkyGolayConfig {
    /// Samples to the left of the target point.
    pub n_left: usize,
    /// Samples to the right; zero gives a causal filter.
    pub n_right: usize,
    /// Polynomial degree.
    pub degree: usize,
    pub valid_only: bool,
}

impl Default for SavitzkyGolayConfig {
    fn default() -> Self {
        SavitzkyGolayConfig { n_left: 5, n_right: 5, degree: 3, valid_only: false }
    }
}

impl SavitzkyGolayConfig {
    pub fn window(&self) -> usize {
        self.n_left + self.n_right + 1
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree > self.n_left + self.n_right {
            return Err(Error::InvalidConfig("Savitzky-Golay degree exceeds n_left + n_right"));
        }
        Ok(())
    }
}

/// Convolution weights `c_{-n_L}, …, c_{n_R}` of the least-squares
/// polynomial evaluated at offset zero.
pub fn savgol_coefficients(config: &SavitzkyGolayConfig) -> Result<Vec<f64>> {
    config.validate()?;
    let offsets: Vec<f64> = (0..config.window()).map(|i| i as f64 - config.n_left as f64).collect();
    polyfit_weights(&offsets, config.degree, 0.0)
}

/// Savitzky-Golay smoothing. Points closer than `n_left` (`n_right`) to the
/// start (end) are fitted on the full-length window shifted inside the
/// series, which keeps exact reproduction of degree-`p` polynomials there.
pub fn savgol_smooth(series: &TimeSeries, config: &SavitzkyGolayConfig) -> Result<TimeSeries> {
    let coeffs = savgol_coefficients(config)?;
    let x = series.values();
    let n = x.len();
    let w = config.window();
    if w > n {
        return Err(Error::WindowTooLarge { window: w, len: n });
    }
    let interior = |k: usize| anchored_sum(&coeffs, &x[k - config.n_left..k - config.n_left + w], x[k]);
    if config.valid_only {
        return series.with_values((config.n_left..n - config.n_right).map(interior).collect());
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        if k >= config.n_left && k + config.n_right < n {
            out.push(interior(k));
        } else {
            let lo = k.saturating_sub(config.n_left).min(n - w);
            let offsets: Vec<f64> = (lo..lo + w).map(|i| i as f64 - k as f64).collect();
            let weights = polyfit_weights(&offsets, config.degree, 0.0)?;
            out.push(anchored_sum(&weights, &x[lo..lo + w], x[k]));
        }
    }
    series.with_values(out)
}

/// `Σ c_i x_i` evaluated as `anchor + Σ c_i (x_i - anchor)`, which equals it
/// whenever `Σ c_i = 1` and returns a constant input bit for bit.
fn anchored_sum(coeffs: &[f64], window: &[f64], anchor: f64) -> f64 {
    anchor + coeffs.iter().zip(window).map(|(c, v)| c * (v - anchor)).sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConfig {
    /// Gaussian kernel radius in sample-index units.
    pub bandwidth: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig { bandwidth: 4.0 }
    }
}

/// Beyond this many bandwidths `exp(-t²/2)` underflows to exactly zero, so
/// truncating the sum there changes nothing.
const KERNEL_CUTOFF: f64 = 40.0;

/// Nadaraya-Watson regression on the sample index with a Gaussian kernel.
pub fn kernel_smooth(series: &TimeSeries, config: &KernelConfig) -> Result<TimeSeries> {
    let h = config.bandwidth;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidConfig("kernel bandwidth must be positive"));
    }
    let x = series.values();
    let n = x.len();
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n });
    }
    let reach = libm::ceil(KERNEL_CUTOFF * h).min(n as f64) as usize;
    // Weights depend only on the index distance.
    let kernel: Vec<f64> = (0..=reach)
        .map(|d| {
            let t = d as f64 / h;
            libm::exp(-0.5 * t * t)
        })
        .collect();
    let out = (0..n)
        .map(|k| {
            let lo = k.saturating_sub(reach);
            let hi = (k + reach).min(n - 1);
            let (mut acc, mut norm) = (0.0, 0.0);
            for (i, &v) in x.iter().enumerate().take(hi + 1).skip(lo) {
                let wi = kernel[i.abs_diff(k)];
                acc += wi * (v - x[k]);
                norm += wi;
            }
            x[k] + acc / norm
        })
        .collect();
    series.with_values(out)
}

/// Any of the three smoothers, for code that selects one at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum Smoother {
    MovingAverage(MovingAverageConfig),
    SavitzkyGolay(SavitzkyGolayConfig),
    Kernel(KernelConfig),
}

impl Smoother {
    pub fn apply(&self, series: &TimeSeries) -> Result<TimeSeries> {
        match self {
            Smoother::MovingAverage(c) => moving_average(series, c),
            Smoother::SavitzkyGolay(c) => savgol_smooth(series, c),
            Smoother::Kernel(c) => kernel_smooth(series, c),
        }
    }
}
