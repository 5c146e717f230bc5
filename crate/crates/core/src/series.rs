//! Time-series container and time-domain statistics.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A uniformly sampled, finite, non-empty real sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    dt: f64,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>, dt: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidInterval(dt));
        }
        Ok(TimeSeries { values, dt })
    }

    /// Unit-tick series (`dt = 1`).
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::new(values, 1.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same sampling interval, new values.
    pub(crate) fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(values, self.dt)
    }
}

/// Population moments of a series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    /// Fourth standardized moment; 3 for a Gaussian.
    pub kurtosis_raw: f64,
    /// `kurtosis_raw - 3`.
    pub kurtosis_excess: f64,
    pub n: usize,
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub(crate) fn is_constant(values: &[f64]) -> bool {
    values.iter().all(|&v| v == values[0])
}

/// Population variance (divisor N). Exactly zero for a constant slice.
pub(crate) fn population_variance(values: &[f64]) -> f64 {
    if is_constant(values) {
        return 0.0;
    }
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64
}

/// Mean and population variance.
pub fn mean_variance(series: &TimeSeries) -> Result<(f64, f64)> {
    let x = series.values();
    if x.len() < 2 {
        return Err(Error::TooShort { needed: 2, got: x.len() });
    }
    Ok((mean(x), population_variance(x)))
}

/// Mean, variance, skewness and kurtosis with 1/N normalisation.
pub fn summary_stats(series: &TimeSeries) -> Result<SummaryStats> {
    let (mean, variance) = mean_variance(series)?;
    if variance == 0.0 {
        return Err(Error::DegenerateSeries);
    }
    let x = series.values();
    let n = x.len() as f64;
    let sd = libm::sqrt(variance);
    let (mut m3, mut m4) = (0.0, 0.0);
    for &v in x {
        let z = (v - mean) / sd;
        let z2 = z * z;
        m3 += z2 * z;
        m4 += z2 * z2;
    }
    let kurtosis_raw = m4 / n;
    Ok(SummaryStats {
        mean,
        variance,
        skewness: m3 / n,
        kurtosis_raw,
        kurtosis_excess: kurtosis_raw - 3.0,
        n: x.len(),
    })
}

/// Population variance of every prefix `values[0..=k]`.
///
/// A heavy-tailed trace shows up as a prefix variance that keeps jumping
/// instead of settling.
pub fn running_variance(series: &TimeSeries) -> Result<TimeSeries> {
    let x = series.values();
    if x.len() < 2 {
        return Err(Error::TooShort { needed: 2, got: x.len() });
    }
    // Welford's update.
    let mut out = Vec::with_capacity(x.len());
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (k, &v) in x.iter().enumerate() {
        let count = (k + 1) as f64;
        let delta = v - mean;
        mean += delta / count;
        m2 += delta * (v - mean);
        out.push(if k == 0 { 0.0 } else { (m2 / count).max(0.0) });
    }
    series.with_values(out)
}

/// Biased sample autocovariance `γ̂(k) = (1/N) Σ (x_t - x̄)(x_{t+k} - x̄)`
/// for `k = 0..=max_lag`.
pub fn autocovariance(series: &TimeSeries, max_lag: usize) -> Result<Vec<f64>> {
    let x = series.values();
    let n = x.len();
    if max_lag >= n {
        return Err(Error::LagTooLarge { max_lag, len: n });
    }
    let m = mean(x);
    let centered: Vec<f64> = x.iter().map(|v| v - m).collect();
    Ok((0..=max_lag)
        .map(|k| centered[..n - k].iter().zip(&centered[k..]).map(|(a, b)| a * b).sum::<f64>() / n as f64)
        .collect())
}

/// Biased autocorrelation `ρ(k) = γ̂(k) / γ̂(0)` for `k = 0..=max_lag`.
pub fn autocorrelation(series: &TimeSeries, max_lag: usize) -> Result<Vec<f64>> {
    if max_lag >= series.len() {
        return Err(Error::LagTooLarge { max_lag, len: series.len() });
    }
    if series.len() < 2 || is_constant(series.values()) {
        return Err(Error::DegenerateSeries);
    }
    let acov = autocovariance(series, max_lag)?;
    let var = acov[0];
    let mut rho: Vec<f64> = acov.iter().map(|g| g / var).collect();
    rho[0] = 1.0;
    Ok(rho)
}
