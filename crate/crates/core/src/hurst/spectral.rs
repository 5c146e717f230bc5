//! Frequency-domain estimators: `I(ξ) ∝ ξ^{1-2H}` near the origin.

use alloc::vec;
use alloc::vec::Vec;

use super::{check_input, loglog_fit, EstimatorConfig, HurstEstimate, Method};
use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::spectral::periodogram;

const MIN_SPECTRAL_LEN: usize = 64;

/// Number of logarithmic frequency boxes used by [`boxper_estimate`].
pub const BOXPER_BOXES: usize = 60;

fn spectral_h(slope: f64) -> f64 {
    (1.0 - slope) / 2.0
}

/// Log-periodogram regression over the lowest `low_freq_fraction` of the
/// Fourier frequencies.
pub fn periodogram_estimate(series: &TimeSeries, config: &EstimatorConfig) -> Result<HurstEstimate> {
    config.validate()?;
    check_input(series, MIN_SPECTRAL_LEN)?;
    let spec = periodogram(series)?;
    let count = (libm::floor(config.low_freq_fraction * spec.len() as f64) as usize).clamp(3, spec.len());
    let points: Vec<(f64, f64)> = spec.frequencies[..count]
        .iter()
        .zip(&spec.power[..count])
        .filter(|(_, &p)| p > 0.0)
        .map(|(&f, &p)| (f, p))
        .collect();
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let fit = loglog_fit(&points)?;
    Ok(HurstEstimate::new(Method::Per, spectral_h(fit.slope), fit))
}

/// Boxed periodogram: ordinates are averaged inside logarithmically equal
/// frequency boxes spanning every Fourier frequency, so that the dense high
/// frequencies do not dominate the regression. Each box is placed at the
/// geometric mean of its member frequencies; empty boxes are skipped.
pub fn boxper_estimate(series: &TimeSeries, config: &EstimatorConfig) -> Result<HurstEstimate> {
    config.validate()?;
    check_input(series, MIN_SPECTRAL_LEN)?;
    let spec = periodogram(series)?;
    let first = spec.frequencies[0];
    let span = libm::log(spec.frequencies[spec.len() - 1] / first);

    let mut log_freq = vec![0.0; BOXPER_BOXES];
    let mut power = vec![0.0; BOXPER_BOXES];
    let mut count = vec![0usize; BOXPER_BOXES];
    for (&f, &p) in spec.frequencies.iter().zip(&spec.power) {
        let lf = libm::log(f / first);
        let b = (libm::floor(BOXPER_BOXES as f64 * lf / span) as usize).min(BOXPER_BOXES - 1);
        log_freq[b] += libm::log(f);
        power[b] += p;
        count[b] += 1;
    }
    let points: Vec<(f64, f64)> = (0..BOXPER_BOXES)
        .filter(|&b| count[b] > 0 && power[b] > 0.0)
        .map(|b| {
            let c = count[b] as f64;
            (libm::exp(log_freq[b] / c), power[b] / c)
        })
        .collect();
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let fit = loglog_fit(&points)?;
    Ok(HurstEstimate::new(Method::Boxper, spectral_h(fit.slope), fit))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preconditions() {
        let cfg = EstimatorConfig::default();
        let short = TimeSeries::from_values([1.0, 2.0, 0.5, 3.0].repeat(8)).unwrap();
        assert!(matches!(boxper_estimate(&short, &cfg), Err(Error::SeriesTooShort { needed: 64, .. })));
        assert!(matches!(periodogram_estimate(&short, &cfg), Err(Error::SeriesTooShort { .. })));
        let c = TimeSeries::from_values(vec![1.0; 512]).unwrap();
        assert_eq!(boxper_estimate(&c, &cfg), Err(Error::DegenerateSeries));
        assert_eq!(periodogram_estimate(&c, &cfg), Err(Error::DegenerateSeries));
    }

    #[test]
    fn power_law_spectrum_recovers_slope() {
        // A deterministic sum of cosines with amplitude
        // ∝ ξ^{-0.3} at every Fourier frequency gives I ∝ ξ^{-0.6}, H = 0.8.
        let n = 1024;
        let x: Vec<f64> = (0..n)
            .map(|t| {
                (1..=n / 2)
                    .map(|j| {
                        let w = 2.0 * core::f64::consts::PI * j as f64 / n as f64;
                        libm::pow(w, -0.3) * libm::cos(w * t as f64 + 0.7 * j as f64)
                    })
                    .sum()
            })
            .collect();
        let s = TimeSeries::from_values(x).unwrap();
        let cfg = EstimatorConfig { low_freq_fraction: 1.0, ..Default::default() };
        let per = periodogram_estimate(&s, &cfg).unwrap();
        assert!((per.h - 0.8).abs() < 0.02, "{}", per.h);
        let boxed = boxper_estimate(&s, &cfg).unwrap();
        assert!((boxed.h - 0.8).abs() < 0.02, "{}", boxed.h);
    }
}
