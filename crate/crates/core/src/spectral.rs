//! Raw periodogram and Welch power spectral density.
//!
//! Frequencies are in radians per sample and the DC bin is never reported,
//! so every ordinate is usable in a log-log regression.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fft::{fft_real, Complex64};
use crate::series::TimeSeries;

/// Frequency/power pairs on `(0, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub frequencies: Vec<f64>,
    pub power: Vec<f64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// Frequencies converted from radians to cycles per sample.
    pub fn frequencies_cycles(&self) -> Vec<f64> {
        self.frequencies.iter().map(|w| w / (2.0 * PI)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    #[default]
    Hann,
    Rectangular,
}

impl Window {
    /// Symmetric taper of length `len`.
    pub fn coefficients(self, len: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => alloc::vec![1.0; len],
            Window::Hann => {
                if len == 1 {
                    return alloc::vec![1.0];
                }
                let denom = (len - 1) as f64;
                (0..len).map(|i| 0.5 - 0.5 * libm::cos(2.0 * PI * i as f64 / denom)).collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchConfig {
    pub segment_length: usize,
    /// Fraction of a segment shared with the next one, in `[0, 1)`.
    pub overlap_fraction: f64,
    pub window: Window,
}

impl Default for WelchConfig {
    fn default() -> Self {
        WelchConfig { segment_length: 256, overlap_fraction: 0.5, window: Window::Hann }
    }
}

impl WelchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.segment_length < 8 {
            return Err(Error::InvalidConfig("segment_length must be at least 8"));
        }
        if !(0.0..1.0).contains(&self.overlap_fraction) {
            return Err(Error::InvalidConfig("overlap_fraction must lie in [0, 1)"));
        }
        Ok(())
    }

    fn step(&self) -> usize {
        let shared = libm::round(self.overlap_fraction * self.segment_length as f64) as usize;
        (self.segment_length - shared.min(self.segment_length - 1)).max(1)
    }
}

fn fourier_frequencies(n: usize) -> Vec<f64> {
    (1..=n / 2).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

/// `I(ξ_j) = |Σ_t x_t e^{i t ξ_j}|² / (2πN)` at `ξ_j = 2πj/N`, `j = 1..=N/2`.
pub fn periodogram(series: &TimeSeries) -> Result<Spectrum> {
    let x = series.values();
    let n = x.len();
    if n < 8 {
        return Err(Error::SeriesTooShort { needed: 8, got: n });
    }
    let dft = fft_real(x);
    let norm = 2.0 * PI * n as f64;
    let power = dft[1..=n / 2].iter().map(|z| z.norm_sqr() / norm).collect();
    Ok(Spectrum { frequencies: fourier_frequencies(n), power })
}

/// Welch estimate: mean of tapered, overlapping segment periodograms.
///
/// Each segment has its mean removed and is normalised by the taper energy,
/// `|Σ w_t x_t e^{-itξ}|² / (2π Σ w_t²)`, so a single rectangular segment
/// spanning the whole series reproduces [`periodogram`] exactly.
pub fn welch_psd(series: &TimeSeries, config: &WelchConfig) -> Result<Spectrum> {
    config.validate()?;
    let x = series.values();
    let len = config.segment_length;
    if x.len() < len {
        return Err(Error::SeriesTooShort { needed: len, got: x.len() });
    }
    let taper = config.window.coefficients(len);
    let energy: f64 = taper.iter().map(|w| w * w).sum();
    let step = config.step();
    let segments = (x.len() - len) / step + 1;

    let mut acc = alloc::vec![0.0; len / 2];
    let mut buf = alloc::vec![Complex64::new(0.0, 0.0); len];
    for s in 0..segments {
        let seg = &x[s * step..s * step + len];
        let m = crate::series::mean(seg);
        for ((b, &v), &w) in buf.iter_mut().zip(seg).zip(&taper) {
            *b = Complex64::new((v - m) * w, 0.0);
        }
        crate::fft::fft(&mut buf);
        for (a, z) in acc.iter_mut().zip(&buf[1..=len / 2]) {
            *a += z.norm_sqr();
        }
    }
    let norm = 2.0 * PI * energy * segments as f64;
    Ok(Spectrum { frequencies: fourier_frequencies(len), power: acc.into_iter().map(|a| a / norm).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn constant_has_no_power() {
        let x = TimeSeries::from_values(vec![3.5; 64]).unwrap();
        let p = periodogram(&x).unwrap();
        assert_eq!(p.len(), 32);
        assert!(p.power.iter().all(|&v| v < 1e-24));
        let w = welch_psd(&x, &WelchConfig { segment_length: 16, ..Default::default() }).unwrap();
        assert!(w.power.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_tone_peak() {
        let n = 64;
        let x: Vec<f64> = (0..n).map(|t| libm::cos(2.0 * PI * 8.0 * t as f64 / n as f64)).collect();
        let p = periodogram(&TimeSeries::from_values(x).unwrap()).unwrap();
        let (imax, _) = p
            .power
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        assert!((p.frequencies[imax] - 2.0 * PI * 8.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn short_series_rejected() {
        let x = TimeSeries::from_values(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(periodogram(&x), Err(Error::SeriesTooShort { .. })));
        let x = TimeSeries::from_values(vec![1.0; 100]).unwrap();
        assert!(matches!(welch_psd(&x, &WelchConfig::default()), Err(Error::SeriesTooShort { .. })));
        let bad = WelchConfig { overlap_fraction: 1.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn welch_single_rect_segment_is_periodogram() {
        let x: Vec<f64> = (0..200).map(|t| libm::sin(0.3 * t as f64) + 0.01 * (t % 7) as f64).collect();
        let s = TimeSeries::from_values(x).unwrap();
        let p = periodogram(&s).unwrap();
        let cfg = WelchConfig { segment_length: 200, overlap_fraction: 0.0, window: Window::Rectangular };
        let w = welch_psd(&s, &cfg).unwrap();
        assert_eq!(p.frequencies, w.frequencies);
        for (a, b) in p.power.iter().zip(&w.power) {
            assert!((a - b).abs() <= 1e-10 * a.max(1e-12));
        }
    }
}
