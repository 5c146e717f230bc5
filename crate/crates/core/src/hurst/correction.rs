//! Finite-sample correction for estimators that center by the sample mean.
//!
//! Subtracting the sample mean removes a share of the variance that grows
//! with the block size when `H` is large, which flattens the log-log slope
//! and biases `H` downward. Under an fGn model the expected statistic with
//! and without centering is known in closed form, so the observed statistic
//! is divided by their ratio at the current `H` and the fit is repeated
//! until `H` stops moving.

use alloc::vec::Vec;

use super::fit::{loglog_fit, LogLogFit};
use crate::error::Result;

const MAX_ITERATIONS: usize = 100;
const TOLERANCE: f64 = 1e-12;

/// `H` is held inside this range while evaluating correction factors.
const H_RANGE: (f64, f64) = (0.01, 0.99);

/// Fixed-point refit of `(scale, statistic)` points.
///
/// `factor(scale, h)` is the expected ratio of the centered statistic to
/// the uncentered one; `to_h` maps a slope to `H`.
pub(crate) fn refit(
    points: &[(f64, f64)],
    factor: impl Fn(f64, f64) -> f64,
    to_h: impl Fn(f64) -> f64,
) -> Result<(f64, LogLogFit)> {
    let mut fit = loglog_fit(points)?;
    let mut h = to_h(fit.slope);
    for _ in 0..MAX_ITERATIONS {
        let hc = h.clamp(H_RANGE.0, H_RANGE.1);
        let corrected: Vec<(f64, f64)> = points.iter().map(|&(m, s)| (m, s / factor(m, hc))).collect();
        let next_fit = loglog_fit(&corrected)?;
        let next = to_h(next_fit.slope);
        let done = (next - h).abs() < TOLERANCE;
        fit = next_fit;
        h = next;
        if done {
            break;
        }
    }
    Ok((h, fit))
}

/// Aggregated variance: `E[var of k block means] = m^{2H-2} (1 - k^{2H-2})`.
pub(crate) fn aggvar_factor(n: usize, m: f64, h: f64) -> f64 {
    let k = (n / m as usize) as f64;
    1.0 - libm::pow(k, 2.0 * h - 2.0)
}

/// `Σ_j ρ(i - j)` over `j = 0..k` for unit fGn.
fn row_sum(i: f64, k: f64, h: f64) -> f64 {
    let e = 2.0 * h;
    0.5 * (libm::pow(i + 1.0, e) - libm::pow(i, e) + libm::pow(k - i, e) - libm::pow(k - i - 1.0, e))
}

/// Absolute value method: mean over blocks of the standard deviation of a
/// centered block mean, relative to the uncentered one.
pub(crate) fn absval_factor(n: usize, m: f64, h: f64) -> f64 {
    let k = n / m as usize;
    let kf = k as f64;
    let var_mean = libm::pow(kf, 2.0 * h - 2.0);
    (0..k)
        .map(|i| {
            let c = row_sum(i as f64, kf, h) / kf;
            libm::sqrt((1.0 - 2.0 * c + var_mean).max(0.0))
        })
        .sum::<f64>()
        / kf
}

/// Higuchi curve length on the cumulative sum of a mean-centered series.
///
/// The centered cumulative sum is a bridge `S(u) - (u/N) S(N)`, so the
/// increment over `m` starting at `u` has variance
/// `m^{2H} - 2(m/N) C_u + (m/N)² N^{2H}` with
/// `C_u = Cov(S(u+m) - S(u), S(N))`.
pub(crate) struct HiguchiFactor {
    n: usize,
    h: f64,
    /// `u^{2H}` for `u = 0..=n`.
    powers: Vec<f64>,
}

impl HiguchiFactor {
    pub(crate) fn new(n: usize, h: f64) -> Self {
        let powers = (0..=n).map(|u| libm::pow(u as f64, 2.0 * h)).collect();
        HiguchiFactor { n, h, powers }
    }

    pub(crate) fn h(&self) -> f64 {
        self.h
    }

    pub(crate) fn factor(&self, m: usize) -> f64 {
        let n = self.n;
        let p = &self.powers;
        let r = m as f64 / n as f64;
        let base = p[m];
        let tail = r * r * p[n];
        let mut total = 0.0;
        let mut used = 0usize;
        for start in 0..m {
            let steps = (n - 1 - start) / m;
            if steps == 0 {
                continue;
            }
            let mut acc = 0.0;
            for i in 0..steps {
                let u = start + i * m + 1;
                let cov = 0.5 * (p[u + m] - p[u] + p[n - u] - p[n - u - m]);
                acc += libm::sqrt((base - 2.0 * r * cov + tail).max(0.0));
            }
            total += acc / steps as f64;
            used += 1;
        }
        total / used as f64 / libm::sqrt(base)
    }
}
