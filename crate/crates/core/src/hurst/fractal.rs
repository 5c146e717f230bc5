//! Estimators that work on the cumulative sum of the centered series,
//! treating an increment process as a path.

use alloc::vec::Vec;

use core::cell::RefCell;

use super::correction::{refit, HiguchiFactor};
use super::{check_block_input, check_input, loglog_fit, EstimatorConfig, HurstEstimate, Method};
use crate::error::{Error, Result};
use crate::hurst::fit::ols;
use crate::series::{mean, TimeSeries};

const MIN_HIGUCHI_LEN: usize = 128;

fn centered_cumsum(x: &[f64]) -> Vec<f64> {
    let mu = mean(x);
    x.iter()
        .scan(0.0, |acc, &v| {
            *acc += v - mu;
            Some(*acc)
        })
        .collect()
}

/// Higuchi normalised curve length at scale `m`, averaged over the `m`
/// starting offsets.
fn curve_length(y: &[f64], m: usize) -> Option<f64> {
    let n = y.len();
    let mut total = 0.0;
    let mut used = 0usize;
    for start in 0..m {
        let steps = (n - 1 - start) / m;
        if steps == 0 {
            continue;
        }
        let dist: f64 = (1..=steps).map(|i| (y[start + i * m] - y[start + (i - 1) * m]).abs()).sum();
        total += dist * (n - 1) as f64 / (steps * m) as f64 / m as f64;
        used += 1;
    }
    (used > 0 && total > 0.0).then(|| total / used as f64)
}

/// Higuchi's method on the cumulative sum: `L(m) ∝ m^{-D}` with `D = 2 - H`.
pub fn higuchi_estimate(series: &TimeSeries, config: &EstimatorConfig) -> Result<HurstEstimate> {
    config.validate()?;
    check_input(series, MIN_HIGUCHI_LEN)?;
    let y = centered_cumsum(series.values());
    let points: Vec<(f64, f64)> = config
        .scale_ladder(y.len())
        .into_iter()
        .filter_map(|m| curve_length(&y, m).map(|l| (m as f64, l)))
        .collect();
    if points.len() < 3 {
        return Err(Error::TooFewScales { needed: 3, got: points.len() });
    }
    // slope = -D and H = 2 - D.
    let to_h = |slope: f64| 2.0 + slope;
    if config.small_sample_correction {
        let cache: RefCell<Option<HiguchiFactor>> = RefCell::new(None);
        let factor = |m: f64, h: f64| {
            let mut slot = cache.borrow_mut();
            if !matches!(slot.as_ref(), Some(f) if f.h() == h) {
                *slot = Some(HiguchiFactor::new(y.len(), h));
            }
            slot.as_ref().map_or(1.0, |f| f.factor(m as usize))
        };
        let (h, fit) = refit(&points, factor, to_h)?;
        return Ok(HurstEstimate::new(Method::Higuchi, h, fit));
    }
    let fit = loglog_fit(&points)?;
    Ok(HurstEstimate::new(Method::Higuchi, to_h(fit.slope), fit))
}

/// Mean residual variance of a least-squares line fitted inside each block
/// of size `m`.
fn mean_residual_variance(y: &[f64], m: usize) -> f64 {
    let mut total = 0.0;
    let mut blocks = 0usize;
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(m);
    for block in y.chunks_exact(m) {
        pts.clear();
        pts.extend(block.iter().enumerate().map(|(i, &v)| (i as f64, v)));
        let (slope, intercept, _) = ols(&pts);
        let ss: f64 = pts
            .iter()
            .map(|&(t, v)| {
                let r = v - (intercept + slope * t);
                r * r
            })
            .sum();
        total += ss / m as f64;
        blocks += 1;
    }
    total / blocks as f64
}

/// Variance-of-residuals (Peng) method: residual variance about a local
/// linear trend of the cumulative sum grows as `m^{2H}`.
pub fn peng_estimate(series: &TimeSeries, config: &EstimatorConfig) -> Result<HurstEstimate> {
    check_block_input(series, config)?;
    let y = centered_cumsum(series.values());
    let points: Vec<(f64, f64)> = config
        .scale_ladder(y.len())
        .into_iter()
        .map(|m| (m as f64, mean_residual_variance(&y, m)))
        .filter(|&(_, v)| v > 0.0)
        .collect();
    if points.len() < 3 {
        return Err(Error::TooFewScales { needed: 3, got: points.len() });
    }
    let fit = loglog_fit(&points)?;
    Ok(HurstEstimate::new(Method::Peng, fit.slope / 2.0, fit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn constant_is_degenerate() {
        let cfg = EstimatorConfig::default();
        let c = TimeSeries::from_values(vec![4.0; 512]).unwrap();
        assert_eq!(higuchi_estimate(&c, &cfg), Err(Error::DegenerateSeries));
        assert_eq!(peng_estimate(&c, &cfg), Err(Error::DegenerateSeries));
        let short = TimeSeries::from_values((0..100).map(|i| i as f64).collect()).unwrap();
        assert!(matches!(higuchi_estimate(&short, &cfg), Err(Error::SeriesTooShort { needed: 128, .. })));
    }

    #[test]
    fn linear_path_has_unit_curve_scaling() {
        // y_t = t: every |y_{t+m} - y_t| = m, so L(m) = (n-1)/m.
        let y: Vec<f64> = (0..101).map(|t| t as f64).collect();
        let l = curve_length(&y, 5).unwrap();
        assert!((l - 100.0 / 5.0).abs() < 1e-12);
    }

    #[test]
    fn residual_variance_of_line_is_zero() {
        let y: Vec<f64> = (0..64).map(|t| 3.0 * t as f64 - 1.0).collect();
        assert!(mean_residual_variance(&y, 8) < 1e-20);
    }
}
