//! Block-statistic estimators: rescaled range, aggregated variance,
//! absolute value and differenced variance.

use alloc::vec::Vec;

use super::correction::{absval_factor, aggvar_factor, refit};
use super::{check_block_input, loglog_fit, EstimatorConfig, HurstEstimate, Method};
use crate::error::{Error, Result};
use crate::series::{mean, population_variance, TimeSeries};

/// Non-overlapping block means of size `m`; a trailing partial block is
/// dropped.
pub fn aggregate(series: &TimeSeries, m: usize) -> Result<TimeSeries> {
    if m == 0 {
        return Err(Error::InvalidConfig("block size must be positive"));
    }
    if m > series.len() {
        return Err(Error::BlockTooLarge { block: m, len: series.len() });
    }
    series.with_values(block_means(series.values(), m))
}

fn block_means(x: &[f64], m: usize) -> Vec<f64> {
    x.chunks_exact(m).map(mean).collect()
}

fn fit_points(method: Method, points: &[(f64, f64)], to_h: impl Fn(f64) -> f64) -> Result<HurstEstimate> {
    if points.len() < 3 {
        return Err(Error::TooFewScales { needed: 3, got: points.len() });
    }
    let fit = loglog_fit(points)?;
    Ok(HurstEstimate::new(method, to_h(fit.slope), fit))
}

fn fit_corrected(
    method: Method,
    points: &[(f64, f64)],
    factor: impl Fn(f64, f64) -> f64,
    to_h: impl Fn(f64) -> f64,
) -> Result<HurstEstimate> {
    if points.len() < 3 {
        return Err(Error::TooFewScales { needed: 3, got: points.len() });
    }
    let (h, fit) = refit(points, factor, to_h)?;
    Ok(HurstEstimate::new(method, h, fit))
}

/// Mean rescaled range over the blocks of size `n` whose standard deviation
/// is positive.
fn mean_rescaled_range(x: &[f64], n: usize) -> Option<f64> {
    let mut total = 0.0;
    let mut count = 0usize;
    for block in x.chunks_exact(n) {
        let m = mean(block);
        let (mut cum, mut lo, mut hi, mut ss) = (0.0f64, 0.0f64, 0.0f64, 0.0);
        for &v in block {
            let d = v - m;
            cum += d;
            lo = lo.min(cum);
            hi = hi.max(cum);
            ss += d * d;
        }
        let s = libm::sqrt(ss / n as f64);
        if s > 0.0 {
            total += (hi - lo) / s;
            count += 1;
        }
    }
    (count > 0 && total > 0.0).then(|| total / count as f64)
}

/// Rescaled-range (R/S) analysis: `E[R/S(n)] ≈ C n^H`.
pub fn rs_estimate(series: &TimeSeries, config: &EstimatorConfig) -> Result<HurstEstimate> {
    check_block_input(series, config)?;
    let x = series.values();
    let points: Vec<(f64, f64)> = config
        .scale_ladder(x.len())
        .into_iter()
        .filter_map(|n| mean_rescaled_range(x, n).map(|rs| (n as f64, rs)))
        .collect();
    fit_points(Method::RescaledRange, &points, |slope| slope)
}

fn aggregated_variances(x: &[f64], ladder: &[usize]) -> Vec<(usize, f64)> {
    ladder.iter().map(|&m| (m, population_variance(&block_means(x, m)))).collect()
}

/// Aggregated variance: `Var(X^(m)) ∝ m^{2H-2}`.
pub fn aggvar_estimate(series: &TimeSeries, config: &EstimatorConfig) -> Result<HurstEstimate> {
    check_block_input(series, config)?;
    let x = series.values();
    let points: Vec<(f64, f64)> = aggregated_variances(x, &config.scale_ladder(x.len()))
        .into_iter()
        .filter(|&(_, v)| v > 0.0)
        .map(|(m, v)| (m as f64, v))
        .collect();
    let to_h = |slope: f64| 1.0 + slope / 2.0;
    if config.small_sample_correction {
        fit_corrected(Method::Aggvar, &points, |m, h| aggvar_factor(x.len(), m, h), to_h)
    } else {
        fit_points(Method::Aggvar, &points, to_h)
    }
}

/// Absolute value method: mean `|X^(m)|` of the centered series scales as
/// `m^{H-1}`.
pub fn absval_estimate(series: &TimeSeries, config: &EstimatorConfig) -> Result<HurstEstimate> {
    check_block_input(series, config)?;
    let x = series.values();
    let mu = mean(x);
    let centered: Vec<f64> = x.iter().map(|v| v - mu).collect();
    let points: Vec<(f64, f64)> = config
        .scale_ladder(x.len())
        .into_iter()
        .filter_map(|m| {
            let agg = block_means(&centered, m);
            let stat = agg.iter().map(|v| v.abs()).sum::<f64>() / agg.len() as f64;
            (stat > 0.0).then_some((m as f64, stat))
        })
        .collect();
    let to_h = |slope: f64| 1.0 + slope;
    if config.small_sample_correction {
        fit_corrected(Method::Absval, &points, |m, h| absval_factor(x.len(), m, h), to_h)
    } else {
        fit_points(Method::Absval, &points, to_h)
    }
}

/// Differenced variance: successive differences of the aggregated variances
/// keep the `m^{2H-2}` exponent and cancel additive offsets.
pub fn diffvar_estimate(series: &TimeSeries, config: &EstimatorConfig) -> Result<HurstEstimate> {
    check_block_input(series, config)?;
    let x = series.values();
    let ladder = config.scale_ladder(x.len());
    if ladder.len() < 4 {
        return Err(Error::TooFewScales { needed: 4, got: ladder.len() });
    }
    let variances = aggregated_variances(x, &ladder);
    let points: Vec<(f64, f64)> = variances
        .windows(2)
        .map(|w| (w[0].0 as f64, (w[1].1 - w[0].1).abs()))
        .filter(|&(_, d)| d > 0.0)
        .collect();
    fit_points(Method::Diffvar, &points, |slope| 1.0 + slope / 2.0)
}
