#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use selfsim_core::hurst::{EstimatorConfig, Method};
use selfsim_core::synthesis::{generate_fgn, FgnSpec};
use selfsim_core::TimeSeries;

/// iid standard Gaussian reference generator, independent of the fGn code.
pub fn white_noise(n: usize, seed: u64) -> TimeSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    TimeSeries::from_values((0..n).map(|_| StandardNormal.sample(&mut rng)).collect()).unwrap()
}

pub fn fgn(h: f64, n: usize, seed: u64) -> TimeSeries {
    generate_fgn(&FgnSpec::new(h, n, seed)).unwrap()
}

/// Mean estimate of `method` over seeds `base..base + 20`.
pub fn mean_h(method: Method, source: impl Fn(u64) -> TimeSeries, base: u64) -> f64 {
    let cfg = EstimatorConfig::default();
    (base..base + 20).map(|s| method.estimate(&source(s), &cfg).unwrap().h).sum::<f64>() / 20.0
}

pub fn assert_in(value: f64, lo: f64, hi: f64, what: &str) {
    assert!((lo..=hi).contains(&value), "{what}: {value} not in [{lo}, {hi}]");
}
