//! Exact fractional Gaussian noise by circulant embedding, and the
//! clamped delay traces built from it.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::fft::{fft, fft_real, Complex64};
use crate::series::TimeSeries;

/// Eigenvalues below this are treated as an embedding failure; smaller
/// negative values are rounding noise and are zeroed.
const EIGENVALUE_TOLERANCE: f64 = -1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FgnSpec {
    /// Hurst parameter in `(0, 1)`.
    pub h: f64,
    /// Number of samples.
    pub n: usize,
    /// Marginal standard deviation.
    pub sigma: f64,
    pub seed: u64,
}

impl FgnSpec {
    pub fn new(h: f64, n: usize, seed: u64) -> Self {
        FgnSpec { h, n, sigma: 1.0, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h < 1.0) {
            return Err(Error::InvalidH(self.h));
        }
        if self.n < 2 {
            return Err(Error::InvalidParams("fGn length must be at least 2"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidParams("fGn sigma must be positive"));
        }
        Ok(())
    }
}

/// `γ(k) = σ²/2 (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H})`.
pub fn fgn_autocovariance(h: f64, sigma: f64, lag: usize) -> f64 {
    if lag == 0 {
        return sigma * sigma;
    }
    let k = lag as f64;
    let e = 2.0 * h;
    0.5 * sigma * sigma * (libm::pow(k + 1.0, e) - 2.0 * libm::pow(k, e) + libm::pow(k - 1.0, e))
}

/// Eigenvalues of the `2n` circulant matrix whose first row is
/// `γ(0), …, γ(n), γ(n-1), …, γ(1)`.
fn embedding_eigenvalues(h: f64, n: usize) -> Result<Vec<f64>> {
    let mut row: Vec<f64> = (0..=n).map(|k| fgn_autocovariance(h, 1.0, k)).collect();
    row.extend((1..n).rev().map(|k| fgn_autocovariance(h, 1.0, k)));
    let mut eig = Vec::with_capacity(row.len());
    for z in fft_real(&row) {
        if z.re < EIGENVALUE_TOLERANCE {
            return Err(Error::EmbeddingFailure(z.re));
        }
        eig.push(z.re.max(0.0));
    }
    Ok(eig)
}

/// Zero-mean fGn with autocovariance [`fgn_autocovariance`].
///
/// Output depends only on `spec`: the same spec yields bit-identical
/// samples.
pub fn generate_fgn(spec: &FgnSpec) -> Result<TimeSeries> {
    spec.validate()?;
    let n = spec.n;
    let eig = embedding_eigenvalues(spec.h, n)?;
    let m = eig.len();
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    // Re(FFT(√(λ/m)·(A + iB))) has covariance equal to the circulant row.
    let mut w: Vec<Complex64> = eig
        .iter()
        .map(|&lambda| {
            let a: f64 = StandardNormal.sample(&mut rng);
            let b: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(a, b) * libm::sqrt(lambda / m as f64)
        })
        .collect();
    fft(&mut w);
    TimeSeries::from_values(w[..n].iter().map(|z| z.re * spec.sigma).collect())
}

/// Additive-noise delay channel clamped to `[0, tau_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayModel {
    /// Mean delay.
    pub mu: f64,
    /// Scale of the unit-variance fGn added to the mean.
    pub sigma_d: f64,
    /// Upper clamp.
    pub tau_max: f64,
}

impl DelayModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu >= 0.0 && self.sigma_d > 0.0 && self.tau_max > 0.0) {
            return Err(Error::InvalidParams("delay model needs mu >= 0, sigma_d > 0, tau_max > 0"));
        }
        if self.mu > self.tau_max {
            return Err(Error::InvalidBounds { mu: self.mu, tau_max: self.tau_max });
        }
        Ok(())
    }

    /// `τ_k = clamp(mu + sigma_d·g_k, 0, tau_max)`, plus how many samples hit
    /// a bound.
    pub fn apply(&self, noise: &TimeSeries) -> Result<(TimeSeries, usize)> {
        self.validate()?;
        let mut clamped = 0;
        let values = noise
            .values()
            .iter()
            .map(|&g| {
                let raw = self.mu + self.sigma_d * g;
                let tau = raw.clamp(0.0, self.tau_max);
                if tau != raw {
                    clamped += 1;
                }
                tau
            })
            .collect();
        Ok((noise.with_values(values)?, clamped))
    }
}

/// Delay trace driven by unit-variance fGn; `spec.sigma` is ignored.
pub fn generate_delay_trace(spec: &FgnSpec, mu: f64, sigma_d: f64, tau_max: f64) -> Result<TimeSeries> {
    let model = DelayModel { mu, sigma_d, tau_max };
    model.validate()?;
    let noise = generate_fgn(&FgnSpec { sigma: 1.0, ..*spec })?;
    Ok(model.apply(&noise)?.0)
}
