//! Small dense least-squares helpers.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Weights `w` such that `Σ w_i y_i` is the value at `at` of the degree-`degree`
/// least-squares polynomial through `(offsets_i, y_i)`.
///
/// Offsets are rescaled to `[-1, 1]` and the design matrix is factored by
/// modified Gram-Schmidt with one reorthogonalisation pass.
pub(crate) fn polyfit_weights(offsets: &[f64], degree: usize, at: f64) -> Result<Vec<f64>> {
    let rows = offsets.len();
    let cols = degree + 1;
    if rows < cols {
        return Err(Error::RankDeficient);
    }
    let scale = offsets.iter().fold(0.0f64, |m, o| m.max(o.abs())).max(1.0);

    // Column-major Q, upper-triangular R.
    let mut q: Vec<Vec<f64>> =
        (0..cols).map(|j| offsets.iter().map(|&o| libm::pow(o / scale, j as f64)).collect()).collect();
    let mut r = vec![vec![0.0; cols]; cols];
    for j in 0..cols {
        let norm0 = libm::sqrt(dot(&q[j], &q[j]));
        for _pass in 0..2 {
            for i in 0..j {
                let proj = dot(&q[i], &q[j]);
                r[i][j] += proj;
                let (head, tail) = q.split_at_mut(j);
                for (x, y) in tail[0].iter_mut().zip(&head[i]) {
                    *x -= proj * y;
                }
            }
        }
        let norm = libm::sqrt(dot(&q[j], &q[j]));
        if !(norm > 1e-10 * norm0) {
            return Err(Error::RankDeficient);
        }
        r[j][j] = norm;
        for x in q[j].iter_mut() {
            *x /= norm;
        }
    }

    // Solve Rᵀ z = v for the monomial vector v of the evaluation point.
    let u = at / scale;
    let v: Vec<f64> = (0..cols).map(|j| libm::pow(u, j as f64)).collect();
    let mut z = vec![0.0; cols];
    for j in 0..cols {
        let s: f64 = (0..j).map(|i| r[i][j] * z[i]).sum();
        z[j] = (v[j] - s) / r[j][j];
    }
    Ok((0..rows).map(|row| (0..cols).map(|j| q[j][row] * z[j]).sum()).collect())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
