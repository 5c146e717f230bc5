use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Ordinary least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// The `(ln x, ln y)` pairs the line was fitted to.
    pub points: Vec<(f64, f64)>,
}

pub fn loglog_fit(points: &[(f64, f64)]) -> Result<LogLogFit> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    if let Some(&(x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::NonPositivePoint(x, y));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (libm::log(x), libm::log(y))).collect();
    let (slope, intercept, r_squared) = ols(&logs);
    Ok(LogLogFit { slope, intercept, r_squared, points: logs })
}

/// Slope, intercept and coefficient of determination of `y = a + b x`.
pub(crate) fn ols(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_res: f64 = points
        .iter()
        .map(|&(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r_squared = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    (slope, intercept, r_squared)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_square_law() {
        let f = loglog_fit(&[(1.0, 1.0), (2.0, 4.0), (4.0, 16.0)]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14);
        assert!(f.intercept.abs() < 1e-14);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flat_line() {
        let f = loglog_fit(&[(1.0, 3.0), (10.0, 3.0), (100.0, 3.0)]).unwrap();
        assert_eq!(f.slope, 0.0);
        assert_eq!(f.r_squared, 1.0);
    }

    #[test]
    fn matches_normal_equations() {
        let pts = [(1.0, 1.0), (2.0, 2.2), (4.0, 3.7), (8.0, 8.5)];
        // Solve [n Σx; Σx Σx²] [a b]ᵀ = [Σy Σxy]ᵀ by Cramer's rule.
        let (mut s1, mut sx, mut sxx, mut sy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(x, y) in &pts {
            let (lx, ly) = (libm::log(x), libm::log(y));
            s1 += 1.0;
            sx += lx;
            sxx += lx * lx;
            sy += ly;
            sxy += lx * ly;
        }
        let det = s1 * sxx - sx * sx;
        let b = (s1 * sxy - sx * sy) / det;
        let a = (sxx * sy - sx * sxy) / det;
        let f = loglog_fit(&pts).unwrap();
        assert!((f.slope - b).abs() < 1e-12);
        assert!((f.intercept - a).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&f.r_squared));
    }

    #[test]
    fn errors() {
        assert_eq!(loglog_fit(&[(1.0, 1.0), (2.0, 2.0)]), Err(Error::TooFewPoints(2)));
        assert_eq!(loglog_fit(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]), Err(Error::NonPositivePoint(2.0, 0.0)));
    }
}
