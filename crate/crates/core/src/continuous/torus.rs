//! Flat torus `R^2 / Z^2` under the quotient Euclidean metric: an example
//! where the bounds hold without lower tightness.

use super::{sample_chunked, ContinuousError, SampleEstimate, MIN_SAMPLES};
use rand::Rng;
use std::f64::consts::FRAC_1_SQRT_2;

/// Diameter of the unit flat torus: `sqrt(2)/2`, realized by opposite
/// corners such as `(0,0)` and `(1/2,1/2)`.
pub fn torus_diameter() -> f64 {
    FRAC_1_SQRT_2
}

/// Quotient Euclidean distance between points of `[0,1)^2`.
pub fn torus_distance(p: (f64, f64), q: (f64, f64)) -> f64 {
    let wrap = |delta: f64| {
        let d = delta.abs() % 1.0;
        d.min(1.0 - d)
    };
    let dx = wrap(p.0 - q.0);
    let dy = wrap(p.1 - q.1);
    (dx * dx + dy * dy).sqrt()
}

/// Estimate the mean distance between independent uniform points on the
/// flat torus. Deterministic for a fixed seed.
pub fn flat_torus_mean_distance(n: u64, seed: u64) -> Result<SampleEstimate, ContinuousError> {
    if n < MIN_SAMPLES {
        return Err(ContinuousError::BadSampleCount {
            got: n,
            min: MIN_SAMPLES,
        });
    }
    Ok(sample_chunked(n, seed, |rng, stats| {
        let p = (rng.random::<f64>(), rng.random::<f64>());
        let q = (rng.random::<f64>(), rng.random::<f64>());
        stats.push(torus_distance(p, q));
    }))
}

/// Statistical check that `D/2 <= mean <= D`, with margins in standard
/// errors.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusBoundCheck {
    pub lower: f64,
    pub upper: f64,
    /// `(mean - D/2) / std_error`.
    pub lower_margin_se: f64,
    /// `(D - mean) / std_error`.
    pub upper_margin_se: f64,
    pub inside: bool,
}

pub fn torus_bound_check(estimate: &SampleEstimate) -> TorusBoundCheck {
    let upper = torus_diameter();
    let lower = upper / 2.0;
    let lower_margin_se = (estimate.mean - lower) / estimate.std_error;
    let upper_margin_se = (upper - estimate.mean) / estimate.std_error;
    TorusBoundCheck {
        lower,
        upper,
        lower_margin_se,
        upper_margin_se,
        inside: estimate.mean > lower && estimate.mean < upper,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corner_distance_is_the_diameter() {
        assert!((torus_distance((0.0, 0.0), (0.5, 0.5)) - torus_diameter()).abs() < 1e-15);
        assert_eq!(torus_distance((0.25, 0.75), (0.25, 0.75)), 0.0);
        // Wrapping: 0.9 to 0.1 is 0.2 around the seam.
        assert!((torus_distance((0.9, 0.0), (0.1, 0.0)) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn mean_sits_strictly_inside_the_bounds() {
        let est = flat_torus_mean_distance(200_000, 7).unwrap();
        let check = torus_bound_check(&est);
        assert!(check.inside);
        assert!(check.lower_margin_se > 10.0);
        assert!(check.upper_margin_se > 10.0);
    }

    #[test]
    fn mean_matches_quadrature_oracle() {
        // Independent oracle: the wrapped coordinate difference is uniform
        // on [0, 1/2] with density 2, so the mean distance is
        // 4 * integral over [0,1/2]^2 of sqrt(x^2+y^2). Gauss-Legendre
        // quadrature (64 points per axis) pins the value.
        let (nodes, weights) = gauss_legendre_64();
        let mut integral = 0.0;
        for (&xi, &wi) in nodes.iter().zip(&weights) {
            let x = 0.25 * (xi + 1.0);
            for (&yj, &wj) in nodes.iter().zip(&weights) {
                let y = 0.25 * (yj + 1.0);
                integral += wi * wj * (x * x + y * y).sqrt();
            }
        }
        // Jacobian: each axis maps [-1,1] -> [0,1/2], factor 1/4 per axis.
        let oracle = 4.0 * integral * 0.25 * 0.25;
        let est = flat_torus_mean_distance(400_000, 99).unwrap();
        assert!(
            (est.mean - oracle).abs() < 4.0 * est.std_error,
            "mean {} vs oracle {oracle}",
            est.mean
        );
    }

    /// 64-point Gauss-Legendre rule on [-1,1] via Newton iteration on
    /// Legendre polynomials.
    fn gauss_legendre_64() -> (Vec<f64>, Vec<f64>) {
        let n = 64usize;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    }

    /// Legendre polynomial P_n and derivative at x.
    fn legendre(n: usize, x: f64) -> (f64, f64) {
        let (mut p0, mut p1) = (1.0, x);
        for k in 2..=n {
            let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = pk;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        (p1, dp)
    }
}
