//! Spherical distance sampling: mean-distance estimates and binned
//! distributions with a symmetry report.

use super::{
    histogram_chunked, sample_chunked, ChunkStats, ContinuousError, SampleEstimate, MIN_SAMPLES,
};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

/// Estimate the mean spherical distance between independent uniform points
/// on the unit sphere `S^d` in `R^(d+1)`. Deterministic for a fixed seed.
pub fn sample_sphere_mean_distance(
    d: u32,
    n: u64,
    seed: u64,
) -> Result<SampleEstimate, ContinuousError> {
    if d < 1 {
        return Err(ContinuousError::BadDimension(d));
    }
    if n < MIN_SAMPLES {
        return Err(ContinuousError::BadSampleCount {
            got: n,
            min: MIN_SAMPLES,
        });
    }
    let coords = (d + 1) as usize;
    Ok(sample_chunked(n, seed, |rng, stats| {
        let value = sphere_pair_distance(rng, coords, stats);
        stats.push(value);
    }))
}

fn sphere_pair_distance(rng: &mut ChaCha8Rng, coords: usize, stats: &mut ChunkStats) -> f64 {
    let p = unit_gaussian(rng, coords, stats);
    let q = unit_gaussian(rng, coords, stats);
    let dot: f64 = p.iter().zip(&q).map(|(a, b)| a * b).sum();
    dot.clamp(-1.0, 1.0).acos()
}

/// A uniform point on the sphere: normalized standard Gaussian vector.
/// Zero-norm draws are retried and counted.
fn unit_gaussian(rng: &mut ChaCha8Rng, coords: usize, stats: &mut ChunkStats) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..coords)
            .map(|_| StandardNormal.sample(rng))
            .collect();
        let norm_sq: f64 = v.iter().map(|x| x * x).sum();
        if norm_sq > f64::MIN_POSITIVE {
            let norm = norm_sq.sqrt();
            return v.into_iter().map(|x| x / norm).collect();
        }
        stats.note_retry();
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
    pub mass: f64,
}

/// Mirror-pair symmetry report for a histogram over `[0, pi]`.
///
/// For each pair `(b, bins-1-b)` the statistic
/// `z = (count_b - count_b') / sqrt(count_b + count_b')` is approximately
/// standard normal when the underlying distribution is symmetric, so the
/// acceptance threshold on `max |z|` scales with `sqrt(N)` deviations.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramSymmetry {
    pub max_abs_z: f64,
    pub chi_square: f64,
    pub pairs: usize,
    pub pass: bool,
}

pub const SYMMETRY_Z_THRESHOLD: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SphereHistogram {
    pub bins: Vec<HistogramBin>,
    pub estimate: SampleEstimate,
    pub symmetry: HistogramSymmetry,
}

/// Histogram of sampled spherical distances over `[0, pi]` with an even
/// number of bins, plus the mirror symmetry report.
pub fn sphere_distance_histogram(
    d: u32,
    n: u64,
    bins: usize,
    seed: u64,
) -> Result<SphereHistogram, ContinuousError> {
    if d < 1 {
        return Err(ContinuousError::BadDimension(d));
    }
    if n < MIN_SAMPLES {
        return Err(ContinuousError::BadSampleCount {
            got: n,
            min: MIN_SAMPLES,
        });
    }
    if bins < 2 || bins % 2 != 0 {
        return Err(ContinuousError::BadBins(bins));
    }
    let coords = (d + 1) as usize;
    let (counts, estimate) = histogram_chunked(n, seed, bins, |rng, stats| {
        let distance = sphere_pair_distance(rng, coords, stats);
        stats.push(distance);
        distance / PI
    });
    let symmetry = mirror_symmetry(&counts);
    let width = PI / bins as f64;
    let bins = counts
        .iter()
        .enumerate()
        .map(|(b, &count)| HistogramBin {
            lo: b as f64 * width,
            hi: (b + 1) as f64 * width,
            count,
            mass: count as f64 / n as f64,
        })
        .collect();
    Ok(SphereHistogram {
        bins,
        estimate,
        symmetry,
    })
}

pub(crate) fn mirror_symmetry(counts: &[u64]) -> HistogramSymmetry {
    let bins = counts.len();
    let mut max_abs_z: f64 = 0.0;
    let mut chi_square = 0.0;
    let pairs = bins / 2;
    for b in 0..pairs {
        let a = counts[b] as f64;
        let c = counts[bins - 1 - b] as f64;
        if a + c > 0.0 {
            let z = (a - c) / (a + c).sqrt();
            max_abs_z = max_abs_z.max(z.abs());
            chi_square += z * z;
        }
    }
    HistogramSymmetry {
        max_abs_z,
        chi_square,
        pairs,
        pass: max_abs_z <= SYMMETRY_Z_THRESHOLD,
    }
}
