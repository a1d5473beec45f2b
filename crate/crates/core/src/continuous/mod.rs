//! Statistical verification of the continuous examples (spheres, flat torus)
//! and exact p-adic truncations.
//!
//! Sampling uses a counter-based generator (ChaCha8) with the counter space
//! partitioned into fixed-size chunks: chunk `c` always draws from stream
//! `c + 1` of the seeded cipher, and per-chunk partial sums are folded in
//! chunk order. Estimates are therefore bit-identical across runs and across
//! thread counts. Statistical tolerances are expressed in standard errors,
//! never absolute epsilons.

mod padic;
mod sphere;
mod torus;

pub use padic::{padic_average, padic_limit, padic_space, PadicTruncation};
pub use sphere::{
    sample_sphere_mean_distance, sphere_distance_histogram, HistogramBin, HistogramSymmetry,
    SphereHistogram,
};
pub use torus::{flat_torus_mean_distance, torus_bound_check, torus_diameter, TorusBoundCheck};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContinuousError {
    #[error("sphere dimension must be at least 1, got {0}")]
    BadDimension(u32),
    #[error("sample count {got} is below the minimum {min}")]
    BadSampleCount { got: u64, min: u64 },
    #[error("bin count must be an even number >= 2, got {0}")]
    BadBins(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("truncation depth must be at least 1")]
    BadDepth,
    #[error("p^k = {requested} exceeds the vertex cap {cap}")]
    TooLarge { requested: u128, cap: usize },
}

/// Minimum sample count accepted by the samplers.
pub const MIN_SAMPLES: u64 = 1000;

/// Samples per counter chunk; fixed so the stream assignment never depends
/// on thread count.
const CHUNK: u64 = 1 << 16;

/// Two-sided 99% normal quantile.
const Z_99: f64 = 2.575829303548901;

/// A Monte Carlo estimate with its spread and provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleEstimate {
    pub mean: f64,
    pub std_dev: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    /// 99% confidence interval, centered at the mean.
    pub ci99: (f64, f64),
    /// Zero-norm Gaussian draws that were retried.
    pub degenerate_retries: u64,
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct ChunkStats {
    count: u64,
    sum: f64,
    sum_sq: f64,
    retries: u64,
}

impl ChunkStats {
    pub(crate) fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub(crate) fn note_retry(&mut self) {
        self.retries += 1;
    }
}

/// Run `sampler` once per sample, seed-partitioned into fixed chunks, and
/// fold the partials in chunk order.
pub(crate) fn sample_chunked<F>(n: u64, seed: u64, sampler: F) -> SampleEstimate
where
    F: Fn(&mut ChaCha8Rng, &mut ChunkStats) + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let partials: Vec<ChunkStats> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c + 1);
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            let mut stats = ChunkStats::default();
            for _ in lo..hi {
                sampler(&mut rng, &mut stats);
            }
            stats
        })
        .collect();
    let mut total = ChunkStats::default();
    for p in partials {
        total.count += p.count;
        total.sum += p.sum;
        total.sum_sq += p.sum_sq;
        total.retries += p.retries;
    }
    finalize(total, seed)
}

/// Histogram counts accumulated with the same chunking scheme.
pub(crate) fn histogram_chunked<F>(
    n: u64,
    seed: u64,
    bins: usize,
    sampler: F,
) -> (Vec<u64>, SampleEstimate)
where
    F: Fn(&mut ChaCha8Rng, &mut ChunkStats) -> f64 + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let partials: Vec<(Vec<u64>, ChunkStats)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c + 1);
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            let mut stats = ChunkStats::default();
            let mut counts = vec![0u64; bins];
            for _ in lo..hi {
                let value = sampler(&mut rng, &mut stats);
                // value is a position in [0,1]; the top edge joins the last bin.
                let idx = ((value * bins as f64) as usize).min(bins - 1);
                counts[idx] += 1;
            }
            (counts, stats)
        })
        .collect();
    let mut total = ChunkStats::default();
    let mut counts = vec![0u64; bins];
    for (part_counts, p) in partials {
        for (acc, c) in counts.iter_mut().zip(part_counts) {
            *acc += c;
        }
        total.count += p.count;
        total.sum += p.sum;
        total.sum_sq += p.sum_sq;
        total.retries += p.retries;
    }
    (counts, finalize(total, seed))
}

fn finalize(stats: ChunkStats, seed: u64) -> SampleEstimate {
    let n = stats.count as f64;
    let mean = stats.sum / n;
    let variance = if stats.count > 1 {
        ((stats.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    let std_dev = variance.sqrt();
    let std_error = std_dev / n.sqrt();
    SampleEstimate {
        mean,
        std_dev,
        std_error,
        samples: stats.count,
        seed,
        ci99: (mean - Z_99 * std_error, mean + Z_99 * std_error),
        degenerate_retries: stats.retries,
    }
}
