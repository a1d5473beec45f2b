//! Truncations of the p-adic integers: the exact ultrametric space on
//! `Z/p^k` with `d(x,y) = p^(-v(x-y))`.

use super::ContinuousError;
use crate::graph::VERTEX_CAP_APSP;
use crate::metric::{FiniteMetricSpace, HomogeneityEvidence};
use num_bigint::BigInt;
use num_rational::BigRational;

/// A depth-`k` truncation of the p-adic integers as a finite metric space.
/// Translations are isometries, so homogeneity holds by construction.
#[derive(Debug, Clone)]
pub struct PadicTruncation {
    pub prime: u64,
    pub depth: u32,
    pub space: FiniteMetricSpace,
    pub evidence: HomogeneityEvidence,
}

fn check_params(p: u64, k: u32) -> Result<u64, ContinuousError> {
    if !is_prime(p) {
        return Err(ContinuousError::NotPrime(p));
    }
    if k < 1 {
        return Err(ContinuousError::BadDepth);
    }
    let order = (p as u128).checked_pow(k).ok_or(ContinuousError::TooLarge {
        requested: u128::MAX,
        cap: VERTEX_CAP_APSP,
    })?;
    if order > VERTEX_CAP_APSP as u128 {
        return Err(ContinuousError::TooLarge {
            requested: order,
            cap: VERTEX_CAP_APSP,
        });
    }
    Ok(order as u64)
}

/// Build the finite metric space on `Z/p^k` with exact distances
/// `p^(-v(x-y))`, the valuation capped at `k`.
pub fn padic_space(p: u64, k: u32) -> Result<PadicTruncation, ContinuousError> {
    let order = check_params(p, k)? as usize;
    let scale = BigInt::from(p).pow(k);
    // Scaled distance for difference z: p^(k - v(z)); 0 on the diagonal.
    let mut by_difference = vec![0i64; order];
    for z in 1..order as u64 {
        by_difference[z as usize] = (p as i64).pow(k - valuation(z, p, k));
    }
    let mut values = vec![0i64; order * order];
    for x in 0..order {
        for y in 0..order {
            let z = (y + order - x) % order;
            values[x * order + y] = by_difference[z];
        }
    }
    let space = FiniteMetricSpace::from_scaled_parts(order, scale, values)
        .expect("p-adic construction is structurally valid");
    Ok(PadicTruncation {
        prime: p,
        depth: k,
        space,
        evidence: HomogeneityEvidence::by_construction(
            "p-adic truncation: translations of Z/p^k are isometries and act transitively",
        ),
    })
}

/// Exact average distance of the depth-`k` truncation, computed by
/// enumerating the `p^k` difference classes (valuation shells) rather than
/// materializing `p^(2k)` pairs. Translation invariance makes the two
/// enumerations identical.
pub fn padic_average(p: u64, k: u32) -> Result<BigRational, ContinuousError> {
    let order = check_params(p, k)?;
    // A = (1/p^k) * sum over z in Z/p^k of p^(-v(z))
    //   = (sum over z != 0 of p^(k - v(z))) / p^(2k).
    let mut numerator = BigInt::from(0);
    for z in 1..order {
        numerator += BigInt::from(p).pow(k - valuation(z, p, k));
    }
    let denominator = BigInt::from(p).pow(2 * k);
    Ok(BigRational::new(numerator, denominator))
}

/// The limit value `p/(p+1)` of the average distance as the depth grows.
pub fn padic_limit(p: u64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(p + 1))
}

/// p-adic valuation of `z != 0`, capped at `k`.
fn valuation(mut z: u64, p: u64, k: u32) -> u32 {
    debug_assert!(z != 0);
    let mut v = 0;
    while v < k && z % p == 0 {
        z /= p;
        v += 1;
    }
    v
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut f = 3u64;
    while f.saturating_mul(f) <= p {
        if p % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}
