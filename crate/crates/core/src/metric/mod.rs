//! Exact analysis of finite metric spaces: validation, diameter, average
//! distances, distance distributions, bound checks, and antipodality
//! structure.
//!
//! All quantities in this module are arbitrary-precision rationals. The
//! tightness tests (`A = D/2`, `A = mu*D`) are exact equalities, so no
//! floating point is allowed anywhere on these paths.

mod antipodal;
mod bounds;

pub use antipodal::{
    antipodal_map, classify_antipodality, detect_extremal_lower, detect_extremal_upper,
    symmetry_check, verify_involution_properties, AntipodalityReport, AntipodalityTier,
    HomogeneityEvidence, InvolutionReport, StrictnessWitness, SymmetryReport,
    STRICTNESS_WITNESS_CAP,
};
pub use bounds::{check_bounds, BoundsReport};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("asymmetric distances: d({i},{j}) != d({j},{i})")]
    Asymmetric { i: usize, j: usize },
    #[error("negative distance at ({i},{j})")]
    NegativeDistance { i: usize, j: usize },
    #[error("nonzero diagonal entry at {i}")]
    NonzeroDiagonal { i: usize },
    #[error("zero distance between distinct points ({i},{j})")]
    ZeroOffDiagonal { i: usize, j: usize },
    #[error("triangle inequality violated: d({i},{j}) > d({i},{k}) + d({k},{j})")]
    TriangleViolation { i: usize, j: usize, k: usize },
    #[error("bad weights: {0}")]
    BadWeights(String),
    #[error("off-diagonal average undefined for a one-point space")]
    OffDiagonalUndefined,
    #[error("operation requires at least two points")]
    NotEnoughPoints,
    #[error("isometry evidence required: {0}")]
    EvidenceRequired(String),
    #[error("space is not uniquely antipodal: point {point} has {count} antipodes")]
    NotUniquelyAntipodal { point: usize, count: usize },
    #[error("antipodal map is not an isometry: d({x},{y}) is not preserved")]
    NotIsometry { x: usize, y: usize },
    #[error("permutation degree {got} does not match space size {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("extremal classification disagrees with bound tightness: {0}")]
    InconsistentWithBound(String),
}

/// Which average to compute: `A` (diagonal included) or `A-bar` (diagonal excluded).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AverageMode {
    WithDiagonal,
    OffDiagonal,
}

/// Internal distance storage. Whenever every entry can be written as an
/// integer over one common denominator that fits `i64`, distances live in a
/// flat integer matrix; the quadratic and cubic scans then run on machine
/// integers. Arbitrary rationals fall back to the exact representation.
#[derive(Debug, Clone)]
enum Storage {
    Scaled { scale: BigInt, values: Vec<i64> },
    Exact(Vec<BigRational>),
}

/// A finite metric space: `n` points, an exact symmetric distance matrix,
/// and a probability weight per point (uniform unless stated).
#[derive(Debug, Clone)]
pub struct FiniteMetricSpace {
    n: usize,
    storage: Storage,
    /// `None` means uniform `1/n`.
    weights: Option<Vec<BigRational>>,
}

/// Validate a distance matrix (and optional weights) into a metric space.
///
/// Checks every invariant exhaustively, including the full O(n^3) triangle
/// scan. Error values carry the first witness in lexicographic index order.
pub fn validate_metric(
    matrix: &[Vec<BigRational>],
    weights: Option<&[BigRational]>,
) -> Result<FiniteMetricSpace, MetricError> {
    let n = matrix.len();
    for (row, entries) in matrix.iter().enumerate() {
        if entries.len() != n {
            return Err(MetricError::NotSquare {
                row,
                len: entries.len(),
                expected: n,
            });
        }
    }
    for i in 0..n {
        if !matrix[i][i].is_zero() {
            return Err(MetricError::NonzeroDiagonal { i });
        }
        for j in (i + 1)..n {
            if matrix[i][j] != matrix[j][i] {
                return Err(MetricError::Asymmetric { i, j });
            }
            if matrix[i][j].is_negative() {
                return Err(MetricError::NegativeDistance { i, j });
            }
            if matrix[i][j].is_zero() {
                return Err(MetricError::ZeroOffDiagonal { i, j });
            }
        }
    }
    let weights = match weights {
        None => None,
        Some(w) => Some(validate_weights(n, w)?),
    };
    let storage = build_storage(n, matrix);
    let space = FiniteMetricSpace {
        n,
        storage,
        weights,
    };
    space.check_triangle()?;
    Ok(space)
}

fn validate_weights(n: usize, w: &[BigRational]) -> Result<Vec<BigRational>, MetricError> {
    if w.len() != n {
        return Err(MetricError::BadWeights(format!(
            "expected {n} weights, got {}",
            w.len()
        )));
    }
    let mut sum = BigRational::zero();
    for (i, wi) in w.iter().enumerate() {
        if !wi.is_positive() {
            return Err(MetricError::BadWeights(format!(
                "weight {i} is not positive"
            )));
        }
        sum += wi;
    }
    if !sum.is_one() {
        return Err(MetricError::BadWeights(format!(
            "weights sum to {}, not 1",
            crate::rational::ratio_string(&sum)
        )));
    }
    Ok(w.to_vec())
}

fn build_storage(n: usize, matrix: &[Vec<BigRational>]) -> Storage {
    let mut lcm = BigInt::one();
    for row in matrix {
        for entry in row {
            lcm = lcm.lcm(entry.denom());
            if lcm.bits() > 62 {
                return Storage::Exact(matrix.iter().flatten().cloned().collect());
            }
        }
    }
    let mut values = Vec::with_capacity(n * n);
    for row in matrix {
        for entry in row {
            let scaled = entry.numer() * (&lcm / entry.denom());
            match scaled.to_i64() {
                Some(v) => values.push(v),
                None => return Storage::Exact(matrix.iter().flatten().cloned().collect()),
            }
        }
    }
    Storage::Scaled { scale: lcm, values }
}

impl FiniteMetricSpace {
    /// Trusted constructor for shortest-path matrices produced by BFS.
    ///
    /// Symmetry, zero diagonal, and off-diagonal positivity are still
    /// verified (O(n^2)); the triangle inequality holds for shortest-path
    /// metrics by construction and is exercised against `validate_metric`
    /// in tests rather than rescanned on every call.
    pub(crate) fn from_shortest_path_rows(rows: &[Vec<u32>]) -> Result<Self, MetricError> {
        let n = rows.len();
        let mut values = vec![0i64; n * n];
        for (i, row) in rows.iter().enumerate() {
            debug_assert_eq!(row.len(), n);
            for (j, &d) in row.iter().enumerate() {
                values[i * n + j] = d as i64;
            }
        }
        for i in 0..n {
            if values[i * n + i] != 0 {
                return Err(MetricError::NonzeroDiagonal { i });
            }
            for j in (i + 1)..n {
                if values[i * n + j] != values[j * n + i] {
                    return Err(MetricError::Asymmetric { i, j });
                }
                if values[i * n + j] == 0 {
                    return Err(MetricError::ZeroOffDiagonal { i, j });
                }
            }
        }
        Ok(FiniteMetricSpace {
            n,
            storage: Storage::Scaled {
                scale: BigInt::one(),
                values,
            },
            weights: None,
        })
    }

    /// Trusted constructor for exact matrices built by in-crate generators
    /// (p-adic truncations). Structural invariants are checked; the caller
    /// is responsible for the triangle inequality.
    pub(crate) fn from_scaled_parts(
        n: usize,
        scale: BigInt,
        values: Vec<i64>,
    ) -> Result<Self, MetricError> {
        assert_eq!(values.len(), n * n);
        assert!(scale.is_positive());
        for i in 0..n {
            if values[i * n + i] != 0 {
                return Err(MetricError::NonzeroDiagonal { i });
            }
            for j in (i + 1)..n {
                if values[i * n + j] != values[j * n + i] {
                    return Err(MetricError::Asymmetric { i, j });
                }
                if values[i * n + j] <= 0 {
                    return Err(MetricError::ZeroOffDiagonal { i, j });
                }
            }
        }
        Ok(FiniteMetricSpace {
            n,
            storage: Storage::Scaled { scale, values },
            weights: None,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Exact distance between points `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> BigRational {
        match &self.storage {
            Storage::Scaled { scale, values } => {
                BigRational::new(BigInt::from(values[i * self.n + j]), scale.clone())
            }
            Storage::Exact(values) => values[i * self.n + j].clone(),
        }
    }

    /// The full matrix as exact rationals (row-major).
    pub fn matrix(&self) -> Vec<Vec<BigRational>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.distance(i, j)).collect())
            .collect()
    }

    pub fn weight(&self, i: usize) -> BigRational {
        match &self.weights {
            None => BigRational::new(BigInt::one(), BigInt::from(self.n)),
            Some(w) => w[i].clone(),
        }
    }

    pub fn has_uniform_weights(&self) -> bool {
        match &self.weights {
            None => true,
            Some(w) => {
                let u = BigRational::new(BigInt::one(), BigInt::from(self.n));
                w.iter().all(|wi| *wi == u)
            }
        }
    }

    /// `mu = 1 - sum of m(x)^2`: the product-measure mass off the diagonal.
    pub fn mu(&self) -> BigRational {
        match &self.weights {
            None => {
                let n = BigInt::from(self.n);
                BigRational::one() - BigRational::new(BigInt::one(), n)
            }
            Some(w) => {
                let mut s = BigRational::zero();
                for wi in w {
                    s += wi * wi;
                }
                BigRational::one() - s
            }
        }
    }

    /// Maximum pairwise distance; zero for the one-point space.
    pub fn diameter(&self) -> BigRational {
        match &self.storage {
            Storage::Scaled { scale, values } => {
                let max = values.iter().copied().max().unwrap_or(0);
                BigRational::new(BigInt::from(max), scale.clone())
            }
            Storage::Exact(values) => values
                .iter()
                .max()
                .cloned()
                .unwrap_or_else(BigRational::zero),
        }
    }

    /// Average distance, exactly: `A` with the diagonal, `A-bar = A / mu` without.
    pub fn average_distance(&self, mode: AverageMode) -> Result<BigRational, MetricError> {
        let a = self.average_with_diagonal();
        match mode {
            AverageMode::WithDiagonal => Ok(a),
            AverageMode::OffDiagonal => {
                if self.n < 2 {
                    return Err(MetricError::OffDiagonalUndefined);
                }
                Ok(a / self.mu())
            }
        }
    }

    fn average_with_diagonal(&self) -> BigRational {
        match (&self.storage, &self.weights) {
            (Storage::Scaled { scale, values }, None) => {
                let total = sum_i64(values);
                let n2 = BigInt::from(self.n) * BigInt::from(self.n);
                BigRational::new(total, scale * n2)
            }
            (Storage::Exact(values), None) => {
                let mut total = BigRational::zero();
                for v in values {
                    total += v;
                }
                let n2 = BigInt::from(self.n) * BigInt::from(self.n);
                total / BigRational::from_integer(n2)
            }
            _ => {
                let mut total = BigRational::zero();
                for i in 0..self.n {
                    let wi = self.weight(i);
                    for j in 0..self.n {
                        total += &wi * self.weight(j) * self.distance(i, j);
                    }
                }
                total
            }
        }
    }

    /// Pushforward of the product measure under the distance function.
    pub fn distance_distribution(&self) -> DistanceDistribution {
        match (&self.storage, &self.weights) {
            (Storage::Scaled { scale, values }, None) => {
                let max = values.iter().copied().max().unwrap_or(0);
                let n2 = BigInt::from(self.n) * BigInt::from(self.n);
                let entries: Vec<(BigRational, BigRational)> = if (0..=(1 << 22)).contains(&max) {
                    let mut counts = vec![0u64; max as usize + 1];
                    for &v in values {
                        counts[v as usize] += 1;
                    }
                    counts
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c > 0)
                        .map(|(v, &c)| {
                            (
                                BigRational::new(BigInt::from(v), scale.clone()),
                                BigRational::new(BigInt::from(c), n2.clone()),
                            )
                        })
                        .collect()
                } else {
                    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
                    for &v in values {
                        *counts.entry(v).or_insert(0) += 1;
                    }
                    counts
                        .into_iter()
                        .map(|(v, c)| {
                            (
                                BigRational::new(BigInt::from(v), scale.clone()),
                                BigRational::new(BigInt::from(c), n2.clone()),
                            )
                        })
                        .collect()
                };
                DistanceDistribution::from_entries(entries)
            }
            _ => {
                let mut masses: BTreeMap<BigRational, BigRational> = BTreeMap::new();
                for i in 0..self.n {
                    let wi = self.weight(i);
                    for j in 0..self.n {
                        let mass = &wi * self.weight(j);
                        *masses
                            .entry(self.distance(i, j))
                            .or_insert_with(BigRational::zero) += mass;
                    }
                }
                DistanceDistribution::from_entries(masses.into_iter().collect())
            }
        }
    }

    /// Diameter plus, for each point, the ascending list of its antipodes
    /// (points at exactly diameter distance).
    pub(crate) fn diameter_and_antipodes(&self) -> (BigRational, Vec<Vec<usize>>) {
        match &self.storage {
            Storage::Scaled { scale, values } => {
                let max = values.iter().copied().max().unwrap_or(0);
                let sets = (0..self.n)
                    .map(|i| {
                        let row = &values[i * self.n..(i + 1) * self.n];
                        row.iter()
                            .enumerate()
                            .filter(|(_, &v)| v == max)
                            .map(|(j, _)| j)
                            .collect()
                    })
                    .collect();
                (BigRational::new(BigInt::from(max), scale.clone()), sets)
            }
            Storage::Exact(values) => {
                let max = values
                    .iter()
                    .max()
                    .cloned()
                    .unwrap_or_else(BigRational::zero);
                let sets = (0..self.n)
                    .map(|i| {
                        (0..self.n)
                            .filter(|&j| values[i * self.n + j] == max)
                            .collect()
                    })
                    .collect();
                (max, sets)
            }
        }
    }

    /// Does `d(x,y) + d(y,z) == target` hold exactly?
    pub(crate) fn sum_equals(&self, x: usize, y: usize, z: usize, target: &BigRational) -> bool {
        match &self.storage {
            Storage::Scaled { scale, values } => {
                let lhs =
                    values[x * self.n + y] as i128 + values[y * self.n + z] as i128;
                // target is known to be a value of this space, so it has the
                // same scale after reduction; compare via cross-multiplication.
                let num = target.numer();
                let den = target.denom();
                match (num.to_i128(), den.to_i128(), scale.to_i128()) {
                    (Some(tn), Some(td), Some(s)) => lhs * td == tn * s,
                    _ => {
                        let sum = BigRational::new(BigInt::from(lhs), scale.clone());
                        sum == *target
                    }
                }
            }
            Storage::Exact(values) => {
                &values[x * self.n + y] + &values[y * self.n + z] == *target
            }
        }
    }

    pub(crate) fn distances_equal(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        match &self.storage {
            Storage::Scaled { values, .. } => {
                values[a.0 * self.n + a.1] == values[b.0 * self.n + b.1]
            }
            Storage::Exact(values) => values[a.0 * self.n + a.1] == values[b.0 * self.n + b.1],
        }
    }

    /// Dense distance-class ids (row-major): equal distances share an id.
    /// Used by the isometry search to treat the space as a colored complete
    /// graph.
    pub(crate) fn distance_classes(&self) -> (Vec<u32>, usize) {
        match &self.storage {
            Storage::Scaled { values, .. } => {
                let mut distinct: Vec<i64> = values.to_vec();
                distinct.sort_unstable();
                distinct.dedup();
                let classes = values
                    .iter()
                    .map(|v| distinct.binary_search(v).unwrap() as u32)
                    .collect();
                (classes, distinct.len())
            }
            Storage::Exact(values) => {
                let mut distinct: Vec<&BigRational> = values.iter().collect();
                distinct.sort();
                distinct.dedup();
                let classes = values
                    .iter()
                    .map(|v| distinct.binary_search(&v).unwrap() as u32)
                    .collect();
                (classes, distinct.len())
            }
        }
    }

    /// Full ultrametric scan: `d(x,z) <= max(d(x,y), d(y,z))` for all triples.
    pub fn is_ultrametric(&self) -> bool {
        match &self.storage {
            Storage::Scaled { values, .. } => {
                let n = self.n;
                (0..n).into_par_iter().all(|x| {
                    let row_x = &values[x * n..(x + 1) * n];
                    (0..n).all(|z| {
                        let dxz = row_x[z];
                        (0..n).all(|y| {
                            let row_y = &values[y * n..(y + 1) * n];
                            dxz <= row_x[y].max(row_y[z])
                        })
                    })
                })
            }
            Storage::Exact(values) => {
                let n = self.n;
                (0..n).all(|x| {
                    (0..n).all(|z| {
                        (0..n).all(|y| {
                            values[x * n + z]
                                <= std::cmp::max(
                                    values[x * n + y].clone(),
                                    values[y * n + z].clone(),
                                )
                        })
                    })
                })
            }
        }
    }

    /// Exhaustive triangle scan. Returns the lexicographically first
    /// violation `(i,j,k)` meaning `d(i,j) > d(i,k) + d(k,j)`.
    fn check_triangle(&self) -> Result<(), MetricError> {
        let n = self.n;
        let violation = match &self.storage {
            Storage::Scaled { values, .. } => {
                let max = values.iter().copied().max().unwrap_or(0);
                if max <= i64::MAX / 2 {
                    (0..n)
                        .into_par_iter()
                        .filter_map(|i| {
                            let row_i = &values[i * n..(i + 1) * n];
                            for j in 0..n {
                                let dij = row_i[j];
                                let row_j = &values[j * n..(j + 1) * n];
                                if let Some(k) =
                                    (0..n).find(|&k| row_i[k] + row_j[k] < dij)
                                {
                                    return Some((i, j, k));
                                }
                            }
                            None
                        })
                        .min()
                } else {
                    (0..n)
                        .into_par_iter()
                        .filter_map(|i| {
                            let row_i = &values[i * n..(i + 1) * n];
                            for j in 0..n {
                                let dij = row_i[j] as i128;
                                let row_j = &values[j * n..(j + 1) * n];
                                if let Some(k) = (0..n)
                                    .find(|&k| (row_i[k] as i128) + (row_j[k] as i128) < dij)
                                {
                                    return Some((i, j, k));
                                }
                            }
                            None
                        })
                        .min()
                }
            }
            Storage::Exact(values) => {
                let mut found = None;
                'outer: for i in 0..n {
                    for j in 0..n {
                        let dij = &values[i * n + j];
                        for k in 0..n {
                            if *dij > &values[i * n + k] + &values[k * n + j] {
                                found = Some((i, j, k));
                                break 'outer;
                            }
                        }
                    }
                }
                found
            }
        };
        match violation {
            Some((i, j, k)) => Err(MetricError::TriangleViolation { i, j, k }),
            None => Ok(()),
        }
    }
}

fn sum_i64(values: &[i64]) -> BigInt {
    let mut acc: i128 = 0;
    for (idx, &v) in values.iter().enumerate() {
        match acc.checked_add(v as i128) {
            Some(next) => acc = next,
            None => {
                // Only reachable with adversarial magnitudes; finish the
                // tail in arbitrary precision.
                let mut big = BigInt::from(acc);
                for &w in &values[idx..] {
                    big += w;
                }
                return big;
            }
        }
    }
    BigInt::from(acc)
}

/// Distinct distance values with their exact probability masses under the
/// product measure, ascending by value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceDistribution {
    entries: Vec<(BigRational, BigRational)>,
    total: BigRational,
}

impl DistanceDistribution {
    /// Build from `(value, mass)` pairs; values must be strictly increasing
    /// and masses positive.
    pub fn from_entries(entries: Vec<(BigRational, BigRational)>) -> Self {
        for pair in entries.windows(2) {
            assert!(pair[0].0 < pair[1].0, "values must be strictly increasing");
        }
        let mut total = BigRational::zero();
        for (_, mass) in &entries {
            assert!(mass.is_positive(), "masses must be positive");
            total += mass;
        }
        DistanceDistribution { entries, total }
    }

    pub fn entries(&self) -> &[(BigRational, BigRational)] {
        &self.entries
    }

    /// Total pair weight accounted for (exactly 1 for a full distribution).
    pub fn total(&self) -> &BigRational {
        &self.total
    }

    /// Mass at an exact value; zero if the value does not occur.
    pub fn mass_at(&self, value: &BigRational) -> BigRational {
        match self
            .entries
            .binary_search_by(|(v, _)| v.cmp(value))
        {
            Ok(idx) => self.entries[idx].1.clone(),
            Err(_) => BigRational::zero(),
        }
    }

    /// Largest value carrying mass.
    pub fn max_value(&self) -> BigRational {
        self.entries
            .last()
            .map(|(v, _)| v.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Exact mean: `sum of value * mass`.
    pub fn mean(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for (v, m) in &self.entries {
            acc += v * m;
        }
        acc
    }

    /// Exact second moment: `sum of value^2 * mass`.
    pub fn second_moment(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for (v, m) in &self.entries {
            acc += v * v * m;
        }
        acc
    }

    /// `Pr(d <= a)`, exactly.
    pub fn cumulative_up_to(&self, a: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (v, m) in &self.entries {
            if v <= a {
                acc += m;
            }
        }
        acc
    }

    /// `Pr(d >= a)`, exactly.
    pub fn tail_from(&self, a: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (v, m) in &self.entries {
            if v >= a {
                acc += m;
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_ratio;

    pub(crate) fn rat(s: &str) -> BigRational {
        parse_ratio(s).unwrap()
    }

    pub(crate) fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|&v| BigRational::from_integer(BigInt::from(v)))
                    .collect()
            })
            .collect()
    }

    fn discrete(n: usize) -> FiniteMetricSpace {
        let matrix: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigRational::zero()
                        } else {
                            BigRational::one()
                        }
                    })
                    .collect()
            })
            .collect();
        validate_metric(&matrix, None).unwrap()
    }

    #[test]
    fn accepts_discrete_metric() {
        let space = discrete(3);
        assert_eq!(space.len(), 3);
        assert_eq!(space.diameter(), rat("1"));
    }

    #[test]
    fn accepts_one_point_space() {
        let space = validate_metric(&int_matrix(&[&[0]]), None).unwrap();
        assert_eq!(space.len(), 1);
        assert_eq!(space.diameter(), rat("0"));
        assert_eq!(
            space.average_distance(AverageMode::WithDiagonal).unwrap(),
            rat("0")
        );
        assert_eq!(
            space.average_distance(AverageMode::OffDiagonal),
            Err(MetricError::OffDiagonalUndefined)
        );
    }

    #[test]
    fn rejects_triangle_violation_with_witness() {
        // d(0,1)=5, d(1,2)=1, d(0,2)=10: 10 > 5 + 1.
        let matrix = int_matrix(&[&[0, 5, 10], &[5, 0, 1], &[10, 1, 0]]);
        let err = validate_metric(&matrix, None).unwrap_err();
        assert_eq!(err, MetricError::TriangleViolation { i: 0, j: 2, k: 1 });
    }

    #[test]
    fn rejects_structural_defects() {
        let asym = int_matrix(&[&[0, 1], &[2, 0]]);
        assert_eq!(
            validate_metric(&asym, None).unwrap_err(),
            MetricError::Asymmetric { i: 0, j: 1 }
        );
        let diag = int_matrix(&[&[1, 1], &[1, 0]]);
        assert_eq!(
            validate_metric(&diag, None).unwrap_err(),
            MetricError::NonzeroDiagonal { i: 0 }
        );
        let neg = int_matrix(&[&[0, -1], &[-1, 0]]);
        assert_eq!(
            validate_metric(&neg, None).unwrap_err(),
            MetricError::NegativeDistance { i: 0, j: 1 }
        );
        let zero = int_matrix(&[&[0, 0], &[0, 0]]);
        assert_eq!(
            validate_metric(&zero, None).unwrap_err(),
            MetricError::ZeroOffDiagonal { i: 0, j: 1 }
        );
    }

    #[test]
    fn rejects_bad_weights() {
        let matrix = int_matrix(&[&[0, 1], &[1, 0]]);
        let w = vec![rat("1/2"), rat("1/3")];
        assert!(matches!(
            validate_metric(&matrix, Some(&w)).unwrap_err(),
            MetricError::BadWeights(_)
        ));
        let w = vec![rat("1"), rat("0")];
        assert!(matches!(
            validate_metric(&matrix, Some(&w)).unwrap_err(),
            MetricError::BadWeights(_)
        ));
    }

    #[test]
    fn averages_and_mu_on_discrete_space() {
        let space = discrete(5);
        // K_5 under the discrete metric: A = (1 - 1/5) * 1 = 4/5, A-bar = 1.
        assert_eq!(
            space.average_distance(AverageMode::WithDiagonal).unwrap(),
            rat("4/5")
        );
        assert_eq!(
            space.average_distance(AverageMode::OffDiagonal).unwrap(),
            rat("1")
        );
        assert_eq!(space.mu(), rat("4/5"));
    }

    #[test]
    fn distribution_of_discrete_space() {
        let space = discrete(3);
        let dist = space.distance_distribution();
        assert_eq!(
            dist.entries(),
            &[(rat("0"), rat("1/3")), (rat("1"), rat("2/3"))]
        );
        assert_eq!(dist.total(), &rat("1"));
        assert_eq!(dist.mean(), rat("2/3"));
    }

    #[test]
    fn weighted_average_matches_direct_sum() {
        let matrix = int_matrix(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]);
        let w = vec![rat("1/2"), rat("1/4"), rat("1/4")];
        let space = validate_metric(&matrix, Some(&w)).unwrap();
        // Direct expansion: sum over ordered pairs of w_i * w_j * d_ij.
        let mut expected = BigRational::zero();
        for i in 0..3 {
            for j in 0..3 {
                expected += space.weight(i) * space.weight(j) * space.distance(i, j);
            }
        }
        assert_eq!(
            space.average_distance(AverageMode::WithDiagonal).unwrap(),
            expected
        );
        let dist = space.distance_distribution();
        assert_eq!(dist.mean(), expected);
        assert_eq!(dist.total(), &rat("1"));
        // Mass at zero is the diagonal mass: sum of w_i^2.
        assert_eq!(dist.mass_at(&rat("0")), rat("3/8"));
        assert_eq!(space.mu(), rat("5/8"));
    }

    #[test]
    fn rational_entries_round_trip() {
        let matrix = vec![
            vec![rat("0"), rat("1/2"), rat("1/4")],
            vec![rat("1/2"), rat("0"), rat("1/2")],
            vec![rat("1/4"), rat("1/2"), rat("0")],
        ];
        let space = validate_metric(&matrix, None).unwrap();
        assert_eq!(space.distance(0, 2), rat("1/4"));
        assert_eq!(space.diameter(), rat("1/2"));
        assert!(space.is_ultrametric());
    }

    #[test]
    fn ultrametric_detects_failure() {
        // Path metric on 3 points is not ultrametric: d(0,2)=2 > max(1,1).
        let matrix = int_matrix(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]);
        let space = validate_metric(&matrix, None).unwrap();
        assert!(!space.is_ultrametric());
    }
}
