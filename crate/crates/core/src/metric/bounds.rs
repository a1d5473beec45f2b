//! Diameter/average bound checks: `D/2 <= A <= mu*D` and the squared-distance
//! companion `D^2/8 <= E[d^2] <= D^2`, all as exact comparisons.

use super::{AverageMode, FiniteMetricSpace};
use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact bound evaluation for one space. The bounds are theorems only for
/// homogeneous spaces; on arbitrary inputs the report records violations
/// without erroring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub diameter: BigRational,
    /// `A`: average over all ordered pairs, diagonal included.
    pub average: BigRational,
    /// `A-bar = A / mu`: average conditioned on distinct points. `None` for n = 1.
    pub average_off_diagonal: Option<BigRational>,
    /// `1 -` diagonal mass of the product measure (`1 - 1/n` when uniform).
    pub mu: BigRational,
    /// `E[d^2]` under the product measure.
    pub expected_square: BigRational,
    /// `D/2 <= A`.
    pub lower_ok: bool,
    /// `A <= mu*D`.
    pub upper_ok: bool,
    /// `D^2/8 <= E[d^2]`.
    pub sq_lower_ok: bool,
    /// `E[d^2] <= D^2`.
    pub sq_upper_ok: bool,
    /// `A == D/2`, exactly.
    pub lower_tight: bool,
    /// `A == mu*D`, exactly.
    pub upper_tight: bool,
}

impl BoundsReport {
    pub fn all_bounds_hold(&self) -> bool {
        self.lower_ok && self.upper_ok && self.sq_lower_ok && self.sq_upper_ok
    }
}

/// Evaluate every bound exactly. A one-point space yields `D = A = 0` with
/// all bounds trivially tight.
pub fn check_bounds(space: &FiniteMetricSpace) -> BoundsReport {
    let dist = space.distance_distribution();
    let diameter = dist.max_value();
    let average = dist.mean();
    let expected_square = dist.second_moment();
    let mu = space.mu();
    debug_assert_eq!(average, space.average_distance(AverageMode::WithDiagonal).unwrap());

    let two = BigRational::from_integer(BigInt::from(2));
    let eight = BigRational::from_integer(BigInt::from(8));
    let half_d = &diameter / &two;
    let mu_d = &mu * &diameter;
    let d_sq = &diameter * &diameter;

    let average_off_diagonal = if space.len() >= 2 {
        Some(&average / &mu)
    } else {
        None
    };

    BoundsReport {
        lower_ok: average >= half_d,
        upper_ok: average <= mu_d,
        sq_lower_ok: expected_square >= &d_sq / &eight,
        sq_upper_ok: expected_square <= d_sq,
        lower_tight: average == half_d,
        upper_tight: average == mu_d,
        diameter,
        average,
        average_off_diagonal,
        mu,
        expected_square,
    }
}
