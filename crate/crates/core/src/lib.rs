//! Exact and statistical analysis of distance distributions on homogeneous
//! compact metric spaces.
//!
//! The library computes and certifies, on finite metric spaces and
//! vertex-transitive graphs:
//!
//! * the diameter/average bounds `D/2 <= A <= mu*D` and the squared-distance
//!   companion `D^2/8 <= E[d^2] <= D^2`, as exact rational comparisons;
//! * the antipodality ladder (antipodal, uniquely antipodal, strictly
//!   antipodal), the antipodal involution, and its centrality properties;
//! * symmetry of the distance distribution about `D/2`;
//! * the two extremal cases (scaled discrete metric; strictly antipodal
//!   spaces);
//!
//! and, statistically with reproducible seeds, the continuous examples:
//! spheres under the spherical metric and truncations of the p-adic
//! integers.
//!
//! Finite-space quantities are arbitrary-precision rationals throughout;
//! floating point appears only in Monte Carlo estimates, whose tolerances
//! are expressed in standard errors.

pub mod cli;
pub mod continuous;
pub mod graph;
pub mod io;
pub mod metric;
pub mod rational;
pub mod report;
pub mod symmetry;

pub use metric::{
    check_bounds, classify_antipodality, validate_metric, AntipodalityTier, BoundsReport,
    FiniteMetricSpace, HomogeneityEvidence,
};
pub use symmetry::{automorphism_search, isometry_search, AutomorphismSet, Perm};
