//! Antipodality structure of finite metric spaces: tier classification,
//! antipodal-map extraction, involution property checks, distribution
//! symmetry, and the two extremal detectors.

use super::{DistanceDistribution, FiniteMetricSpace, MetricError};
use crate::metric::bounds::check_bounds;
use crate::symmetry::{AutomorphismSet, Perm};

use num_rational::BigRational;
use num_traits::Zero;

/// Hard cap on materialized strictness witnesses. Once a single violation is
/// known the tier can no longer be strict, so the scan stops at the cap and
/// sets `witnesses_truncated` instead of enumerating a cubic set.
pub const STRICTNESS_WITNESS_CAP: usize = 4096;

/// Classification ladder. Each tier requires every tier below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AntipodalityTier {
    NotAntipodal,
    Antipodal,
    UniquelyAntipodal,
    StrictlyAntipodal,
}

impl AntipodalityTier {
    pub fn as_str(self) -> &'static str {
        match self {
            AntipodalityTier::NotAntipodal => "NOT_ANTIPODAL",
            AntipodalityTier::Antipodal => "ANTIPODAL",
            AntipodalityTier::UniquelyAntipodal => "UNIQUELY_ANTIPODAL",
            AntipodalityTier::StrictlyAntipodal => "STRICTLY_ANTIPODAL",
        }
    }
}

impl std::fmt::Display for AntipodalityTier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How the "some isometry takes x to its antipode" requirement is discharged.
///
/// Construction-backed spaces (Cayley graphs, p-adic truncations) are
/// transitive outright; otherwise an orbit partition from a verified
/// automorphism/isometry set is consulted.
#[derive(Debug, Clone)]
pub struct HomogeneityEvidence {
    kind: EvidenceKind,
    complete: bool,
    source: String,
}

#[derive(Debug, Clone)]
enum EvidenceKind {
    Transitive,
    Orbits(Vec<usize>),
}

impl HomogeneityEvidence {
    /// Transitivity guaranteed by how the space was built.
    pub fn by_construction(source: impl Into<String>) -> Self {
        HomogeneityEvidence {
            kind: EvidenceKind::Transitive,
            complete: true,
            source: source.into(),
        }
    }

    /// Orbit partition of a verified automorphism set. `complete` means the
    /// orbits are exact (the search was not truncated), so a failed orbit
    /// lookup refutes rather than remaining open.
    pub fn from_orbits(orbit_ids: Vec<usize>, complete: bool, source: impl Into<String>) -> Self {
        HomogeneityEvidence {
            kind: EvidenceKind::Orbits(orbit_ids),
            complete,
            source: source.into(),
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Does this evidence certify a transitive action on all `n` points?
    pub fn certifies_transitive(&self, n: usize) -> bool {
        match &self.kind {
            EvidenceKind::Transitive => true,
            EvidenceKind::Orbits(ids) => {
                ids.len() == n && ids.iter().all(|&id| id == ids[0])
            }
        }
    }

    fn same_orbit(&self, x: usize, y: usize) -> bool {
        match &self.kind {
            EvidenceKind::Transitive => true,
            EvidenceKind::Orbits(ids) => ids[x] == ids[y],
        }
    }
}

/// A triple `(x, y, antipode)` with `d(x,y) + d(y,antipode) != D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrictnessWitness {
    pub x: usize,
    pub y: usize,
    pub antipode: usize,
}

#[derive(Debug, Clone)]
pub struct AntipodalityReport {
    pub tier: AntipodalityTier,
    /// Per-point antipode indices, ascending.
    pub antipodes: Vec<Vec<usize>>,
    /// The involution x -> O_x, present exactly when every antipode set is a
    /// singleton.
    pub antipodal_map: Option<Perm>,
    /// Violations of `D = d(x,y) + d(y,O_x)`, capped at
    /// [`STRICTNESS_WITNESS_CAP`].
    pub witnesses: Vec<StrictnessWitness>,
    pub witnesses_truncated: bool,
    /// How the isometry-to-antipode requirement was discharged (or why not).
    pub homogeneity_evidence: String,
    pub warnings: Vec<String>,
}

/// Classify the antipodality tier of a space.
///
/// The isometry requirement in the antipodal definition is discharged from
/// `evidence`; without evidence the classification cannot certify the
/// `ANTIPODAL` tier and errors with `EvidenceRequired` (unless some point has
/// no antipode at all, which refutes outright).
pub fn classify_antipodality(
    space: &FiniteMetricSpace,
    evidence: Option<&HomogeneityEvidence>,
) -> Result<AntipodalityReport, MetricError> {
    let n = space.len();
    if n < 2 {
        return Err(MetricError::NotEnoughPoints);
    }
    let mut warnings = Vec::new();
    if !space.has_uniform_weights() {
        warnings.push(
            "weights are non-uniform: the bound and symmetry theorems assume an \
             isometry-invariant measure, which is uniform on a homogeneous finite space"
                .to_string(),
        );
    }

    let (diameter, antipodes) = space.diameter_and_antipodes();

    if let Some(x) = antipodes.iter().position(|set| set.is_empty()) {
        return Ok(AntipodalityReport {
            tier: AntipodalityTier::NotAntipodal,
            antipodes,
            antipodal_map: None,
            witnesses: Vec::new(),
            witnesses_truncated: false,
            homogeneity_evidence: format!(
                "not consulted: point {x} has no antipode at distance {}",
                crate::rational::ratio_string(&diameter)
            ),
            warnings,
        });
    }

    // Every point has an antipode; now the definition requires an isometry
    // taking each point to one of its antipodes.
    let evidence_note;
    match evidence {
        None => {
            return Err(MetricError::EvidenceRequired(
                "every point has an antipode, but no isometry evidence was supplied to \
                 discharge the antipodal definition"
                    .to_string(),
            ))
        }
        Some(ev) => {
            let undischarged: Vec<usize> = (0..n)
                .filter(|&x| !antipodes[x].iter().any(|&y| ev.same_orbit(x, y)))
                .collect();
            if undischarged.is_empty() {
                evidence_note = format!("discharged via {}", ev.source());
            } else if ev.is_complete() {
                let x = undischarged[0];
                return Ok(AntipodalityReport {
                    tier: AntipodalityTier::NotAntipodal,
                    antipodes,
                    antipodal_map: None,
                    witnesses: Vec::new(),
                    witnesses_truncated: false,
                    homogeneity_evidence: format!(
                        "refuted via {}: no isometry takes point {x} to any of its antipodes",
                        ev.source()
                    ),
                    warnings,
                });
            } else {
                return Err(MetricError::EvidenceRequired(format!(
                    "orbit evidence from {} is truncated and does not cover point {}",
                    ev.source(),
                    undischarged[0]
                )));
            }
        }
    }

    let unique = antipodes.iter().all(|set| set.len() == 1);
    let (witnesses, witnesses_truncated) = strictness_witnesses(space, &diameter, &antipodes);
    let strict = witnesses.is_empty();
    debug_assert!(!strict || unique, "strictness must force unique antipodes");

    let tier = if strict {
        AntipodalityTier::StrictlyAntipodal
    } else if unique {
        AntipodalityTier::UniquelyAntipodal
    } else {
        AntipodalityTier::Antipodal
    };

    let antipodal_map = if unique {
        let images: Vec<u32> = antipodes.iter().map(|set| set[0] as u32).collect();
        Some(Perm::from_images(images).expect("antipode map must be a permutation"))
    } else {
        None
    };

    Ok(AntipodalityReport {
        tier,
        antipodes,
        antipodal_map,
        witnesses,
        witnesses_truncated,
        homogeneity_evidence: evidence_note,
        warnings,
    })
}

/// Enumerate triples violating `D = d(x,y) + d(y,O_x)` in lexicographic
/// `(x, O_x, y)` order, stopping at the cap.
fn strictness_witnesses(
    space: &FiniteMetricSpace,
    diameter: &BigRational,
    antipodes: &[Vec<usize>],
) -> (Vec<StrictnessWitness>, bool) {
    let n = space.len();
    let mut witnesses = Vec::new();
    match &space.storage {
        super::Storage::Scaled { values, .. } => {
            // d(y, O_x) = d(O_x, y) by symmetry, so both factors scan
            // contiguous rows. The diameter is the maximum entry.
            let dmax = values.iter().copied().max().unwrap_or(0);
            for (x, set) in antipodes.iter().enumerate() {
                let row_x = &values[x * n..(x + 1) * n];
                for &ox in set {
                    let row_ox = &values[ox * n..(ox + 1) * n];
                    for y in 0..n {
                        if row_x[y] + row_ox[y] != dmax {
                            witnesses.push(StrictnessWitness { x, y, antipode: ox });
                            if witnesses.len() >= STRICTNESS_WITNESS_CAP {
                                return (witnesses, true);
                            }
                        }
                    }
                }
            }
        }
        super::Storage::Exact(_) => {
            for (x, set) in antipodes.iter().enumerate() {
                for &ox in set {
                    for y in 0..n {
                        if !space.sum_equals(x, y, ox, diameter) {
                            witnesses.push(StrictnessWitness { x, y, antipode: ox });
                            if witnesses.len() >= STRICTNESS_WITNESS_CAP {
                                return (witnesses, true);
                            }
                        }
                    }
                }
            }
        }
    }
    (witnesses, false)
}

/// Extract the antipodal map of a uniquely antipodal space and verify it is
/// an isometry.
///
/// The returned permutation satisfies `O(O(x)) = x` and `O(x) != x`; the
/// distance-preservation check runs over all pairs and fails with the first
/// violating pair in index order (a theorem guarantees it for strictly
/// antipodal spaces, so a failure there signals a non-strict space).
pub fn antipodal_map(space: &FiniteMetricSpace) -> Result<Perm, MetricError> {
    let n = space.len();
    if n < 2 {
        return Err(MetricError::NotEnoughPoints);
    }
    let (_, antipodes) = space.diameter_and_antipodes();
    for (point, set) in antipodes.iter().enumerate() {
        if set.len() != 1 {
            return Err(MetricError::NotUniquelyAntipodal {
                point,
                count: set.len(),
            });
        }
    }
    let images: Vec<u32> = antipodes.iter().map(|set| set[0] as u32).collect();
    let map = Perm::from_images(images).expect("antipode map must be a permutation");
    debug_assert!((0..n).all(|x| map.apply(map.apply(x)) == x));
    debug_assert!((0..n).all(|x| map.apply(x) != x));
    match &space.storage {
        super::Storage::Scaled { values, .. } => {
            for x in 0..n {
                let row_x = &values[x * n..(x + 1) * n];
                let row_mx = &values[map.apply(x) * n..(map.apply(x) + 1) * n];
                for y in (x + 1)..n {
                    if row_x[y] != row_mx[map.apply(y)] {
                        return Err(MetricError::NotIsometry { x, y });
                    }
                }
            }
        }
        super::Storage::Exact(_) => {
            for x in 0..n {
                for y in (x + 1)..n {
                    if !space.distances_equal((x, y), (map.apply(x), map.apply(y))) {
                        return Err(MetricError::NotIsometry { x, y });
                    }
                }
            }
        }
    }
    Ok(map)
}

/// Structural properties of a candidate involution, checked one by one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvolutionReport {
    pub is_involution: bool,
    pub fixed_point_free: bool,
    pub is_isometry: bool,
    /// Commutes with every supplied generator. Sound but incomplete as a
    /// centrality check; sufficient because the generators generate.
    pub commutes_with_generators: bool,
    pub even_cardinality: bool,
}

impl InvolutionReport {
    pub fn all_hold(&self) -> bool {
        self.is_involution
            && self.fixed_point_free
            && self.is_isometry
            && self.commutes_with_generators
            && self.even_cardinality
    }
}

/// Check the involution-and-centrality package for a candidate antipodal map.
/// For a strictly antipodal space every field must come back `true`.
pub fn verify_involution_properties(
    map: &Perm,
    space: &FiniteMetricSpace,
    generators: &AutomorphismSet,
) -> Result<InvolutionReport, MetricError> {
    let n = space.len();
    if map.degree() != n {
        return Err(MetricError::DimensionMismatch {
            got: map.degree(),
            expected: n,
        });
    }
    if generators.degree() != n {
        return Err(MetricError::DimensionMismatch {
            got: generators.degree(),
            expected: n,
        });
    }
    let is_involution = (0..n).all(|x| map.apply(map.apply(x)) == x);
    let fixed_point_free = (0..n).all(|x| map.apply(x) != x);
    let is_isometry = (0..n).all(|x| {
        ((x + 1)..n).all(|y| space.distances_equal((x, y), (map.apply(x), map.apply(y))))
    });
    let commutes_with_generators = generators
        .generators()
        .iter()
        .all(|g| g.compose(map) == map.compose(g));
    Ok(InvolutionReport {
        is_involution,
        fixed_point_free,
        is_isometry,
        commutes_with_generators,
        even_cardinality: n % 2 == 0,
    })
}

/// Outcome of the distribution symmetry test `mass(v) = mass(D - v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryReport {
    pub pass: bool,
    /// Smallest value whose reflected mass differs.
    pub first_violation: Option<BigRational>,
}

/// Exact symmetry check of a distance distribution about `D/2`:
/// `mass(v) == mass(D - v)` for every occurring value, which is equivalent to
/// `Pr(d <= a) = Pr(d >= D - a)` for all `a`.
///
/// `diameter` must dominate every value in the distribution.
pub fn symmetry_check(dist: &DistanceDistribution, diameter: &BigRational) -> SymmetryReport {
    assert!(
        dist.entries().is_empty() || *diameter >= dist.max_value(),
        "diameter must be at least the largest distribution value"
    );
    for (value, mass) in dist.entries() {
        let reflected = diameter - value;
        if dist.mass_at(&reflected) != *mass {
            return SymmetryReport {
                pass: false,
                first_violation: Some(value.clone()),
            };
        }
    }
    SymmetryReport {
        pass: true,
        first_violation: None,
    }
}

/// Detect the upper-extremal case: a scalar multiple of the discrete metric
/// under uniform weights. Returns the scale when detected (`0` for the
/// degenerate one-point space).
pub fn detect_extremal_upper(space: &FiniteMetricSpace) -> Option<BigRational> {
    let n = space.len();
    if n == 1 {
        return Some(BigRational::zero());
    }
    if !space.has_uniform_weights() {
        return None;
    }
    let scale = space.distance(0, 1);
    for i in 0..n {
        for j in (i + 1)..n {
            if !space.distances_equal((0, 1), (i, j)) {
                return None;
            }
        }
    }
    Some(scale)
}

/// Detect the lower-extremal case: is the space strictly antipodal?
///
/// On inputs whose evidence certifies transitivity, the result is
/// cross-checked against exact bound tightness (`A == D/2`); a mismatch is a
/// theorem violation and reported as `InconsistentWithBound`.
pub fn detect_extremal_lower(
    space: &FiniteMetricSpace,
    evidence: &HomogeneityEvidence,
) -> Result<bool, MetricError> {
    let report = classify_antipodality(space, Some(evidence))?;
    let strict = report.tier == AntipodalityTier::StrictlyAntipodal;
    if evidence.certifies_transitive(space.len()) {
        let bounds = check_bounds(space);
        if strict != bounds.lower_tight {
            return Err(MetricError::InconsistentWithBound(format!(
                "strictly antipodal = {strict} but A == D/2 is {} (A = {}, D = {})",
                bounds.lower_tight,
                crate::rational::ratio_string(&bounds.average),
                crate::rational::ratio_string(&bounds.diameter),
            )));
        }
    }
    Ok(strict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::tests::{int_matrix, rat};
    use crate::metric::validate_metric;

    fn transitive() -> HomogeneityEvidence {
        HomogeneityEvidence::by_construction("test fixture")
    }

    /// C_4 shortest-path metric: strictly antipodal, map = rotation by 2.
    fn c4() -> FiniteMetricSpace {
        let m = int_matrix(&[&[0, 1, 2, 1], &[1, 0, 1, 2], &[2, 1, 0, 1], &[1, 2, 1, 0]]);
        validate_metric(&m, None).unwrap()
    }

    /// C_5 shortest-path metric: antipodal, two antipodes per point.
    fn c5() -> FiniteMetricSpace {
        let m = int_matrix(&[
            &[0, 1, 2, 2, 1],
            &[1, 0, 1, 2, 2],
            &[2, 1, 0, 1, 2],
            &[2, 2, 1, 0, 1],
            &[1, 2, 2, 1, 0],
        ]);
        validate_metric(&m, None).unwrap()
    }

    #[test]
    fn c4_is_strictly_antipodal() {
        let report = classify_antipodality(&c4(), Some(&transitive())).unwrap();
        assert_eq!(report.tier, AntipodalityTier::StrictlyAntipodal);
        assert!(report.witnesses.is_empty());
        let map = report.antipodal_map.unwrap();
        assert_eq!(map.images(), &[2, 3, 0, 1]);
    }

    #[test]
    fn c5_is_antipodal_but_not_unique() {
        let report = classify_antipodality(&c5(), Some(&transitive())).unwrap();
        assert_eq!(report.tier, AntipodalityTier::Antipodal);
        assert_eq!(report.antipodes[0], vec![2, 3]);
        assert!(!report.witnesses.is_empty());
        assert!(report.antipodal_map.is_none());
        assert_eq!(
            antipodal_map(&c5()).unwrap_err(),
            MetricError::NotUniquelyAntipodal { point: 0, count: 2 }
        );
    }

    #[test]
    fn path_is_not_antipodal() {
        // Middle vertex of P_3 has no point at distance D = 2.
        let m = int_matrix(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]);
        let space = validate_metric(&m, None).unwrap();
        let report = classify_antipodality(&space, Some(&transitive())).unwrap();
        assert_eq!(report.tier, AntipodalityTier::NotAntipodal);
        assert!(report.antipodes[1].is_empty());
    }

    #[test]
    fn evidence_is_required_when_absent() {
        assert!(matches!(
            classify_antipodality(&c4(), None),
            Err(MetricError::EvidenceRequired(_))
        ));
    }

    #[test]
    fn orbit_evidence_gates_the_antipodal_tier() {
        // Pretend points 0 and 2 of C_4 are in different orbits: complete
        // orbit evidence then refutes the antipodal definition.
        let ev = HomogeneityEvidence::from_orbits(vec![0, 1, 0, 1], true, "fixture orbits");
        let report = classify_antipodality(&c4(), Some(&ev)).unwrap();
        assert_eq!(report.tier, AntipodalityTier::StrictlyAntipodal);
        let ev = HomogeneityEvidence::from_orbits(vec![0, 1, 2, 3], true, "fixture orbits");
        let report = classify_antipodality(&c4(), Some(&ev)).unwrap();
        assert_eq!(report.tier, AntipodalityTier::NotAntipodal);
        let ev = HomogeneityEvidence::from_orbits(vec![0, 1, 2, 3], false, "fixture orbits");
        assert!(matches!(
            classify_antipodality(&c4(), Some(&ev)),
            Err(MetricError::EvidenceRequired(_))
        ));
    }

    #[test]
    fn antipodal_map_checks_isometry() {
        let map = antipodal_map(&c4()).unwrap();
        assert_eq!(map.images(), &[2, 3, 0, 1]);
    }

    #[test]
    fn symmetry_check_passes_on_c4_and_fails_on_p3() {
        let dist = c4().distance_distribution();
        let report = symmetry_check(&dist, &rat("2"));
        assert!(report.pass);

        let m = int_matrix(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]);
        let p3 = validate_metric(&m, None).unwrap();
        let dist = p3.distance_distribution();
        assert_eq!(
            dist.entries(),
            &[
                (rat("0"), rat("1/3")),
                (rat("1"), rat("4/9")),
                (rat("2"), rat("2/9"))
            ]
        );
        let report = symmetry_check(&dist, &rat("2"));
        assert!(!report.pass);
        assert_eq!(report.first_violation, Some(rat("0")));
    }

    #[test]
    fn extremal_upper_detects_discrete_scalings() {
        let m = int_matrix(&[&[0, 7, 7], &[7, 0, 7], &[7, 7, 0]]);
        let space = validate_metric(&m, None).unwrap();
        assert_eq!(detect_extremal_upper(&space), Some(rat("7")));
        assert_eq!(detect_extremal_upper(&c4()), None);
        let one_point = validate_metric(&int_matrix(&[&[0]]), None).unwrap();
        assert_eq!(detect_extremal_upper(&one_point), Some(rat("0")));
    }

    #[test]
    fn extremal_lower_matches_bound_tightness() {
        assert!(detect_extremal_lower(&c4(), &transitive()).unwrap());
        assert!(!detect_extremal_lower(&c5(), &transitive()).unwrap());
    }

    #[test]
    fn involution_properties_of_c12_rotation() {
        use crate::graph::{apsp_metric, cycle};
        use crate::symmetry::AutomorphismSet;

        let g = cycle(12).unwrap();
        let space = apsp_metric(&g).unwrap();
        let rotation =
            Perm::from_images((0..12).map(|v| ((v + 1) % 12) as u32).collect()).unwrap();
        let reflection =
            Perm::from_images((0..12).map(|v| ((12 - v) % 12) as u32).collect()).unwrap();
        let gens = AutomorphismSet::for_graph(&g, vec![rotation, reflection]).unwrap();

        // Rotation by 6 is the unique central involution of the dihedral
        // group: all properties hold against both generators.
        let map = antipodal_map(&space).unwrap();
        assert_eq!(map.apply(0), 6);
        let report = verify_involution_properties(&map, &space, &gens).unwrap();
        assert!(report.all_hold());

        // The identity fixes everything.
        let report =
            verify_involution_properties(&Perm::identity(12), &space, &gens).unwrap();
        assert!(report.is_involution && !report.fixed_point_free);

        // Dimension mismatch is rejected.
        assert!(matches!(
            verify_involution_properties(&Perm::identity(5), &space, &gens),
            Err(MetricError::DimensionMismatch { got: 5, expected: 12 })
        ));
    }
}
