//! The analysis pipeline and its machine-readable report.
//!
//! Every exact quantity is serialized as a `"p/q"` string plus a decimal
//! rendering; JSON numbers are never used for exact values, so tightness
//! flags survive serialization. Reports are self-contained: the input
//! descriptor (generator parameters, or file path plus content hash) is
//! enough to re-run them.

use crate::graph::{apsp_metric, transitive_distribution, Graph, GraphError};
use crate::metric::{
    check_bounds, classify_antipodality, detect_extremal_upper, symmetry_check,
    verify_involution_properties, AntipodalityTier, BoundsReport, DistanceDistribution,
    FiniteMetricSpace, HomogeneityEvidence, MetricError,
};
use crate::rational::ExactValue;
use crate::symmetry::{
    automorphism_search, is_vertex_transitive, isometry_search, AutomorphismSet, Transitivity,
    TransitivityRefutation, DEFAULT_SEARCH_BUDGET,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

pub const TOOL_NAME: &str = "antipode";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Total antipode-set entries above which the per-point lists are elided
/// from the report (the sizes histogram is kept).
const ANTIPODE_LIST_CAP: usize = 10_000;
/// Witness triples included in the report.
const WITNESS_REPORT_CAP: usize = 64;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputDescriptor {
    Family {
        family: String,
        params: BTreeMap<String, String>,
    },
    File {
        path: String,
        sha256: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct SpaceSummary {
    pub points: usize,
    /// "graph-metric" for shortest-path metrics, "metric" for raw matrices.
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<usize>,
    pub uniform_weights: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransitivitySummary {
    /// "certified" | "refuted" | "inconclusive" | "skipped"
    pub status: &'static str,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_nodes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_truncated: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsJson {
    pub diameter: ExactValue,
    pub average: ExactValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub average_off_diagonal: Option<ExactValue>,
    pub mu: ExactValue,
    pub expected_square: ExactValue,
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub sq_lower_ok: bool,
    pub sq_upper_ok: bool,
    pub lower_tight: bool,
    pub upper_tight: bool,
}

impl BoundsJson {
    fn from_report(report: &BoundsReport) -> Self {
        BoundsJson {
            diameter: ExactValue::new(&report.diameter),
            average: ExactValue::new(&report.average),
            average_off_diagonal: report.average_off_diagonal.as_ref().map(ExactValue::new),
            mu: ExactValue::new(&report.mu),
            expected_square: ExactValue::new(&report.expected_square),
            lower_ok: report.lower_ok,
            upper_ok: report.upper_ok,
            sq_lower_ok: report.sq_lower_ok,
            sq_upper_ok: report.sq_upper_ok,
            lower_tight: report.lower_tight,
            upper_tight: report.upper_tight,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DistributionEntry {
    pub value: ExactValue,
    pub mass: ExactValue,
}

fn distribution_json(dist: &DistanceDistribution) -> Vec<DistributionEntry> {
    dist.entries()
        .iter()
        .map(|(v, m)| DistributionEntry {
            value: ExactValue::new(v),
            mass: ExactValue::new(m),
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AntipodalityJson {
    Classified {
        tier: &'static str,
        /// "definition" for the per-point scan, "homogeneity-theorem" for
        /// the fast path (tier inferred from `A == D/2` on certified
        /// transitive input).
        method: &'static str,
        #[serde(skip_serializing_if = "Option::is_none")]
        antipodes: Option<Vec<Vec<usize>>>,
        /// Histogram of antipode-set sizes: size -> number of points.
        antipode_set_sizes: BTreeMap<usize, usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        antipodal_map: Option<String>,
        witnesses: Vec<[usize; 3]>,
        witnesses_truncated: bool,
        homogeneity_evidence: String,
    },
    EvidenceRequired {
        message: String,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct InvolutionJson {
    pub is_involution: bool,
    pub fixed_point_free: bool,
    pub is_isometry: bool,
    pub commutes_with_generators: bool,
    pub even_cardinality: bool,
    pub generator_count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetryJson {
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<ExactValue>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalJson {
    pub upper_discrete_scaling: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_scale: Option<ExactValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_strictly_antipodal: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub tool: ToolInfo,
    pub input: InputDescriptor,
    pub space: SpaceSummary,
    pub transitivity: TransitivitySummary,
    pub bounds: BoundsJson,
    pub distribution: Vec<DistributionEntry>,
    pub antipodality: AntipodalityJson,
    pub symmetry_check: SymmetryJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub involution: Option<InvolutionJson>,
    pub extremal: ExtremalJson,
    /// Theorem-check failures on certified-homogeneous inputs. Data, not a
    /// crash: populated entries mean either a non-homogeneous input slipped
    /// a certificate or an implementation bug.
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

/// Construction-time evidence: a transitivity guarantee plus verified
/// automorphisms (translations) usable for the centrality checks.
#[derive(Debug, Clone)]
pub struct ConstructionEvidence {
    pub evidence: HomogeneityEvidence,
    pub automorphisms: AutomorphismSet,
}

#[derive(Debug)]
pub enum PipelineBody {
    Graph {
        graph: Graph,
        construction: Option<ConstructionEvidence>,
    },
    Metric {
        space: FiniteMetricSpace,
        construction: Option<ConstructionEvidence>,
    },
}

#[derive(Debug)]
pub struct PipelineInput {
    pub descriptor: InputDescriptor,
    pub body: PipelineBody,
}

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    /// Node budget for automorphism/isometry search.
    pub budget: u64,
    /// Skip all symmetry evidence; antipodality degrades to
    /// `EvidenceRequired`.
    pub skip_automorphisms: bool,
    /// Require a transitivity certificate and analyze from a single BFS
    /// without materializing the matrix (graphs only).
    pub fast_path: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            budget: DEFAULT_SEARCH_BUDGET,
            skip_automorphisms: false,
            fast_path: false,
        }
    }
}

/// Run the full pipeline: (graphs: APSP or fast path) -> symmetry evidence ->
/// bounds -> antipodality -> distribution symmetry -> extremal detectors ->
/// theorem cross-checks.
pub fn analyze(input: PipelineInput, opts: &AnalyzeOptions) -> Result<AnalysisReport, PipelineError> {
    match input.body {
        PipelineBody::Graph {
            graph,
            construction,
        } => {
            if opts.fast_path {
                analyze_graph_fast(input.descriptor, &graph, construction, opts)
            } else {
                let space = apsp_metric(&graph)?;
                analyze_space(input.descriptor, space, Some(&graph), construction, opts)
            }
        }
        PipelineBody::Metric {
            space,
            construction,
        } => {
            if opts.fast_path {
                return Err(PipelineError::Graph(GraphError::BadParameter(
                    "the fast path requires a graph input".to_string(),
                )));
            }
            analyze_space(input.descriptor, space, None, construction, opts)
        }
    }
}

struct EvidencePack {
    evidence: Option<HomogeneityEvidence>,
    automorphisms: Option<AutomorphismSet>,
    summary: TransitivitySummary,
    certified: bool,
}

fn gather_evidence(
    graph: Option<&Graph>,
    space: Option<&FiniteMetricSpace>,
    construction: Option<ConstructionEvidence>,
    opts: &AnalyzeOptions,
) -> EvidencePack {
    if let Some(c) = construction {
        let n = c.automorphisms.degree();
        let certified = c.evidence.certifies_transitive(n);
        return EvidencePack {
            summary: TransitivitySummary {
                status: if certified { "certified" } else { "refuted" },
                detail: c.evidence.source().to_string(),
                orbit_count: Some(c.automorphisms.orbit_count()),
                search_nodes: None,
                search_truncated: None,
            },
            evidence: Some(c.evidence),
            automorphisms: Some(c.automorphisms),
            certified,
        };
    }
    if opts.skip_automorphisms {
        return EvidencePack {
            evidence: None,
            automorphisms: None,
            summary: TransitivitySummary {
                status: "skipped",
                detail: "automorphism search disabled".to_string(),
                orbit_count: None,
                search_nodes: None,
                search_truncated: None,
            },
            certified: false,
        };
    }
    let (auts, source) = match graph {
        Some(g) => (
            automorphism_search(g, opts.budget),
            "graph automorphism search (individualization-refinement)",
        ),
        None => (
            isometry_search(space.expect("graph or metric input"), opts.budget),
            "metric isometry search (distance-colored refinement)",
        ),
    };
    let (status, detail, certified) = match graph {
        Some(g) => match is_vertex_transitive(g, &auts) {
            Ok(Transitivity::Certified(cert)) => ("certified", cert.source, true),
            Ok(Transitivity::Refuted(TransitivityRefutation::MultipleOrbits {
                orbit_count,
            })) => (
                "refuted",
                format!("orbit partition has {orbit_count} classes"),
                false,
            ),
            Ok(Transitivity::Refuted(TransitivityRefutation::RefinementSplit {
                classes,
                witness,
            })) => (
                "refuted",
                format!(
                    "equitable refinement separates vertices {} and {} ({classes} classes)",
                    witness.0, witness.1
                ),
                false,
            ),
            Err(_) => (
                "inconclusive",
                "search truncated with incomplete orbits".to_string(),
                false,
            ),
        },
        None => {
            if auts.single_orbit() {
                (
                    "certified",
                    "isometry orbit closure covers all points".to_string(),
                    true,
                )
            } else if !auts.truncated {
                (
                    "refuted",
                    format!("isometry orbit partition has {} classes", auts.orbit_count()),
                    false,
                )
            } else {
                (
                    "inconclusive",
                    "search truncated with incomplete orbits".to_string(),
                    false,
                )
            }
        }
    };
    EvidencePack {
        evidence: Some(auts.evidence(source)),
        summary: TransitivitySummary {
            status,
            detail,
            orbit_count: Some(auts.orbit_count()),
            search_nodes: Some(auts.nodes_explored),
            search_truncated: Some(auts.truncated),
        },
        automorphisms: Some(auts),
        certified,
    }
}

fn analyze_space(
    descriptor: InputDescriptor,
    space: FiniteMetricSpace,
    graph: Option<&Graph>,
    construction: Option<ConstructionEvidence>,
    opts: &AnalyzeOptions,
) -> Result<AnalysisReport, PipelineError> {
    let pack = gather_evidence(graph, Some(&space), construction, opts);
    let bounds = check_bounds(&space);
    let dist = space.distance_distribution();
    let mut warnings = Vec::new();

    let mut map_perm = None;
    let antipodality = if space.len() < 2 {
        AntipodalityJson::Skipped {
            reason: "antipodality is undefined for a one-point space".to_string(),
        }
    } else {
        match classify_antipodality(&space, pack.evidence.as_ref()) {
            Ok(report) => {
                warnings.extend(report.warnings.iter().cloned());
                map_perm = report.antipodal_map.clone();
                antipodality_json(&report, "definition")
            }
            Err(MetricError::EvidenceRequired(message)) => {
                AntipodalityJson::EvidenceRequired { message }
            }
            Err(other) => return Err(other.into()),
        }
    };

    let symmetry = symmetry_check(&dist, &bounds.diameter);
    let involution =
        involution_json(&space, map_perm.as_ref(), pack.automorphisms.as_ref())?;
    let upper_scale = detect_extremal_upper(&space);
    let strict = matches!(
        &antipodality,
        AntipodalityJson::Classified { tier, .. } if *tier == AntipodalityTier::StrictlyAntipodal.as_str()
    );
    let lower = match &antipodality {
        AntipodalityJson::Classified { .. } => Some(strict),
        _ => None,
    };

    let violations = if pack.certified {
        theorem_violations(
            &bounds,
            &antipodality,
            &symmetry,
            involution.as_ref(),
            upper_scale.is_some(),
            space.len(),
            space.has_uniform_weights(),
        )
    } else {
        Vec::new()
    };

    Ok(AnalysisReport {
        tool: ToolInfo {
            name: TOOL_NAME,
            version: TOOL_VERSION,
        },
        input: descriptor,
        space: SpaceSummary {
            points: space.len(),
            kind: if graph.is_some() { "graph-metric" } else { "metric" },
            edges: graph.map(|g| g.edge_count()),
            uniform_weights: space.has_uniform_weights(),
        },
        transitivity: pack.summary,
        bounds: BoundsJson::from_report(&bounds),
        distribution: distribution_json(&dist),
        antipodality,
        symmetry_check: SymmetryJson {
            pass: symmetry.pass,
            first_violation: symmetry.first_violation.as_ref().map(ExactValue::new),
        },
        involution,
        extremal: ExtremalJson {
            upper_discrete_scaling: upper_scale.is_some(),
            upper_scale: upper_scale.as_ref().map(ExactValue::new),
            lower_strictly_antipodal: lower,
        },
        violations,
        warnings,
    })
}

/// Fast path: single BFS on a certified-transitive graph. Bounds and the
/// distribution come from the one BFS row; the antipodality tier follows
/// from the extremal theorem (`A == D/2` iff strictly antipodal on
/// homogeneous spaces) plus the antipode count at the base vertex.
fn analyze_graph_fast(
    descriptor: InputDescriptor,
    graph: &Graph,
    construction: Option<ConstructionEvidence>,
    opts: &AnalyzeOptions,
) -> Result<AnalysisReport, PipelineError> {
    let pack = gather_evidence(Some(graph), None, construction, opts);
    let evidence = pack
        .evidence
        .as_ref()
        .filter(|_| pack.certified)
        .ok_or_else(|| {
            GraphError::NoCertificate(
                "the fast path requires a transitivity certificate".to_string(),
            )
        })?;
    let dist = transitive_distribution(graph, evidence)?;
    let n = graph.vertex_count();

    let diameter = dist.max_value();
    let average = dist.mean();
    let expected_square = dist.second_moment();
    let mu = BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(n));
    let two = BigRational::from_integer(BigInt::from(2));
    let eight = BigRational::from_integer(BigInt::from(8));
    let half_d = &diameter / &two;
    let mu_d = &mu * &diameter;
    let d_sq = &diameter * &diameter;
    let bounds = BoundsReport {
        lower_ok: average >= half_d,
        upper_ok: average <= mu_d,
        sq_lower_ok: expected_square >= &d_sq / &eight,
        sq_upper_ok: expected_square <= d_sq,
        lower_tight: average == half_d,
        upper_tight: average == mu_d,
        average_off_diagonal: (n >= 2).then(|| &average / &mu),
        diameter,
        average,
        mu,
        expected_square,
    };

    // Antipode count at the base vertex: mass(D) * n points at diameter
    // distance from vertex 0 (every vertex matches by homogeneity).
    let antipode_count = if n >= 2 {
        let top_mass = dist.mass_at(&bounds.diameter);
        let count = &top_mass * BigRational::from_integer(BigInt::from(n));
        count.to_integer().try_into().unwrap_or(usize::MAX)
    } else {
        0
    };
    let tier = if n < 2 {
        None
    } else if bounds.lower_tight {
        Some(AntipodalityTier::StrictlyAntipodal)
    } else if antipode_count == 1 {
        Some(AntipodalityTier::UniquelyAntipodal)
    } else {
        Some(AntipodalityTier::Antipodal)
    };
    let antipodality = match tier {
        None => AntipodalityJson::Skipped {
            reason: "antipodality is undefined for a one-point space".to_string(),
        },
        Some(tier) => AntipodalityJson::Classified {
            tier: tier.as_str(),
            method: "homogeneity-theorem",
            antipodes: None,
            antipode_set_sizes: BTreeMap::from([(antipode_count, n)]),
            antipodal_map: None,
            witnesses: Vec::new(),
            witnesses_truncated: false,
            homogeneity_evidence: format!(
                "fast path over {}: tier from A == D/2 equivalence and the antipode count \
                 of the base vertex",
                evidence.source()
            ),
        },
    };

    let symmetry = symmetry_check(&dist, &bounds.diameter);
    // Discrete scaling iff the only positive distance is D itself.
    let upper_scale = (dist.entries().len() <= 2).then(|| bounds.diameter.clone());
    let strict = bounds.lower_tight && n >= 2;

    let violations = theorem_violations(
        &bounds,
        &antipodality,
        &symmetry,
        None,
        upper_scale.is_some(),
        n,
        true,
    );

    Ok(AnalysisReport {
        tool: ToolInfo {
            name: TOOL_NAME,
            version: TOOL_VERSION,
        },
        input: descriptor,
        space: SpaceSummary {
            points: n,
            kind: "graph-metric",
            edges: Some(graph.edge_count()),
            uniform_weights: true,
        },
        transitivity: pack.summary,
        bounds: BoundsJson::from_report(&bounds),
        distribution: distribution_json(&dist),
        antipodality,
        symmetry_check: SymmetryJson {
            pass: symmetry.pass,
            first_violation: symmetry.first_violation.as_ref().map(ExactValue::new),
        },
        involution: None,
        extremal: ExtremalJson {
            upper_discrete_scaling: upper_scale.is_some(),
            upper_scale: upper_scale.as_ref().map(ExactValue::new),
            lower_strictly_antipodal: (n >= 2).then_some(strict),
        },
        violations,
        warnings: Vec::new(),
    })
}

fn antipodality_json(
    report: &crate::metric::AntipodalityReport,
    method: &'static str,
) -> AntipodalityJson {
    let total: usize = report.antipodes.iter().map(|s| s.len()).sum();
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for set in &report.antipodes {
        *sizes.entry(set.len()).or_insert(0) += 1;
    }
    AntipodalityJson::Classified {
        tier: report.tier.as_str(),
        method,
        antipodes: (total <= ANTIPODE_LIST_CAP).then(|| report.antipodes.clone()),
        antipode_set_sizes: sizes,
        antipodal_map: report.antipodal_map.as_ref().map(|p| p.to_string()),
        witnesses: report
            .witnesses
            .iter()
            .take(WITNESS_REPORT_CAP)
            .map(|w| [w.x, w.y, w.antipode])
            .collect(),
        witnesses_truncated: report.witnesses_truncated
            || report.witnesses.len() > WITNESS_REPORT_CAP,
        homogeneity_evidence: report.homogeneity_evidence.clone(),
    }
}

fn involution_json(
    space: &FiniteMetricSpace,
    map: Option<&crate::symmetry::Perm>,
    auts: Option<&AutomorphismSet>,
) -> Result<Option<InvolutionJson>, PipelineError> {
    let (Some(map), Some(auts)) = (map, auts) else {
        return Ok(None);
    };
    let report = verify_involution_properties(map, space, auts)?;
    Ok(Some(InvolutionJson {
        is_involution: report.is_involution,
        fixed_point_free: report.fixed_point_free,
        is_isometry: report.is_isometry,
        commutes_with_generators: report.commutes_with_generators,
        even_cardinality: report.even_cardinality,
        generator_count: auts.generators().len(),
    }))
}

/// Cross-check the theorems on a certified-homogeneous input. Returns
/// human-readable violation strings (empty in a correct world).
fn theorem_violations(
    bounds: &BoundsReport,
    antipodality: &AntipodalityJson,
    symmetry: &crate::metric::SymmetryReport,
    involution: Option<&InvolutionJson>,
    upper_extremal: bool,
    n: usize,
    uniform: bool,
) -> Vec<String> {
    let mut violations = Vec::new();
    if !bounds.lower_ok {
        violations.push("lower bound D/2 <= A fails on a certified-homogeneous space".into());
    }
    if !bounds.upper_ok {
        violations.push("upper bound A <= mu*D fails on a certified-homogeneous space".into());
    }
    if !bounds.sq_lower_ok || !bounds.sq_upper_ok {
        violations.push("squared-distance bound D^2/8 <= E[d^2] <= D^2 fails".into());
    }
    if uniform && n >= 2 {
        // A-bar = A * n / (n-1) under uniform weights.
        let ratio = BigRational::new(BigInt::from(n), BigInt::from(n - 1));
        let expected = &bounds.average * ratio;
        if bounds.average_off_diagonal.as_ref() != Some(&expected) {
            violations.push("off-diagonal average does not equal A*n/(n-1)".into());
        }
    }
    if upper_extremal != bounds.upper_tight {
        violations.push(format!(
            "discrete-scaling detection ({upper_extremal}) disagrees with upper tightness ({})",
            bounds.upper_tight
        ));
    }
    if let AntipodalityJson::Classified { tier, .. } = antipodality {
        let strict = *tier == AntipodalityTier::StrictlyAntipodal.as_str();
        if strict != bounds.lower_tight {
            violations.push(format!(
                "strict antipodality ({strict}) disagrees with lower tightness ({})",
                bounds.lower_tight
            ));
        }
        if strict {
            if n % 2 != 0 {
                violations.push("strictly antipodal space with odd cardinality".into());
            }
            if !symmetry.pass {
                violations
                    .push("strictly antipodal space with an asymmetric distribution".into());
            }
            if let Some(inv) = involution {
                if !(inv.is_involution
                    && inv.fixed_point_free
                    && inv.is_isometry
                    && inv.commutes_with_generators)
                {
                    violations.push(
                        "antipodal map fails an involution/centrality property".into(),
                    );
                }
            }
        }
    }
    violations
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateJson {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
    pub seed: u64,
    pub ci99_lo: f64,
    pub ci99_hi: f64,
    pub std_dev: f64,
    pub degenerate_retries: u64,
}

impl EstimateJson {
    pub fn from_estimate(est: &crate::continuous::SampleEstimate) -> Self {
        EstimateJson {
            mean: est.mean,
            stderr: est.std_error,
            n: est.samples,
            seed: est.seed,
            ci99_lo: est.ci99.0,
            ci99_hi: est.ci99.1,
            std_dev: est.std_dev,
            degenerate_retries: est.degenerate_retries,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HistogramSymmetryJson {
    pub max_abs_z: f64,
    pub chi_square: f64,
    pub pairs: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TorusBoundJson {
    pub lower: f64,
    pub upper: f64,
    pub lower_margin_se: f64,
    pub upper_margin_se: f64,
    pub inside: bool,
}

/// JSON report for `sample` runs. The histogram itself is emitted as CSV
/// (`bin_lo,bin_hi,mass`), not JSON.
#[derive(Debug, Clone, Serialize)]
pub struct SampleReport {
    pub tool: ToolInfo,
    pub space: String,
    pub params: BTreeMap<String, String>,
    pub estimate: EstimateJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<HistogramSymmetryJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_check: Option<TorusBoundJson>,
}

/// CSV rendering of a histogram: `bin_lo,bin_hi,mass` rows.
pub fn histogram_to_csv(bins: &[crate::continuous::HistogramBin]) -> String {
    let mut out = String::from("bin_lo,bin_hi,mass\n");
    for b in bins {
        out.push_str(&format!("{:.17e},{:.17e},{:.17e}\n", b.lo, b.hi, b.mass));
    }
    out
}

/// Flatten a report into `section,key,value` CSV rows (scalar fields and the
/// distribution; prose fields are omitted).
pub fn report_to_csv(report: &AnalysisReport) -> String {
    let mut out = String::from("section,key,value\n");
    let mut push = |section: &str, key: &str, value: String| {
        out.push_str(&format!("{section},{key},{value}\n"));
    };
    push("space", "points", report.space.points.to_string());
    if let Some(edges) = report.space.edges {
        push("space", "edges", edges.to_string());
    }
    push("transitivity", "status", report.transitivity.status.to_string());
    let b = &report.bounds;
    push("bounds", "diameter", b.diameter.exact.clone());
    push("bounds", "average", b.average.exact.clone());
    if let Some(abar) = &b.average_off_diagonal {
        push("bounds", "average_off_diagonal", abar.exact.clone());
    }
    push("bounds", "mu", b.mu.exact.clone());
    push("bounds", "expected_square", b.expected_square.exact.clone());
    for (key, value) in [
        ("lower_ok", b.lower_ok),
        ("upper_ok", b.upper_ok),
        ("sq_lower_ok", b.sq_lower_ok),
        ("sq_upper_ok", b.sq_upper_ok),
        ("lower_tight", b.lower_tight),
        ("upper_tight", b.upper_tight),
    ] {
        push("bounds", key, value.to_string());
    }
    if let AntipodalityJson::Classified { tier, .. } = &report.antipodality {
        push("antipodality", "tier", tier.to_string());
    } else {
        push("antipodality", "tier", "UNAVAILABLE".to_string());
    }
    push("symmetry_check", "pass", report.symmetry_check.pass.to_string());
    push(
        "extremal",
        "upper_discrete_scaling",
        report.extremal.upper_discrete_scaling.to_string(),
    );
    if let Some(lower) = report.extremal.lower_strictly_antipodal {
        push("extremal", "lower_strictly_antipodal", lower.to_string());
    }
    push("violations", "count", report.violations.len().to_string());
    for (value, mass) in report.distribution.iter().map(|e| (&e.value, &e.mass)) {
        push("distribution", &value.exact, mass.exact.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cayley, hypercube, petersen, CayleySpec};
    use std::collections::BTreeMap;

    fn family_descriptor(name: &str) -> InputDescriptor {
        InputDescriptor::Family {
            family: name.to_string(),
            params: BTreeMap::new(),
        }
    }

    #[test]
    fn hypercube_pipeline_report() {
        let out = cayley(&CayleySpec::Abelian {
            moduli: vec![2, 2, 2, 2],
            connection: vec![
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
            ],
        })
        .unwrap();
        assert_eq!(out.graph, hypercube(4).unwrap());
        let report = analyze(
            PipelineInput {
                descriptor: family_descriptor("hypercube"),
                body: PipelineBody::Graph {
                    graph: out.graph,
                    construction: Some(ConstructionEvidence {
                        evidence: out.evidence,
                        automorphisms: out.translations,
                    }),
                },
            },
            &AnalyzeOptions::default(),
        )
        .unwrap();
        assert_eq!(report.bounds.average.exact, "2");
        assert_eq!(report.bounds.diameter.exact, "4");
        assert!(report.bounds.lower_tight);
        assert!(report.violations.is_empty());
        let AntipodalityJson::Classified {
            tier,
            antipodal_map,
            ..
        } = &report.antipodality
        else {
            panic!("expected classification")
        };
        assert_eq!(*tier, "STRICTLY_ANTIPODAL");
        // Bitwise complement: 0 -> 15, 1 -> 14, ...
        assert_eq!(antipodal_map.as_deref().unwrap(), "15 14 13 12 11 10 9 8 7 6 5 4 3 2 1 0");
        let inv = report.involution.unwrap();
        assert!(inv.is_involution && inv.fixed_point_free && inv.commutes_with_generators);
    }

    #[test]
    fn petersen_pipeline_uses_search() {
        let report = analyze(
            PipelineInput {
                descriptor: family_descriptor("petersen"),
                body: PipelineBody::Graph {
                    graph: petersen(),
                    construction: None,
                },
            },
            &AnalyzeOptions::default(),
        )
        .unwrap();
        assert_eq!(report.transitivity.status, "certified");
        assert_eq!(report.bounds.average.exact, "3/2");
        assert_eq!(report.bounds.expected_square.exact, "27/10");
        assert!(!report.bounds.lower_tight && !report.bounds.upper_tight);
        let AntipodalityJson::Classified { tier, .. } = &report.antipodality else {
            panic!("expected classification")
        };
        assert_eq!(*tier, "ANTIPODAL");
        assert!(report.violations.is_empty());
    }

    #[test]
    fn no_aut_degrades_to_evidence_required() {
        let report = analyze(
            PipelineInput {
                descriptor: family_descriptor("petersen"),
                body: PipelineBody::Graph {
                    graph: petersen(),
                    construction: None,
                },
            },
            &AnalyzeOptions {
                skip_automorphisms: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(report.transitivity.status, "skipped");
        assert!(matches!(
            report.antipodality,
            AntipodalityJson::EvidenceRequired { .. }
        ));
    }

    #[test]
    fn fast_path_matches_slow_path_bounds() {
        let out = cayley(&CayleySpec::Abelian {
            moduli: vec![2; 8],
            connection: (0..8)
                .map(|i| {
                    let mut e = vec![0i64; 8];
                    e[i] = 1;
                    e
                })
                .collect(),
        })
        .unwrap();
        let slow = analyze(
            PipelineInput {
                descriptor: family_descriptor("q8"),
                body: PipelineBody::Graph {
                    graph: out.graph.clone(),
                    construction: Some(ConstructionEvidence {
                        evidence: out.evidence.clone(),
                        automorphisms: out.translations.clone(),
                    }),
                },
            },
            &AnalyzeOptions::default(),
        )
        .unwrap();
        let fast = analyze(
            PipelineInput {
                descriptor: family_descriptor("q8"),
                body: PipelineBody::Graph {
                    graph: out.graph,
                    construction: Some(ConstructionEvidence {
                        evidence: out.evidence,
                        automorphisms: out.translations,
                    }),
                },
            },
            &AnalyzeOptions {
                fast_path: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(
            serde_json::to_string(&slow.bounds).unwrap(),
            serde_json::to_string(&fast.bounds).unwrap()
        );
        assert_eq!(
            serde_json::to_string(&slow.distribution).unwrap(),
            serde_json::to_string(&fast.distribution).unwrap()
        );
        let (AntipodalityJson::Classified { tier: slow_tier, .. },
             AntipodalityJson::Classified { tier: fast_tier, .. }) =
            (&slow.antipodality, &fast.antipodality)
        else {
            panic!("expected classifications")
        };
        assert_eq!(slow_tier, fast_tier);
    }
}
