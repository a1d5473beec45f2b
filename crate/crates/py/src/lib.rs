//! Python bindings: graph generators, exact metric-space analysis, and the
//! seeded continuous samplers, mirroring the `antipode` CLI surface.
//!
//! Exact rationals cross into Python as strings (`"3/2"`); reports come back
//! as plain dicts with the same shape as the CLI's JSON output.

use antipode_core::cli::{build_family, Family, FamilyParams};
use antipode_core::continuous;
use antipode_core::graph;
use antipode_core::io;
use antipode_core::metric::{self, AverageMode, FiniteMetricSpace};
use antipode_core::rational::{parse_ratio, ratio_string};
use antipode_core::report::{
    analyze, AnalyzeOptions, ConstructionEvidence, EstimateJson, HistogramSymmetryJson,
    InputDescriptor, PipelineBody, PipelineInput, SampleReport, ToolInfo, TorusBoundJson,
    TOOL_NAME, TOOL_VERSION,
};
use antipode_core::symmetry::{
    automorphism_search, is_vertex_transitive, Transitivity, DEFAULT_SEARCH_BUDGET,
};
use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;
use serde_json::Value;
use std::collections::BTreeMap;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py(py: Python<'_>, value: &Value) -> PyResult<Py<PyAny>> {
    Ok(match value {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_py_any(py)?,
        Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                i.into_py_any(py)?
            } else if let Some(u) = num.as_u64() {
                u.into_py_any(py)?
            } else {
                num.as_f64().unwrap_or(f64::NAN).into_py_any(py)?
            }
        }
        Value::String(s) => s.into_py_any(py)?,
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_py_any(py)?
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (key, item) in map {
                dict.set_item(key, json_to_py(py, item)?)?;
            }
            dict.into_py_any(py)?
        }
    })
}

fn serialize_to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let json = serde_json::to_value(value).map_err(err)?;
    json_to_py(py, &json)
}

fn descriptor(family: &str, params: &[(&str, String)]) -> InputDescriptor {
    InputDescriptor::Family {
        family: family.to_string(),
        params: params
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect::<BTreeMap<_, _>>(),
    }
}

fn options(no_aut: bool, budget: Option<u64>, fast_path: bool) -> AnalyzeOptions {
    AnalyzeOptions {
        budget: budget.unwrap_or(DEFAULT_SEARCH_BUDGET),
        skip_automorphisms: no_aut,
        fast_path,
    }
}

/// An undirected graph with optional construction-time transitivity
/// evidence.
#[pyclass(name = "Graph")]
struct PyGraph {
    graph: graph::Graph,
    construction: Option<ConstructionEvidence>,
    descriptor: InputDescriptor,
}

#[pymethods]
impl PyGraph {
    fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<u32>> {
        if v >= self.graph.vertex_count() {
            return Err(err(format!("vertex {v} out of range")));
        }
        Ok(self.graph.neighbors(v).to_vec())
    }

    fn is_connected(&self) -> bool {
        self.graph.is_connected()
    }

    /// BFS distances from `source`; `None` marks unreachable vertices.
    fn bfs_distances(&self, source: usize) -> PyResult<Vec<Option<u32>>> {
        if source >= self.graph.vertex_count() {
            return Err(err(format!("vertex {source} out of range")));
        }
        Ok(graph::bfs_distances(&self.graph, source)
            .into_iter()
            .map(|d| (d != graph::UNREACHABLE).then_some(d))
            .collect())
    }

    /// The shortest-path metric as a MetricSpace (requires connectivity).
    fn metric(&self) -> PyResult<PyMetricSpace> {
        let space = graph::apsp_metric(&self.graph).map_err(err)?;
        Ok(PyMetricSpace {
            space,
            construction: self.construction.clone(),
            descriptor: self.descriptor.clone(),
        })
    }

    /// Edge-list serialization (`n m` header).
    fn edge_list_text(&self) -> String {
        io::write_edge_list(&self.graph)
    }

    /// Run the full analysis pipeline; returns the report as a dict.
    #[pyo3(signature = (fast_path = false, no_aut = false, budget = None))]
    fn analyze(
        &self,
        py: Python<'_>,
        fast_path: bool,
        no_aut: bool,
        budget: Option<u64>,
    ) -> PyResult<Py<PyAny>> {
        let report = analyze(
            PipelineInput {
                descriptor: self.descriptor.clone(),
                body: PipelineBody::Graph {
                    graph: self.graph.clone(),
                    construction: self.construction.clone(),
                },
            },
            &options(no_aut, budget, fast_path),
        )
        .map_err(err)?;
        serialize_to_py(py, &report)
    }

    /// Automorphism search summary: generator images, orbit structure, and
    /// the transitivity verdict.
    #[pyo3(signature = (budget = None))]
    fn automorphisms(&self, py: Python<'_>, budget: Option<u64>) -> PyResult<Py<PyAny>> {
        let auts = automorphism_search(&self.graph, budget.unwrap_or(DEFAULT_SEARCH_BUDGET));
        let transitive = match is_vertex_transitive(&self.graph, &auts) {
            Ok(Transitivity::Certified(_)) => Some(true),
            Ok(Transitivity::Refuted(_)) => Some(false),
            Err(_) => None,
        };
        let dict = PyDict::new(py);
        let gens: Vec<Vec<u32>> = auts
            .generators()
            .iter()
            .map(|p| p.images().to_vec())
            .collect();
        dict.set_item("generators", gens)?;
        dict.set_item("orbit_count", auts.orbit_count())?;
        dict.set_item("transitive", transitive)?;
        dict.set_item("truncated", auts.truncated)?;
        dict.set_item("nodes_explored", auts.nodes_explored)?;
        dict.into_py_any(py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(vertices={}, edges={})",
            self.graph.vertex_count(),
            self.graph.edge_count()
        )
    }
}

/// A finite metric space with exact rational distances.
#[pyclass(name = "MetricSpace")]
struct PyMetricSpace {
    space: FiniteMetricSpace,
    construction: Option<ConstructionEvidence>,
    descriptor: InputDescriptor,
}

#[pymethods]
impl PyMetricSpace {
    fn point_count(&self) -> usize {
        self.space.len()
    }

    fn diameter(&self) -> String {
        ratio_string(&self.space.diameter())
    }

    fn distance(&self, i: usize, j: usize) -> PyResult<String> {
        let n = self.space.len();
        if i >= n || j >= n {
            return Err(err(format!("index out of range for {n} points")));
        }
        Ok(ratio_string(&self.space.distance(i, j)))
    }

    /// Average distance `A` (or `A-bar` with `off_diagonal=True`), exact.
    #[pyo3(signature = (off_diagonal = false))]
    fn average(&self, off_diagonal: bool) -> PyResult<String> {
        let mode = if off_diagonal {
            AverageMode::OffDiagonal
        } else {
            AverageMode::WithDiagonal
        };
        Ok(ratio_string(
            &self.space.average_distance(mode).map_err(err)?,
        ))
    }

    fn mu(&self) -> String {
        ratio_string(&self.space.mu())
    }

    /// `(value, mass)` pairs as exact strings, ascending by value.
    fn distribution(&self) -> Vec<(String, String)> {
        self.space
            .distance_distribution()
            .entries()
            .iter()
            .map(|(v, m)| (ratio_string(v), ratio_string(m)))
            .collect()
    }

    fn bounds(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let report = metric::check_bounds(&self.space);
        let dict = PyDict::new(py);
        dict.set_item("diameter", ratio_string(&report.diameter))?;
        dict.set_item("average", ratio_string(&report.average))?;
        dict.set_item(
            "average_off_diagonal",
            report.average_off_diagonal.as_ref().map(ratio_string),
        )?;
        dict.set_item("mu", ratio_string(&report.mu))?;
        dict.set_item("expected_square", ratio_string(&report.expected_square))?;
        dict.set_item("lower_ok", report.lower_ok)?;
        dict.set_item("upper_ok", report.upper_ok)?;
        dict.set_item("sq_lower_ok", report.sq_lower_ok)?;
        dict.set_item("sq_upper_ok", report.sq_upper_ok)?;
        dict.set_item("lower_tight", report.lower_tight)?;
        dict.set_item("upper_tight", report.upper_tight)?;
        dict.into_py_any(py)
    }

    fn is_ultrametric(&self) -> bool {
        self.space.is_ultrametric()
    }

    /// Matrix-file serialization.
    fn matrix_text(&self) -> String {
        io::write_matrix(&self.space)
    }

    /// Run the full analysis pipeline; returns the report as a dict.
    #[pyo3(signature = (no_aut = false, budget = None))]
    fn analyze(&self, py: Python<'_>, no_aut: bool, budget: Option<u64>) -> PyResult<Py<PyAny>> {
        let report = analyze(
            PipelineInput {
                descriptor: self.descriptor.clone(),
                body: PipelineBody::Metric {
                    space: self.space.clone(),
                    construction: self.construction.clone(),
                },
            },
            &options(no_aut, budget, false),
        )
        .map_err(err)?;
        serialize_to_py(py, &report)
    }

    fn __repr__(&self) -> String {
        format!(
            "MetricSpace(points={}, diameter={})",
            self.space.len(),
            ratio_string(&self.space.diameter())
        )
    }
}

fn family_graph(
    family: Family,
    params: FamilyParams,
    shown: &[(&str, String)],
) -> PyResult<PyGraph> {
    let (built, _) = build_family(family, &params).map_err(|e| err(e.message))?;
    match built {
        antipode_core::cli::BuiltFamily::Graph {
            graph,
            construction,
        } => Ok(PyGraph {
            graph,
            construction,
            descriptor: descriptor(family.name(), shown),
        }),
        antipode_core::cli::BuiltFamily::Metric { .. } => {
            Err(err("family produced a metric space, not a graph"))
        }
    }
}

/// The d-dimensional hypercube Q_d with its transitivity certificate.
#[pyfunction]
fn hypercube(d: u32) -> PyResult<PyGraph> {
    family_graph(
        Family::Hypercube,
        FamilyParams {
            d: Some(d),
            ..Default::default()
        },
        &[("d", d.to_string())],
    )
}

/// The cycle graph C_n.
#[pyfunction]
fn cycle(n: usize) -> PyResult<PyGraph> {
    family_graph(
        Family::Cycle,
        FamilyParams {
            n: Some(n),
            ..Default::default()
        },
        &[("n", n.to_string())],
    )
}

/// The complete graph K_n.
#[pyfunction]
fn complete(n: usize) -> PyResult<PyGraph> {
    family_graph(
        Family::Complete,
        FamilyParams {
            n: Some(n),
            ..Default::default()
        },
        &[("n", n.to_string())],
    )
}

/// The Petersen graph (no construction certificate; analysis runs the
/// automorphism search).
#[pyfunction]
fn petersen() -> PyResult<PyGraph> {
    family_graph(Family::Petersen, FamilyParams::default(), &[])
}

/// Cayley graph of an abelian group given moduli and a symmetric connection
/// set of coordinate vectors.
#[pyfunction]
fn cayley_abelian(moduli: Vec<u64>, connection: Vec<Vec<i64>>) -> PyResult<PyGraph> {
    let out = graph::cayley(&graph::CayleySpec::Abelian {
        moduli: moduli.clone(),
        connection,
    })
    .map_err(err)?;
    Ok(PyGraph {
        graph: out.graph,
        construction: Some(ConstructionEvidence {
            evidence: out.evidence,
            automorphisms: out.translations,
        }),
        descriptor: descriptor("cayley-abelian", &[("moduli", format!("{moduli:?}"))]),
    })
}

/// Cayley graph of the permutation group generated by an inverse-closed set
/// of generators (image lists).
#[pyfunction]
fn cayley_permutation(degree: usize, generators: Vec<Vec<u32>>) -> PyResult<PyGraph> {
    let connection = generators
        .into_iter()
        .map(|images| antipode_core::symmetry::Perm::from_images(images).map_err(err))
        .collect::<PyResult<Vec<_>>>()?;
    let out = graph::cayley(&graph::CayleySpec::Permutation { degree, connection }).map_err(err)?;
    Ok(PyGraph {
        graph: out.graph,
        construction: Some(ConstructionEvidence {
            evidence: out.evidence,
            automorphisms: out.translations,
        }),
        descriptor: descriptor("cayley-perm", &[("degree", degree.to_string())]),
    })
}

/// Build a graph from an edge list.
#[pyfunction]
fn from_edges(n: usize, edges: Vec<(u32, u32)>) -> PyResult<PyGraph> {
    let graph = graph::Graph::from_edges(n, &edges).map_err(err)?;
    Ok(PyGraph {
        graph,
        construction: None,
        descriptor: descriptor("edge-list", &[("n", n.to_string())]),
    })
}

fn extract_ratio(entry: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    if let Ok(i) = entry.extract::<i64>() {
        return Ok(BigRational::from_integer(i.into()));
    }
    // Strings, Python big ints, and fractions.Fraction all stringify to
    // forms parse_ratio accepts.
    let text = entry.str()?.to_string();
    parse_ratio(&text).map_err(err)
}

/// Validate a distance matrix (entries: int, "p/q" string, or
/// fractions.Fraction) into a MetricSpace.
#[pyfunction]
#[pyo3(signature = (rows, weights = None))]
fn validate_metric(
    rows: Vec<Vec<Bound<'_, PyAny>>>,
    weights: Option<Vec<Bound<'_, PyAny>>>,
) -> PyResult<PyMetricSpace> {
    let matrix: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|row| row.iter().map(extract_ratio).collect())
        .collect::<PyResult<_>>()?;
    let weights: Option<Vec<BigRational>> = weights
        .map(|w| w.iter().map(extract_ratio).collect::<PyResult<_>>())
        .transpose()?;
    let n = matrix.len();
    let space = metric::validate_metric(&matrix, weights.as_deref()).map_err(err)?;
    Ok(PyMetricSpace {
        space,
        construction: None,
        descriptor: descriptor("matrix", &[("n", n.to_string())]),
    })
}

/// The depth-k truncation of the p-adic integers as a MetricSpace with its
/// translation certificate.
#[pyfunction]
fn padic_space(p: u64, k: u32) -> PyResult<PyMetricSpace> {
    let (built, _) = build_family(
        Family::Padic,
        &FamilyParams {
            p: Some(p),
            k: Some(k),
            ..Default::default()
        },
    )
    .map_err(|e| err(e.message))?;
    match built {
        antipode_core::cli::BuiltFamily::Metric {
            space,
            construction,
        } => Ok(PyMetricSpace {
            space,
            construction,
            descriptor: descriptor("padic", &[("p", p.to_string()), ("k", k.to_string())]),
        }),
        _ => unreachable!("padic builds a metric space"),
    }
}

/// Exact average distance of the p-adic truncation, by shell counting.
#[pyfunction]
fn padic_average(p: u64, k: u32) -> PyResult<String> {
    Ok(ratio_string(&continuous::padic_average(p, k).map_err(err)?))
}

/// The limit p/(p+1) of the p-adic average as the depth grows.
#[pyfunction]
fn padic_limit(p: u64) -> String {
    ratio_string(&continuous::padic_limit(p))
}

/// Sample spherical distances on S^d: estimate, histogram, and symmetry
/// report, deterministic for a fixed seed.
#[pyfunction]
#[pyo3(signature = (d, n, seed = 0, bins = 32))]
fn sample_sphere(py: Python<'_>, d: u32, n: u64, seed: u64, bins: usize) -> PyResult<Py<PyAny>> {
    let hist = continuous::sphere_distance_histogram(d, n, bins, seed).map_err(err)?;
    let report = SampleReport {
        tool: ToolInfo {
            name: TOOL_NAME,
            version: TOOL_VERSION,
        },
        space: "sphere".to_string(),
        params: BTreeMap::from([
            ("d".to_string(), d.to_string()),
            ("n".to_string(), n.to_string()),
            ("seed".to_string(), seed.to_string()),
            ("bins".to_string(), bins.to_string()),
        ]),
        estimate: EstimateJson::from_estimate(&hist.estimate),
        symmetry: Some(HistogramSymmetryJson {
            max_abs_z: hist.symmetry.max_abs_z,
            chi_square: hist.symmetry.chi_square,
            pairs: hist.symmetry.pairs,
            pass: hist.symmetry.pass,
        }),
        bound_check: None,
    };
    let value = serde_json::to_value(&report).map_err(err)?;
    let dict = json_to_py(py, &value)?;
    let bins_list = PyList::empty(py);
    for b in &hist.bins {
        let row = PyDict::new(py);
        row.set_item("lo", b.lo)?;
        row.set_item("hi", b.hi)?;
        row.set_item("count", b.count)?;
        row.set_item("mass", b.mass)?;
        bins_list.append(row)?;
    }
    dict.bind(py)
        .cast::<PyDict>()?
        .set_item("histogram", bins_list)?;
    Ok(dict)
}

/// Sample mean distance on the flat torus with the D/2 <= A <= D check.
#[pyfunction]
#[pyo3(signature = (n, seed = 0))]
fn sample_torus(py: Python<'_>, n: u64, seed: u64) -> PyResult<Py<PyAny>> {
    let est = continuous::flat_torus_mean_distance(n, seed).map_err(err)?;
    let check = continuous::torus_bound_check(&est);
    let report = SampleReport {
        tool: ToolInfo {
            name: TOOL_NAME,
            version: TOOL_VERSION,
        },
        space: "torus".to_string(),
        params: BTreeMap::from([
            ("n".to_string(), n.to_string()),
            ("seed".to_string(), seed.to_string()),
        ]),
        estimate: EstimateJson::from_estimate(&est),
        symmetry: None,
        bound_check: Some(TorusBoundJson {
            lower: check.lower,
            upper: check.upper,
            lower_margin_se: check.lower_margin_se,
            upper_margin_se: check.upper_margin_se,
            inside: check.inside,
        }),
    };
    serialize_to_py(py, &report)
}

#[pyfunction]
fn version() -> &'static str {
    TOOL_VERSION
}

#[pymodule]
fn antipode(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyMetricSpace>()?;
    m.add_function(wrap_pyfunction!(hypercube, m)?)?;
    m.add_function(wrap_pyfunction!(cycle, m)?)?;
    m.add_function(wrap_pyfunction!(complete, m)?)?;
    m.add_function(wrap_pyfunction!(petersen, m)?)?;
    m.add_function(wrap_pyfunction!(cayley_abelian, m)?)?;
    m.add_function(wrap_pyfunction!(cayley_permutation, m)?)?;
    m.add_function(wrap_pyfunction!(from_edges, m)?)?;
    m.add_function(wrap_pyfunction!(validate_metric, m)?)?;
    m.add_function(wrap_pyfunction!(padic_space, m)?)?;
    m.add_function(wrap_pyfunction!(padic_average, m)?)?;
    m.add_function(wrap_pyfunction!(padic_limit, m)?)?;
    m.add_function(wrap_pyfunction!(sample_sphere, m)?)?;
    m.add_function(wrap_pyfunction!(sample_torus, m)?)?;
    m.add_function(wrap_pyfunction!(version, m)?)?;
    Ok(())
}
