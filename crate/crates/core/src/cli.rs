//! Command-line front end: `generate`, `analyze`, and `sample`.
//!
//! Exit codes: 0 success (theorem violations are data, not crashes),
//! 1 unreadable/unparseable input, 2 bad parameters, 3 disconnected graph,
//! 4 metric-axiom violation.

use crate::continuous::{
    flat_torus_mean_distance, padic_space, sphere_distance_histogram, torus_bound_check,
    ContinuousError,
};
use crate::graph::{
    cayley, complete, cycle, hypercube, petersen, CayleyGraph, CayleySpec, Graph, GraphError,
};
use crate::io;
use crate::metric::{HomogeneityEvidence, MetricError};
use crate::rational::ratio_string;
use crate::report::{
    analyze, histogram_to_csv, report_to_csv, AnalyzeOptions, ConstructionEvidence, EstimateJson,
    HistogramSymmetryJson, InputDescriptor, PipelineBody, PipelineError, PipelineInput,
    SampleReport, ToolInfo, TorusBoundJson, TOOL_NAME, TOOL_VERSION,
};
use crate::symmetry::{AutomorphismSet, Perm, DEFAULT_SEARCH_BUDGET};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const EXIT_PARSE: i32 = 1;
pub const EXIT_BAD_PARAMS: i32 = 2;
pub const EXIT_DISCONNECTED: i32 = 3;
pub const EXIT_METRIC_VIOLATION: i32 = 4;

#[derive(Parser)]
#[command(
    name = "antipode",
    version,
    about = "Distance-distribution analysis on homogeneous metric spaces"
)]
pub struct Cli {
    /// Rayon thread count (defaults to ANTIPODE_THREADS or all cores).
    #[arg(long, global = true, env = "ANTIPODE_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Generate an example space and write it to a file.
    Generate {
        /// Family: hypercube | cycle | complete | petersen | cayley-abelian |
        /// cayley-perm | padic.
        family: Family,
        #[command(flatten)]
        params: FamilyParams,
        /// Output path (edge list for graphs, matrix for padic).
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Run the full analysis pipeline and print a report.
    Analyze {
        /// Input file: edge list (`n m` header) or distance matrix (`n`).
        input: Option<PathBuf>,
        /// Analyze a generated family instead of a file.
        #[arg(long)]
        family: Option<Family>,
        #[command(flatten)]
        params: FamilyParams,
        /// Require a transitivity certificate and analyze from one BFS.
        #[arg(long)]
        fast_path: bool,
        /// Node budget for automorphism/isometry search.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
        /// Skip automorphism search; antipodality degrades to
        /// evidence-required.
        #[arg(long)]
        no_aut: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Sample a continuous space and print a JSON estimate plus a CSV
    /// histogram.
    Sample {
        #[command(subcommand)]
        space: SampleCommand,
    },
}

#[derive(Subcommand)]
pub enum SampleCommand {
    /// Pairs of uniform points on the unit sphere S^d.
    Sphere {
        /// Sphere dimension d (the sphere lives in R^(d+1)).
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Histogram bins over [0, pi]; even, >= 2.
        #[arg(long, default_value_t = 32)]
        bins: usize,
        /// Write the CSV histogram here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Pairs of uniform points on the flat torus R^2/Z^2.
    Torus {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Hypercube,
    Cycle,
    Complete,
    Petersen,
    CayleyAbelian,
    CayleyPerm,
    Padic,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Hypercube => "hypercube",
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::Petersen => "petersen",
            Family::CayleyAbelian => "cayley-abelian",
            Family::CayleyPerm => "cayley-perm",
            Family::Padic => "padic",
        }
    }
}

#[derive(Args, Clone, Default)]
pub struct FamilyParams {
    /// Hypercube dimension.
    #[arg(long)]
    pub d: Option<u32>,
    /// Vertex count (cycle, complete).
    #[arg(long)]
    pub n: Option<usize>,
    /// Prime (padic).
    #[arg(long)]
    pub p: Option<u64>,
    /// Truncation depth (padic).
    #[arg(long)]
    pub k: Option<u32>,
    /// Comma-separated moduli, e.g. `2,2,2` (cayley-abelian).
    #[arg(long)]
    pub moduli: Option<String>,
    /// Connection set: elements separated by `;`, coordinates by `,`
    /// (cayley-abelian), e.g. `1,0,0;0,1,0;0,0,1`.
    #[arg(long)]
    pub conn: Option<String>,
    /// Permutation degree (cayley-perm).
    #[arg(long)]
    pub degree: Option<usize>,
    /// Generator permutations as image lists: `1,0,2;0,2,1` (cayley-perm).
    #[arg(long)]
    pub gens: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// A failure plus the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn params(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_BAD_PARAMS,
            message: message.into(),
        }
    }

    fn parse(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(err: GraphError) -> Self {
        let code = match &err {
            GraphError::Disconnected { .. } => EXIT_DISCONNECTED,
            GraphError::Metric(m) => return m.clone().into(),
            _ => EXIT_BAD_PARAMS,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

impl From<MetricError> for CliError {
    fn from(err: MetricError) -> Self {
        let code = match &err {
            MetricError::Asymmetric { .. }
            | MetricError::NegativeDistance { .. }
            | MetricError::NonzeroDiagonal { .. }
            | MetricError::ZeroOffDiagonal { .. }
            | MetricError::TriangleViolation { .. }
            | MetricError::NotSquare { .. }
            | MetricError::BadWeights(_) => EXIT_METRIC_VIOLATION,
            _ => EXIT_BAD_PARAMS,
        };
        let message = match &err {
            MetricError::TriangleViolation { i, j, k } => {
                format!("{err}; witness ({i},{j},{k})")
            }
            _ => err.to_string(),
        };
        CliError { code, message }
    }
}

impl From<ContinuousError> for CliError {
    fn from(err: ContinuousError) -> Self {
        CliError::params(err.to_string())
    }
}

impl From<PipelineError> for CliError {
    fn from(err: PipelineError) -> Self {
        match err {
            PipelineError::Graph(g) => g.into(),
            PipelineError::Metric(m) => m.into(),
        }
    }
}

/// Entry point used by the binary: returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            // clap prints help/version on stdout with code 0, usage errors
            // with code 2.
            let _ = err.print();
            return if err.use_stderr() { EXIT_BAD_PARAMS } else { 0 };
        }
    };
    if let Some(threads) = cli.threads {
        // Ignore failure: the global pool may already exist (tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("antipode: {}", err.message);
            err.code
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Generate {
            family,
            params,
            out,
        } => cmd_generate(family, &params, &out),
        Command::Analyze {
            input,
            family,
            params,
            fast_path,
            budget,
            no_aut,
            format,
        } => cmd_analyze(input, family, &params, fast_path, budget, no_aut, format),
        Command::Sample { space } => cmd_sample(space),
    }
}

/// A constructed family: either a graph or a metric space, with optional
/// construction evidence.
pub enum BuiltFamily {
    Graph {
        graph: Graph,
        construction: Option<ConstructionEvidence>,
    },
    Metric {
        space: crate::metric::FiniteMetricSpace,
        construction: Option<ConstructionEvidence>,
    },
}

impl BuiltFamily {
    pub fn into_body(self) -> PipelineBody {
        match self {
            BuiltFamily::Graph {
                graph,
                construction,
            } => PipelineBody::Graph {
                graph,
                construction,
            },
            BuiltFamily::Metric {
                space,
                construction,
            } => PipelineBody::Metric {
                space,
                construction,
            },
        }
    }
}

fn require<T: Copy>(value: Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::params(format!("{family} requires --{flag}")))
}

pub fn build_family(
    family: Family,
    params: &FamilyParams,
) -> Result<(BuiltFamily, BTreeMap<String, String>), CliError> {
    let mut used = BTreeMap::new();
    let built = match family {
        Family::Hypercube => {
            let d = require(params.d, "d", "hypercube")?;
            used.insert("d".to_string(), d.to_string());
            let graph = hypercube(d)?;
            let translations: Vec<Perm> = (0..d)
                .map(|bit| {
                    Perm::from_images(
                        (0..graph.vertex_count())
                            .map(|v| (v ^ (1 << bit)) as u32)
                            .collect(),
                    )
                    .expect("bit flip is a permutation")
                })
                .collect();
            let automorphisms = AutomorphismSet::for_graph(&graph, translations)
                .expect("bit flips preserve hypercube adjacency");
            BuiltFamily::Graph {
                graph,
                construction: Some(ConstructionEvidence {
                    evidence: HomogeneityEvidence::by_construction(
                        "hypercube construction: coordinate translations act transitively",
                    ),
                    automorphisms,
                }),
            }
        }
        Family::Cycle => {
            let n = require(params.n, "n", "cycle")?;
            used.insert("n".to_string(), n.to_string());
            let graph = cycle(n)?;
            let rotation =
                Perm::from_images((0..n).map(|v| ((v + 1) % n) as u32).collect()).unwrap();
            let automorphisms = AutomorphismSet::for_graph(&graph, vec![rotation])
                .expect("rotation preserves cycle adjacency");
            BuiltFamily::Graph {
                graph,
                construction: Some(ConstructionEvidence {
                    evidence: HomogeneityEvidence::by_construction(
                        "cycle construction: rotations act transitively",
                    ),
                    automorphisms,
                }),
            }
        }
        Family::Complete => {
            let n = require(params.n, "n", "complete")?;
            used.insert("n".to_string(), n.to_string());
            let graph = complete(n)?;
            let rotation =
                Perm::from_images((0..n).map(|v| ((v + 1) % n) as u32).collect()).unwrap();
            let automorphisms = AutomorphismSet::for_graph(&graph, vec![rotation])
                .expect("rotation preserves complete-graph adjacency");
            BuiltFamily::Graph {
                graph,
                construction: Some(ConstructionEvidence {
                    evidence: HomogeneityEvidence::by_construction(
                        "complete graph: rotations act transitively",
                    ),
                    automorphisms,
                }),
            }
        }
        Family::Petersen => BuiltFamily::Graph {
            graph: petersen(),
            construction: None,
        },
        Family::CayleyAbelian => {
            let moduli = parse_moduli(
                params
                    .moduli
                    .as_deref()
                    .ok_or_else(|| CliError::params("cayley-abelian requires --moduli"))?,
            )?;
            let conn = parse_connection(
                params
                    .conn
                    .as_deref()
                    .ok_or_else(|| CliError::params("cayley-abelian requires --conn"))?,
                moduli.len(),
            )?;
            used.insert("moduli".to_string(), params.moduli.clone().unwrap());
            used.insert("conn".to_string(), params.conn.clone().unwrap());
            let out = cayley(&CayleySpec::Abelian {
                moduli,
                connection: conn,
            })?;
            cayley_to_built(out)
        }
        Family::CayleyPerm => {
            let degree = require(params.degree, "degree", "cayley-perm")?;
            let gens = parse_generators(
                params
                    .gens
                    .as_deref()
                    .ok_or_else(|| CliError::params("cayley-perm requires --gens"))?,
                degree,
            )?;
            used.insert("degree".to_string(), degree.to_string());
            used.insert("gens".to_string(), params.gens.clone().unwrap());
            let out = cayley(&CayleySpec::Permutation {
                degree,
                connection: gens,
            })?;
            cayley_to_built(out)
        }
        Family::Padic => {
            let p = require(params.p, "p", "padic")?;
            let k = require(params.k, "k", "padic")?;
            used.insert("p".to_string(), p.to_string());
            used.insert("k".to_string(), k.to_string());
            let trunc = padic_space(p, k)?;
            let n = trunc.space.len();
            let rotation =
                Perm::from_images((0..n).map(|v| ((v + 1) % n) as u32).collect()).unwrap();
            let automorphisms = AutomorphismSet::for_metric(&trunc.space, vec![rotation])
                .expect("translation is a p-adic isometry");
            BuiltFamily::Metric {
                space: trunc.space,
                construction: Some(ConstructionEvidence {
                    evidence: trunc.evidence,
                    automorphisms,
                }),
            }
        }
    };
    Ok((built, used))
}

fn cayley_to_built(out: CayleyGraph) -> BuiltFamily {
    BuiltFamily::Graph {
        graph: out.graph,
        construction: Some(ConstructionEvidence {
            evidence: out.evidence,
            automorphisms: out.translations,
        }),
    }
}

fn parse_moduli(text: &str) -> Result<Vec<u64>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| CliError::params(format!("invalid modulus {t:?}")))
        })
        .collect()
}

fn parse_connection(text: &str, arity: usize) -> Result<Vec<Vec<i64>>, CliError> {
    text.split(';')
        .map(|element| {
            let coords: Result<Vec<i64>, CliError> = element
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|_| CliError::params(format!("invalid coordinate {t:?}")))
                })
                .collect();
            let coords = coords?;
            if coords.len() != arity {
                return Err(CliError::params(format!(
                    "connection element {element:?} has {} coordinates, expected {arity}",
                    coords.len()
                )));
            }
            Ok(coords)
        })
        .collect()
}

fn parse_generators(text: &str, degree: usize) -> Result<Vec<Perm>, CliError> {
    text.split(';')
        .map(|gen| {
            let images: Result<Vec<u32>, CliError> = gen
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|_| CliError::params(format!("invalid image {t:?}")))
                })
                .collect();
            let images = images?;
            if images.len() != degree {
                return Err(CliError::params(format!(
                    "generator {gen:?} has {} images, expected {degree}",
                    images.len()
                )));
            }
            Perm::from_images(images).map_err(|e| CliError::params(e.to_string()))
        })
        .collect()
}

fn cmd_generate(family: Family, params: &FamilyParams, out: &Path) -> Result<(), CliError> {
    let (built, _) = build_family(family, params)?;
    let (content, summary) = match &built {
        BuiltFamily::Graph { graph, .. } => (
            io::write_edge_list(graph),
            format!(
                "{}: {} vertices, {} edges",
                family.name(),
                graph.vertex_count(),
                graph.edge_count()
            ),
        ),
        BuiltFamily::Metric { space, .. } => (
            io::write_matrix(space),
            format!(
                "{}: {} points, diameter {}",
                family.name(),
                space.len(),
                ratio_string(&space.diameter())
            ),
        ),
    };
    std::fs::write(out, content)
        .map_err(|e| CliError::params(format!("cannot write {}: {e}", out.display())))?;
    println!("{summary} -> {}", out.display());
    Ok(())
}

fn cmd_analyze(
    input: Option<PathBuf>,
    family: Option<Family>,
    params: &FamilyParams,
    fast_path: bool,
    budget: u64,
    no_aut: bool,
    format: OutputFormat,
) -> Result<(), CliError> {
    let (body, descriptor) = match (input, family) {
        (Some(_), Some(_)) => {
            return Err(CliError::params(
                "give either an input file or --family, not both",
            ))
        }
        (None, None) => {
            return Err(CliError::params("an input file or --family is required"))
        }
        (None, Some(family)) => {
            let (built, used) = build_family(family, params)?;
            let descriptor = InputDescriptor::Family {
                family: family.name().to_string(),
                params: used,
            };
            (built.into_body(), descriptor)
        }
        (Some(path), None) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
            let sha256 = hex_digest(text.as_bytes());
            let descriptor = InputDescriptor::File {
                path: path.display().to_string(),
                sha256,
            };
            let body = match io::detect_kind(&text).map_err(|e| CliError::parse(e.to_string()))? {
                io::InputKind::EdgeList => {
                    let (n, edges) =
                        io::parse_edge_list(&text).map_err(|e| CliError::parse(e.to_string()))?;
                    let graph = io::build_graph(n, &edges)?;
                    PipelineBody::Graph {
                        graph,
                        construction: None,
                    }
                }
                io::InputKind::Matrix => {
                    let (matrix, weights) =
                        io::parse_matrix(&text).map_err(|e| CliError::parse(e.to_string()))?;
                    let space = crate::metric::validate_metric(&matrix, weights.as_deref())?;
                    PipelineBody::Metric {
                        space,
                        construction: None,
                    }
                }
            };
            (body, descriptor)
        }
    };
    let opts = AnalyzeOptions {
        budget,
        skip_automorphisms: no_aut,
        fast_path,
    };
    let report = analyze(PipelineInput { descriptor, body }, &opts)?;
    match format {
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable report"));
        }
        OutputFormat::Csv => {
            print!("{}", report_to_csv(&report));
        }
    }
    Ok(())
}

fn cmd_sample(space: SampleCommand) -> Result<(), CliError> {
    match space {
        SampleCommand::Sphere {
            d,
            n,
            seed,
            bins,
            csv,
        } => {
            let hist = sphere_distance_histogram(d, n, bins, seed)?;
            let mean = sample_mean_from(&hist.estimate);
            let report = SampleReport {
                tool: tool_info(),
                space: "sphere".to_string(),
                params: BTreeMap::from([
                    ("d".to_string(), d.to_string()),
                    ("n".to_string(), n.to_string()),
                    ("seed".to_string(), seed.to_string()),
                    ("bins".to_string(), bins.to_string()),
                ]),
                estimate: mean,
                symmetry: Some(HistogramSymmetryJson {
                    max_abs_z: hist.symmetry.max_abs_z,
                    chi_square: hist.symmetry.chi_square,
                    pairs: hist.symmetry.pairs,
                    pass: hist.symmetry.pass,
                }),
                bound_check: None,
            };
            println!("{}", serde_json::to_string(&report).expect("serializable report"));
            let csv_text = histogram_to_csv(&hist.bins);
            match csv {
                Some(path) => std::fs::write(&path, csv_text).map_err(|e| {
                    CliError::params(format!("cannot write {}: {e}", path.display()))
                })?,
                None => print!("{csv_text}"),
            }
        }
        SampleCommand::Torus { n, seed } => {
            let est = flat_torus_mean_distance(n, seed)?;
            let check = torus_bound_check(&est);
            let report = SampleReport {
                tool: tool_info(),
                space: "torus".to_string(),
                params: BTreeMap::from([
                    ("n".to_string(), n.to_string()),
                    ("seed".to_string(), seed.to_string()),
                ]),
                estimate: sample_mean_from(&est),
                symmetry: None,
                bound_check: Some(TorusBoundJson {
                    lower: check.lower,
                    upper: check.upper,
                    lower_margin_se: check.lower_margin_se,
                    upper_margin_se: check.upper_margin_se,
                    inside: check.inside,
                }),
            };
            println!("{}", serde_json::to_string(&report).expect("serializable report"));
        }
    }
    Ok(())
}

fn sample_mean_from(est: &crate::continuous::SampleEstimate) -> EstimateJson {
    EstimateJson::from_estimate(est)
}

fn tool_info() -> ToolInfo {
    ToolInfo {
        name: TOOL_NAME,
        version: TOOL_VERSION,
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moduli_and_connection_parsing() {
        assert_eq!(parse_moduli("2,2,2").unwrap(), vec![2, 2, 2]);
        assert!(parse_moduli("2,x").is_err());
        let conn = parse_connection("1,0;0,1;-1,0;0,-1", 2).unwrap();
        assert_eq!(conn.len(), 4);
        assert!(parse_connection("1,0;1", 2).is_err());
    }

    #[test]
    fn generator_parsing() {
        let gens = parse_generators("1,0,2;0,2,1", 3).unwrap();
        assert_eq!(gens.len(), 2);
        assert!(parse_generators("1,1,2", 3).is_err());
        assert!(parse_generators("1,0", 3).is_err());
    }

    #[test]
    fn run_reports_bad_params() {
        assert_eq!(run(["antipode", "analyze"]), EXIT_BAD_PARAMS);
        assert_eq!(
            run(["antipode", "analyze", "--family", "hypercube"]),
            EXIT_BAD_PARAMS
        );
    }
}
