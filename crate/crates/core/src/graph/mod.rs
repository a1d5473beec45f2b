//! Simple undirected graphs, BFS shortest paths, the all-pairs metric, and
//! the single-BFS distribution fast path for certified-transitive graphs.

mod cayley;
mod generators;

pub use cayley::{cayley, CayleyGraph, CayleySpec};
pub use generators::{complete, cycle, hypercube, petersen};

use crate::metric::{DistanceDistribution, FiniteMetricSpace, HomogeneityEvidence, MetricError};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use std::collections::VecDeque;
use thiserror::Error;

/// Vertex cap for operations that materialize an n x n matrix.
pub const VERTEX_CAP_APSP: usize = 1 << 20;
/// Vertex cap for matrix-free operations (construction, BFS, fast path).
pub const VERTEX_CAP: usize = 1 << 26;

/// Marker for unreachable vertices in BFS output.
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph too large: {requested} vertices exceeds cap {cap}")]
    TooLarge { requested: usize, cap: usize },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("edge ({u},{v}) out of range for {n} vertices")]
    InvalidEdge { u: u32, v: u32, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("graph is disconnected; component of vertex {} has {} of {} vertices", .component_root, .component_size, .n)]
    Disconnected {
        component_root: usize,
        component_size: usize,
        n: usize,
    },
    #[error("connection set is not symmetric: missing inverse of element {0}")]
    NotSymmetricConnectionSet(String),
    #[error("connection set contains the identity")]
    ContainsIdentity,
    #[error("no transitivity certificate: {0}")]
    NoCertificate(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// An undirected simple graph with sorted neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
}

impl Graph {
    /// Build from an edge list; duplicate edges collapse, self-loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        if n > VERTEX_CAP {
            return Err(GraphError::TooLarge {
                requested: n,
                cap: VERTEX_CAP,
            });
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::InvalidEdge { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    /// Build from per-vertex neighbor lists that are already symmetric.
    pub(crate) fn from_adjacency(mut adj: Vec<Vec<u32>>) -> Self {
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let g = Graph { adj };
        debug_assert!(g.adjacency_is_symmetric());
        g
    }

    fn adjacency_is_symmetric(&self) -> bool {
        self.adj.iter().enumerate().all(|(v, list)| {
            list.iter()
                .all(|&u| u as usize != v && self.has_edge(u as usize, v))
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first()?.len();
        self.adj.iter().all(|l| l.len() == d).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        if self.adj.is_empty() {
            return true;
        }
        let dist = bfs_distances(self, 0);
        dist.iter().all(|&d| d != UNREACHABLE)
    }
}

/// Unweighted shortest-path distances from `source`; unreachable vertices
/// are marked [`UNREACHABLE`].
pub fn bfs_distances(g: &Graph, source: usize) -> Vec<u32> {
    let n = g.vertex_count();
    assert!(source < n, "source vertex out of range");
    let mut dist = vec![UNREACHABLE; n];
    dist[source] = 0;
    let mut queue = VecDeque::with_capacity(n);
    queue.push_back(source as u32);
    while let Some(v) = queue.pop_front() {
        let next = dist[v as usize] + 1;
        for &u in g.neighbors(v as usize) {
            if dist[u as usize] == UNREACHABLE {
                dist[u as usize] = next;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// The shortest-path metric of a connected graph, as an exact metric space
/// under uniform weights. Runs one BFS per vertex (in parallel, with
/// deterministic row order).
pub fn apsp_metric(g: &Graph) -> Result<FiniteMetricSpace, GraphError> {
    let n = g.vertex_count();
    if n > VERTEX_CAP_APSP {
        return Err(GraphError::TooLarge {
            requested: n,
            cap: VERTEX_CAP_APSP,
        });
    }
    if n == 0 {
        return Err(GraphError::BadParameter("empty graph".to_string()));
    }
    let first = bfs_distances(g, 0);
    if let Some(unreached) = first.iter().position(|&d| d == UNREACHABLE) {
        let component_size = first.iter().filter(|&&d| d != UNREACHABLE).count();
        let _ = unreached;
        return Err(GraphError::Disconnected {
            component_root: 0,
            component_size,
            n,
        });
    }
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(n);
    rows.push(first);
    rows.par_extend((1..n).into_par_iter().map(|v| bfs_distances(g, v)));
    Ok(FiniteMetricSpace::from_shortest_path_rows(&rows)?)
}

/// Distance distribution of a certified vertex-transitive graph from a single
/// BFS at vertex 0, without materializing the n x n matrix.
///
/// Homogeneity makes every vertex's distance profile identical, so
/// `Pr(d = t)` is `count(t) / n` with counts from one BFS row. Equals the
/// distribution of [`apsp_metric`] exactly.
pub fn transitive_distribution(
    g: &Graph,
    certificate: &HomogeneityEvidence,
) -> Result<DistanceDistribution, GraphError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(GraphError::BadParameter("empty graph".to_string()));
    }
    if n > VERTEX_CAP {
        return Err(GraphError::TooLarge {
            requested: n,
            cap: VERTEX_CAP,
        });
    }
    if !certificate.certifies_transitive(n) {
        return Err(GraphError::NoCertificate(format!(
            "evidence from {} does not certify a transitive action on {} vertices",
            certificate.source(),
            n
        )));
    }
    let dist = bfs_distances(g, 0);
    let mut max = 0u32;
    for &d in &dist {
        if d == UNREACHABLE {
            let component_size = dist.iter().filter(|&&x| x != UNREACHABLE).count();
            return Err(GraphError::Disconnected {
                component_root: 0,
                component_size,
                n,
            });
        }
        max = max.max(d);
    }
    let mut counts = vec![0u64; max as usize + 1];
    for &d in &dist {
        counts[d as usize] += 1;
    }
    let n_big = BigInt::from(n);
    let entries = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(value, &c)| {
            (
                BigRational::from_integer(BigInt::from(value)),
                BigRational::new(BigInt::from(c), n_big.clone()),
            )
        })
        .collect();
    Ok(DistanceDistribution::from_entries(entries))
}
