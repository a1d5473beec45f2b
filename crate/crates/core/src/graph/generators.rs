//! Generators for the example graph families: hypercubes, cycles, complete
//! graphs, and the Petersen graph.

use super::{Graph, GraphError, VERTEX_CAP};

/// The d-dimensional hypercube `Q_d`: vertices are the integers `0..2^d`
/// read as bit patterns, edges join patterns at Hamming distance 1.
pub fn hypercube(d: u32) -> Result<Graph, GraphError> {
    if d == 0 || d > 30 {
        return Err(GraphError::BadParameter(format!(
            "hypercube dimension must be in 1..=30, got {d}"
        )));
    }
    let n = 1usize << d;
    if n > VERTEX_CAP {
        return Err(GraphError::TooLarge {
            requested: n,
            cap: VERTEX_CAP,
        });
    }
    let adj = (0..n)
        .map(|v| (0..d).map(|bit| (v ^ (1 << bit)) as u32).collect())
        .collect();
    Ok(Graph::from_adjacency(adj))
}

/// The cycle graph `C_n`, `n >= 3`.
pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::BadParameter(format!(
            "cycle needs at least 3 vertices, got {n}"
        )));
    }
    if n > VERTEX_CAP {
        return Err(GraphError::TooLarge {
            requested: n,
            cap: VERTEX_CAP,
        });
    }
    let adj = (0..n)
        .map(|v| {
            vec![
                ((v + n - 1) % n) as u32,
                ((v + 1) % n) as u32,
            ]
        })
        .collect();
    Ok(Graph::from_adjacency(adj))
}

/// The complete graph `K_n`, `n >= 2`.
pub fn complete(n: usize) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::BadParameter(format!(
            "complete graph needs at least 2 vertices, got {n}"
        )));
    }
    // K_n adjacency is quadratic; use the matrix cap.
    if n > super::VERTEX_CAP_APSP {
        return Err(GraphError::TooLarge {
            requested: n,
            cap: super::VERTEX_CAP_APSP,
        });
    }
    let adj = (0..n)
        .map(|v| (0..n).filter(|&u| u != v).map(|u| u as u32).collect())
        .collect();
    Ok(Graph::from_adjacency(adj))
}

/// The Petersen graph: outer 5-cycle 0..4, inner pentagram 5..9, spokes.
pub fn petersen() -> Graph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5u32 {
        edges.push((i, (i + 1) % 5)); // outer cycle
        edges.push((5 + i, 5 + (i + 2) % 5)); // inner pentagram
        edges.push((i, 5 + i)); // spokes
    }
    Graph::from_edges(10, &edges).expect("static construction")
}
