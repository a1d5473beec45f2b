//! Plain-text file formats.
//!
//! Distance matrix: first line `n`, then `n` whitespace-separated rows whose
//! entries are decimal integers or fractions `p/q`; an optional trailing line
//! `w: w_0 ... w_{n-1}` carries point weights.
//!
//! Edge list: first line `n m`, then `m` lines `u v` with 0-based endpoints.

use crate::graph::{Graph, GraphError};
use crate::metric::FiniteMetricSpace;
use crate::rational::{parse_ratio, ratio_string};
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FileFormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("empty input")]
    Empty,
}

fn parse_err(line: usize, message: impl Into<String>) -> FileFormatError {
    FileFormatError::Parse {
        line,
        message: message.into(),
    }
}

/// What a file contains, judged by its header line: one token is a matrix
/// (`n`), two tokens an edge list (`n m`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Matrix,
    EdgeList,
}

pub fn detect_kind(text: &str) -> Result<InputKind, FileFormatError> {
    let first = text
        .lines()
        .enumerate()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or(FileFormatError::Empty)?;
    match first.1.split_whitespace().count() {
        1 => Ok(InputKind::Matrix),
        2 => Ok(InputKind::EdgeList),
        k => Err(parse_err(
            first.0 + 1,
            format!("expected header `n` (matrix) or `n m` (edge list), found {k} tokens"),
        )),
    }
}

/// Parse a distance-matrix file into raw entries plus optional weights.
pub fn parse_matrix(
    text: &str,
) -> Result<(Vec<Vec<BigRational>>, Option<Vec<BigRational>>), FileFormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (header_no, header) = lines.next().ok_or(FileFormatError::Empty)?;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| parse_err(header_no + 1, format!("invalid size {header:?}")))?;
    let mut matrix = Vec::with_capacity(n);
    let mut weights = None;
    for (line_no, line) in lines {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("w:") {
            let w = parse_ratio_row(rest, line_no + 1)?;
            if w.len() != n {
                return Err(parse_err(
                    line_no + 1,
                    format!("expected {n} weights, found {}", w.len()),
                ));
            }
            weights = Some(w);
            continue;
        }
        if weights.is_some() {
            return Err(parse_err(line_no + 1, "content after the weights line"));
        }
        if matrix.len() == n {
            return Err(parse_err(line_no + 1, format!("more than {n} matrix rows")));
        }
        let row = parse_ratio_row(line, line_no + 1)?;
        if row.len() != n {
            return Err(parse_err(
                line_no + 1,
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        matrix.push(row);
    }
    if matrix.len() != n {
        return Err(parse_err(
            0,
            format!("expected {n} matrix rows, found {}", matrix.len()),
        ));
    }
    Ok((matrix, weights))
}

fn parse_ratio_row(text: &str, line: usize) -> Result<Vec<BigRational>, FileFormatError> {
    text.split_whitespace()
        .map(|token| parse_ratio(token).map_err(|e| parse_err(line, e)))
        .collect()
}

/// Serialize a metric space in the matrix format (weights line included only
/// when non-uniform).
pub fn write_matrix(space: &FiniteMetricSpace) -> String {
    let n = space.len();
    let mut out = String::new();
    out.push_str(&n.to_string());
    out.push('\n');
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| ratio_string(&space.distance(i, j)))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    if !space.has_uniform_weights() {
        let w: Vec<String> = (0..n).map(|i| ratio_string(&space.weight(i))).collect();
        out.push_str("w: ");
        out.push_str(&w.join(" "));
        out.push('\n');
    }
    out
}

/// Parse an edge-list file.
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<(u32, u32)>), FileFormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (header_no, header) = lines.next().ok_or(FileFormatError::Empty)?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(parse_err(header_no + 1, "expected header `n m`"));
    }
    let n: usize = parts[0]
        .parse()
        .map_err(|_| parse_err(header_no + 1, "invalid vertex count"))?;
    let m: usize = parts[1]
        .parse()
        .map_err(|_| parse_err(header_no + 1, "invalid edge count"))?;
    let mut edges = Vec::with_capacity(m);
    for (line_no, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(parse_err(line_no + 1, "expected `u v`"));
        }
        let u: u32 = parts[0]
            .parse()
            .map_err(|_| parse_err(line_no + 1, "invalid endpoint"))?;
        let v: u32 = parts[1]
            .parse()
            .map_err(|_| parse_err(line_no + 1, "invalid endpoint"))?;
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(parse_err(
            0,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Ok((n, edges))
}

pub fn build_graph(n: usize, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
    Graph::from_edges(n, edges)
}

/// Serialize a graph in the edge-list format (edges ascending, `u < v`).
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for u in 0..g.vertex_count() {
        for &v in g.neighbors(u) {
            if (v as usize) > u {
                out.push_str(&format!("{u} {v}\n"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle;
    use crate::metric::validate_metric;

    #[test]
    fn matrix_round_trip() {
        let text = "3\n0 1 1/2\n1 0 1\n1/2 1 0\n";
        let (matrix, weights) = parse_matrix(text).unwrap();
        assert!(weights.is_none());
        let space = validate_metric(&matrix, None).unwrap();
        assert_eq!(write_matrix(&space), text);
    }

    #[test]
    fn matrix_with_weights() {
        let text = "2\n0 1\n1 0\nw: 1/3 2/3\n";
        let (matrix, weights) = parse_matrix(text).unwrap();
        let space = validate_metric(&matrix, weights.as_deref()).unwrap();
        assert!(!space.has_uniform_weights());
        assert_eq!(write_matrix(&space), text);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = cycle(5).unwrap();
        let text = write_edge_list(&g);
        assert!(text.starts_with("5 5\n"));
        let (n, edges) = parse_edge_list(&text).unwrap();
        let parsed = build_graph(n, &edges).unwrap();
        assert_eq!(parsed, g);
    }

    #[test]
    fn kind_detection() {
        assert_eq!(detect_kind("3\n0 1 1\n...").unwrap(), InputKind::Matrix);
        assert_eq!(detect_kind("3 2\n0 1\n1 2\n").unwrap(), InputKind::EdgeList);
        assert!(detect_kind("").is_err());
        assert!(detect_kind("1 2 3\n").is_err());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_matrix("2\n0 x\n1 0\n").unwrap_err();
        assert!(matches!(err, FileFormatError::Parse { line: 2, .. }));
        let err = parse_edge_list("2 1\n0\n").unwrap_err();
        assert!(matches!(err, FileFormatError::Parse { line: 2, .. }));
    }
}
