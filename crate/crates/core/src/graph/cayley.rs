//! Cayley graph construction for finite abelian groups and permutation
//! groups. Vertex-transitivity comes for free: left translations are
//! adjacency-preserving, so every Cayley graph ships with a construction
//! certificate and a verified translation generator set.

use super::{Graph, GraphError, VERTEX_CAP, VERTEX_CAP_APSP};
use crate::metric::HomogeneityEvidence;
use crate::symmetry::{AutomorphismSet, Perm};
use std::collections::{HashMap, VecDeque};

/// Group description plus connection set.
#[derive(Debug, Clone)]
pub enum CayleySpec {
    /// `Z_{m_1} x ... x Z_{m_r}`; connection elements are coordinate vectors
    /// (reduced mod the moduli). Vertices are mixed-radix indices with the
    /// first coordinate most significant.
    Abelian {
        moduli: Vec<u64>,
        connection: Vec<Vec<i64>>,
    },
    /// Subgroup of `S_degree` generated by the connection set; vertices are
    /// the group elements in lexicographic order of their image vectors.
    Permutation { degree: usize, connection: Vec<Perm> },
}

/// A constructed Cayley graph with its transitivity certificate.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    pub graph: Graph,
    /// Whether the connection set generates the group. A disconnected graph
    /// is still returned (with this flag false) so the failure can be
    /// inspected.
    pub connected: bool,
    /// Transitive-by-construction certificate (left translations).
    pub evidence: HomogeneityEvidence,
    /// Verified translation automorphisms generating a transitive group.
    pub translations: AutomorphismSet,
}

pub fn cayley(spec: &CayleySpec) -> Result<CayleyGraph, GraphError> {
    match spec {
        CayleySpec::Abelian { moduli, connection } => cayley_abelian(moduli, connection),
        CayleySpec::Permutation { degree, connection } => {
            cayley_permutation(*degree, connection)
        }
    }
}

fn cayley_abelian(moduli: &[u64], connection: &[Vec<i64>]) -> Result<CayleyGraph, GraphError> {
    if moduli.is_empty() {
        return Err(GraphError::BadParameter("no moduli given".to_string()));
    }
    if let Some(&m) = moduli.iter().find(|&&m| m < 2) {
        return Err(GraphError::BadParameter(format!(
            "moduli must be at least 2, got {m}"
        )));
    }
    let mut order: usize = 1;
    for &m in moduli {
        order = order
            .checked_mul(m as usize)
            .filter(|&o| o <= VERTEX_CAP)
            .ok_or(GraphError::TooLarge {
                requested: usize::MAX,
                cap: VERTEX_CAP,
            })?;
    }

    // Reduce, dedup, and check the connection set.
    let mut reduced: Vec<Vec<u64>> = Vec::new();
    for element in connection {
        if element.len() != moduli.len() {
            return Err(GraphError::BadParameter(format!(
                "connection element {element:?} has {} coordinates, expected {}",
                element.len(),
                moduli.len()
            )));
        }
        let r: Vec<u64> = element
            .iter()
            .zip(moduli)
            .map(|(&c, &m)| c.rem_euclid(m as i64) as u64)
            .collect();
        if r.iter().all(|&c| c == 0) {
            return Err(GraphError::ContainsIdentity);
        }
        if !reduced.contains(&r) {
            reduced.push(r);
        }
    }
    for r in &reduced {
        let neg: Vec<u64> = r.iter().zip(moduli).map(|(&c, &m)| (m - c) % m).collect();
        if !reduced.contains(&neg) {
            return Err(GraphError::NotSymmetricConnectionSet(format!("{r:?}")));
        }
    }

    let strides = mixed_radix_strides(moduli);
    let encode = |coords: &[u64]| -> usize {
        coords
            .iter()
            .zip(&strides)
            .map(|(&c, &s)| c as usize * s)
            .sum()
    };
    let adj: Vec<Vec<u32>> = (0..order)
        .map(|idx| {
            let coords = mixed_radix_decode(idx, moduli, &strides);
            reduced
                .iter()
                .map(|s| {
                    let shifted: Vec<u64> = coords
                        .iter()
                        .zip(s)
                        .zip(moduli)
                        .map(|((&c, &d), &m)| (c + d) % m)
                        .collect();
                    encode(&shifted) as u32
                })
                .collect()
        })
        .collect();
    let graph = Graph::from_adjacency(adj);
    let connected = graph.is_connected();

    // Unit translations generate the full translation group regardless of
    // whether the connection set does.
    let translations: Vec<Perm> = (0..moduli.len())
        .map(|coord| {
            let images = (0..order)
                .map(|idx| {
                    let mut coords = mixed_radix_decode(idx, moduli, &strides);
                    coords[coord] = (coords[coord] + 1) % moduli[coord];
                    encode(&coords) as u32
                })
                .collect();
            Perm::from_images(images).expect("translation is a permutation")
        })
        .collect();
    let translations = AutomorphismSet::for_graph(&graph, translations)
        .expect("translations preserve Cayley adjacency");
    debug_assert!(translations.single_orbit());

    Ok(CayleyGraph {
        graph,
        connected,
        evidence: HomogeneityEvidence::by_construction(
            "Cayley construction (abelian): left translations act transitively",
        ),
        translations,
    })
}

fn mixed_radix_strides(moduli: &[u64]) -> Vec<usize> {
    let mut strides = vec![1usize; moduli.len()];
    for i in (0..moduli.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * moduli[i + 1] as usize;
    }
    strides
}

fn mixed_radix_decode(idx: usize, moduli: &[u64], strides: &[usize]) -> Vec<u64> {
    moduli
        .iter()
        .zip(strides)
        .map(|(&m, &s)| (idx / s % m as usize) as u64)
        .collect()
}

fn cayley_permutation(degree: usize, connection: &[Perm]) -> Result<CayleyGraph, GraphError> {
    if degree == 0 {
        return Err(GraphError::BadParameter(
            "permutation degree must be positive".to_string(),
        ));
    }
    let mut set: Vec<Perm> = Vec::new();
    for p in connection {
        if p.degree() != degree {
            return Err(GraphError::BadParameter(format!(
                "generator degree {} does not match declared degree {degree}",
                p.degree()
            )));
        }
        if p.is_identity() {
            return Err(GraphError::ContainsIdentity);
        }
        if !set.contains(p) {
            set.push(p.clone());
        }
    }
    for p in &set {
        if !set.contains(&p.inverse()) {
            return Err(GraphError::NotSymmetricConnectionSet(format!("{p}")));
        }
    }

    // Enumerate <S> by right multiplication from the identity.
    let identity = Perm::identity(degree);
    let mut index: HashMap<Perm, usize> = HashMap::new();
    let mut elements: Vec<Perm> = vec![identity.clone()];
    index.insert(identity, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(at) = queue.pop_front() {
        let current = elements[at].clone();
        for s in &set {
            let next = current.compose(s);
            if !index.contains_key(&next) {
                if elements.len() >= VERTEX_CAP_APSP {
                    return Err(GraphError::TooLarge {
                        requested: elements.len() + 1,
                        cap: VERTEX_CAP_APSP,
                    });
                }
                index.insert(next.clone(), elements.len());
                elements.push(next);
                queue.push_back(elements.len() - 1);
            }
        }
    }

    // Relabel by lexicographic rank of the image vectors.
    let mut order: Vec<usize> = (0..elements.len()).collect();
    order.sort_by(|&a, &b| elements[a].images().cmp(elements[b].images()));
    let mut rank = vec![0usize; elements.len()];
    for (r, &old) in order.iter().enumerate() {
        rank[old] = r;
    }
    let sorted: Vec<Perm> = order.iter().map(|&old| elements[old].clone()).collect();

    let adj: Vec<Vec<u32>> = sorted
        .iter()
        .map(|x| {
            set.iter()
                .map(|s| {
                    let y = x.compose(s);
                    rank[index[&y]] as u32
                })
                .collect()
        })
        .collect();
    let graph = Graph::from_adjacency(adj);
    debug_assert!(set.is_empty() || graph.is_connected());

    // Left translations by the connection set generate the transitive left
    // action of <S> on itself.
    let translations: Vec<Perm> = set
        .iter()
        .map(|g| {
            let images = sorted
                .iter()
                .map(|x| rank[index[&g.compose(x)]] as u32)
                .collect();
            Perm::from_images(images).expect("left translation is a permutation")
        })
        .collect();
    let translations = AutomorphismSet::for_graph(&graph, translations)
        .expect("left translations preserve Cayley adjacency");

    Ok(CayleyGraph {
        graph,
        connected: true,
        evidence: HomogeneityEvidence::by_construction(
            "Cayley construction (permutation group): left translations act transitively",
        ),
        translations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, hypercube};

    #[test]
    fn z12_with_unit_steps_is_the_cycle() {
        let spec = CayleySpec::Abelian {
            moduli: vec![12],
            connection: vec![vec![1], vec![-1]],
        };
        let out = cayley(&spec).unwrap();
        assert!(out.connected);
        assert_eq!(out.graph, cycle(12).unwrap());
        assert!(out.translations.single_orbit());
    }

    #[test]
    fn z2_cubed_with_unit_vectors_is_the_hypercube() {
        let spec = CayleySpec::Abelian {
            moduli: vec![2, 2, 2],
            connection: vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        };
        let out = cayley(&spec).unwrap();
        assert!(out.connected);
        assert_eq!(out.graph, hypercube(3).unwrap());
    }

    #[test]
    fn disconnected_connection_set_is_flagged() {
        let spec = CayleySpec::Abelian {
            moduli: vec![12],
            connection: vec![vec![2], vec![-2]],
        };
        let out = cayley(&spec).unwrap();
        assert!(!out.connected);
        assert_eq!(out.graph.vertex_count(), 12);
        // The translation certificate is unaffected: the group still acts
        // transitively on vertices even when S fails to generate.
        assert!(out.translations.single_orbit());
    }

    #[test]
    fn rejects_asymmetric_and_identity_sets() {
        let spec = CayleySpec::Abelian {
            moduli: vec![5],
            connection: vec![vec![1]],
        };
        assert!(matches!(
            cayley(&spec),
            Err(GraphError::NotSymmetricConnectionSet(_))
        ));
        let spec = CayleySpec::Abelian {
            moduli: vec![5],
            connection: vec![vec![0]],
        };
        assert!(matches!(cayley(&spec), Err(GraphError::ContainsIdentity)));
    }

    #[test]
    fn s3_on_transpositions_is_a_hexagon() {
        let spec = CayleySpec::Permutation {
            degree: 3,
            connection: vec![
                Perm::from_images(vec![1, 0, 2]).unwrap(),
                Perm::from_images(vec![0, 2, 1]).unwrap(),
            ],
        };
        let out = cayley(&spec).unwrap();
        assert_eq!(out.graph.vertex_count(), 6);
        assert_eq!(out.graph.regular_degree(), Some(2));
        assert!(out.connected);
        assert!(out.translations.single_orbit());
    }
}
