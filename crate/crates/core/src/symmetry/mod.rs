//! Automorphism search and vertex-transitivity certification: the
//! computational stand-in for "the isometry group acts transitively".
//! On a connected graph the automorphisms are exactly the isometries of the
//! shortest-path metric; general metric spaces are handled as distance-
//! colored complete graphs by the same engine.

mod search;

pub use search::{automorphism_search, isometry_search, DEFAULT_SEARCH_BUDGET};

use crate::graph::Graph;
use crate::metric::{FiniteMetricSpace, HomogeneityEvidence};
use std::collections::{HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("permutation does not preserve the structure")]
    NotStructurePreserving,
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("transitivity inconclusive: search truncated with incomplete orbits")]
    Inconclusive,
}

/// A permutation of `0..n`, stored by images.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, SymmetryError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img as usize >= n || seen[img as usize] {
                return Err(SymmetryError::NotAPermutation(format!(
                    "images {images:?} are not a bijection on 0..{n}"
                )));
            }
            seen[img as usize] = true;
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.images[v] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// `(self . other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: other.images.iter().map(|&v| self.images[v as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.images.len()];
        for (v, &img) in self.images.iter().enumerate() {
            images[img as usize] = v as u32;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(v, &img)| v as u32 == img)
    }
}

/// One-line image serialization: `p(0) p(1) ... p(n-1)`.
impl std::fmt::Display for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let strings: Vec<String> = self.images.iter().map(|v| v.to_string()).collect();
        f.write_str(&strings.join(" "))
    }
}

/// Vertex coloring with densely numbered classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredPartition {
    colors: Vec<u32>,
    num_classes: u32,
}

impl ColoredPartition {
    pub fn uniform(n: usize) -> Self {
        ColoredPartition {
            colors: vec![0; n],
            num_classes: if n == 0 { 0 } else { 1 },
        }
    }

    /// Normalize arbitrary labels into dense class ids (by first occurrence).
    pub fn from_labels(labels: &[u32]) -> Self {
        let mut lookup = std::collections::HashMap::new();
        let mut next = 0u32;
        let colors = labels
            .iter()
            .map(|&l| {
                *lookup.entry(l).or_insert_with(|| {
                    let id = next;
                    next += 1;
                    id
                })
            })
            .collect();
        ColoredPartition {
            colors,
            num_classes: next,
        }
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes as usize
    }

    pub fn is_discrete(&self) -> bool {
        self.num_classes as usize == self.colors.len()
    }

    pub fn class_members(&self, class: u32) -> Vec<usize> {
        (0..self.colors.len())
            .filter(|&v| self.colors[v] == class)
            .collect()
    }

    /// Individualize vertex `v` into a fresh singleton class.
    pub fn individualize(&self, v: usize) -> Self {
        let mut colors = self.colors.clone();
        colors[v] = self.num_classes;
        ColoredPartition {
            colors,
            num_classes: self.num_classes + 1,
        }
    }
}

/// Coarsest equitable refinement of `initial` on `g`: vertices end up in the
/// same class only if they have identical color multisets over their
/// neighborhoods. Idempotent; never merges classes.
pub fn refine_colors(g: &Graph, initial: &ColoredPartition) -> ColoredPartition {
    let mut colors = initial.colors.clone();
    let k = search::refine_graph(g, &mut colors, initial.num_classes);
    ColoredPartition {
        colors,
        num_classes: k,
    }
}

/// A generating set for (a subgroup of) the automorphism group, with the
/// orbit partition it induces and per-vertex witness words for producing
/// explicit mapping automorphisms.
#[derive(Debug, Clone)]
pub struct AutomorphismSet {
    n: usize,
    generators: Vec<Perm>,
    orbit_id: Vec<usize>,
    orbit_reps: Vec<usize>,
    /// For non-root orbit members: `(parent, generator index)` with
    /// `gen(parent) = vertex`.
    witness: Vec<Option<(usize, usize)>>,
    /// Search nodes expended to produce this set (0 for constructed sets).
    pub nodes_explored: u64,
    /// True when the producing search ran out of budget; orbits may then be
    /// finer than the true automorphism orbits.
    pub truncated: bool,
}

impl AutomorphismSet {
    /// Build from generators already known to preserve the structure.
    pub(crate) fn from_verified_generators(
        n: usize,
        generators: Vec<Perm>,
        nodes_explored: u64,
        truncated: bool,
    ) -> Self {
        let mut orbit_id = vec![usize::MAX; n];
        let mut orbit_reps = Vec::new();
        let mut witness = vec![None; n];
        for root in 0..n {
            if orbit_id[root] != usize::MAX {
                continue;
            }
            let oid = orbit_reps.len();
            orbit_reps.push(root);
            orbit_id[root] = oid;
            let mut queue = VecDeque::from([root]);
            while let Some(at) = queue.pop_front() {
                for (gi, g) in generators.iter().enumerate() {
                    let to = g.apply(at);
                    if orbit_id[to] == usize::MAX {
                        orbit_id[to] = oid;
                        witness[to] = Some((at, gi));
                        queue.push_back(to);
                    }
                }
            }
        }
        AutomorphismSet {
            n,
            generators,
            orbit_id,
            orbit_reps,
            witness,
            nodes_explored,
            truncated,
        }
    }

    /// Wrap generators as graph automorphisms, verifying each one
    /// edge-by-edge.
    pub fn for_graph(g: &Graph, generators: Vec<Perm>) -> Result<Self, SymmetryError> {
        let n = g.vertex_count();
        for p in &generators {
            if p.degree() != n || !search::preserves_graph(g, p) {
                return Err(SymmetryError::NotStructurePreserving);
            }
        }
        Ok(Self::from_verified_generators(n, generators, 0, false))
    }

    /// Wrap generators as metric isometries, verifying each one
    /// pair-by-pair.
    pub fn for_metric(
        space: &FiniteMetricSpace,
        generators: Vec<Perm>,
    ) -> Result<Self, SymmetryError> {
        let n = space.len();
        for p in &generators {
            if p.degree() != n {
                return Err(SymmetryError::NotStructurePreserving);
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    if !space.distances_equal((i, j), (p.apply(i), p.apply(j))) {
                        return Err(SymmetryError::NotStructurePreserving);
                    }
                }
            }
        }
        Ok(Self::from_verified_generators(n, generators, 0, false))
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn orbit_count(&self) -> usize {
        self.orbit_reps.len()
    }

    pub fn orbit_ids(&self) -> &[usize] {
        &self.orbit_id
    }

    pub fn single_orbit(&self) -> bool {
        self.orbit_reps.len() <= 1
    }

    /// Sorted orbit of `v` under the generated group.
    pub fn orbit_of(&self, v: usize) -> Vec<usize> {
        let oid = self.orbit_id[v];
        (0..self.n).filter(|&u| self.orbit_id[u] == oid).collect()
    }

    /// An explicit group element taking `x` to `y`, composed from witness
    /// words; `None` when they lie in different orbits.
    pub fn mapping_to(&self, x: usize, y: usize) -> Option<Perm> {
        if self.orbit_id[x] != self.orbit_id[y] {
            return None;
        }
        let px = self.word_from_root(x);
        let py = self.word_from_root(y);
        let result = py.compose(&px.inverse());
        debug_assert_eq!(result.apply(x), y);
        Some(result)
    }

    /// Permutation taking the orbit root to `v` (a product of generators).
    fn word_from_root(&self, v: usize) -> Perm {
        let mut chain = Vec::new();
        let mut at = v;
        while let Some((parent, gi)) = self.witness[at] {
            chain.push(gi);
            at = parent;
        }
        let mut p = Perm::identity(self.n);
        for &gi in chain.iter().rev() {
            p = self.generators[gi].compose(&p);
        }
        p
    }

    /// Package the orbit partition as homogeneity evidence for the
    /// antipodality classifier.
    pub fn evidence(&self, source: impl Into<String>) -> HomogeneityEvidence {
        HomogeneityEvidence::from_orbits(self.orbit_id.clone(), !self.truncated, source)
    }

    /// Order of the generated group by closure enumeration, or `None` once
    /// `cap` elements are exceeded. Intended for small groups (tests,
    /// oracles).
    pub fn group_order(&self, cap: usize) -> Option<u64> {
        let mut seen: HashSet<Perm> = HashSet::new();
        let identity = Perm::identity(self.n);
        seen.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(at) = queue.pop_front() {
            for g in &self.generators {
                let next = g.compose(&at);
                if !seen.contains(&next) {
                    if seen.len() >= cap {
                        return None;
                    }
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Some(seen.len() as u64)
    }
}

/// Certified verdict on vertex-transitivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transitivity {
    Certified(TransitivityCertificate),
    Refuted(TransitivityRefutation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitivityCertificate {
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransitivityRefutation {
    /// Complete search produced more than one orbit.
    MultipleOrbits { orbit_count: usize },
    /// A label-invariant refinement separates two vertices (degree or
    /// equitable-class structure), so no automorphism can map one to the
    /// other.
    RefinementSplit { classes: usize, witness: (usize, usize) },
}

/// Decide vertex-transitivity from a verified automorphism set.
///
/// A single orbit certifies (even from a truncated search); multiple orbits
/// from a complete search refute; a truncated multi-orbit set falls back to
/// the equitable-refinement invariant and errors `Inconclusive` when that
/// cannot separate vertices either.
pub fn is_vertex_transitive(
    g: &Graph,
    auts: &AutomorphismSet,
) -> Result<Transitivity, SymmetryError> {
    if auts.single_orbit() {
        return Ok(Transitivity::Certified(TransitivityCertificate {
            source: "orbit closure of verified automorphisms covers all vertices".to_string(),
        }));
    }
    if !auts.truncated {
        return Ok(Transitivity::Refuted(TransitivityRefutation::MultipleOrbits {
            orbit_count: auts.orbit_count(),
        }));
    }
    let refined = refine_colors(g, &ColoredPartition::uniform(g.vertex_count()));
    if refined.num_classes() > 1 {
        let colors = refined.colors();
        let witness = (0..colors.len())
            .find(|&v| colors[v] != colors[0])
            .map(|v| (0, v))
            .expect("more than one class implies a split vertex");
        return Ok(Transitivity::Refuted(TransitivityRefutation::RefinementSplit {
            classes: refined.num_classes(),
            witness,
        }));
    }
    Err(SymmetryError::Inconclusive)
}

/// Sorted orbit of `v` under the generated group.
pub fn orbit_of(v: usize, auts: &AutomorphismSet) -> Vec<usize> {
    auts.orbit_of(v)
}

/// An explicit automorphism of `g` taking `x` to `y`, or `None` if `y` is
/// not in the orbit of `x`.
pub fn find_mapping_automorphism(
    x: usize,
    y: usize,
    g: &Graph,
    auts: &AutomorphismSet,
) -> Option<Perm> {
    let p = auts.mapping_to(x, y)?;
    debug_assert!(search::preserves_graph(g, &p));
    debug_assert_eq!(p.apply(x), y);
    Some(p)
}
