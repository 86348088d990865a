//! k-uniform hypergraphs and supertrees.
//!
//! A [`Hypergraph`] is an edge list over dense vertex identifiers `0..n` with a
//! cached vertex-to-edge incidence table. A [`Supertree`] is a hypergraph that
//! has been checked to be connected and acyclic; every named family and every
//! enumerated graph in this crate is a supertree.

mod canon;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::ops::Deref;

use thiserror::Error;

pub use canon::CanonicalCode;

/// Vertex identifier, always `< n`.
pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("uniformity must be at least 2, got k = {0}")]
    BadUniformity(usize),
    #[error("edge {index} has {len} distinct vertices, expected k = {k}")]
    NonUniformEdge { index: usize, len: usize, k: usize },
    #[error("edge {index} repeats edge {first}")]
    DuplicateEdge { index: usize, first: usize },
    #[error("edge {index} mentions vertex {vertex}, but n = {n}")]
    VertexOutOfRange { index: usize, vertex: usize, n: usize },
    #[error("hypergraph is disconnected")]
    Disconnected,
    #[error("hypergraph has a cycle: n = {n} but m(k-1)+1 = {expected}")]
    HasCycle { n: usize, expected: usize },
    #[error("edges {0} and {1} share more than one vertex")]
    IntersectionTooLarge(usize, usize),
}

/// A k-uniform hypergraph on vertices `0..n`.
///
/// Edges are stored as strictly increasing vertex lists in insertion order;
/// edge indices are positions in that order.
#[derive(Clone, PartialEq, Eq)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    edges: Vec<Vec<Vertex>>,
    incidence: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new<E, I>(k: usize, n: usize, edges: E) -> Result<Self, GraphError>
    where
        E: IntoIterator<Item = I>,
        I: IntoIterator<Item = Vertex>,
    {
        if k < 2 {
            return Err(GraphError::BadUniformity(k));
        }
        let mut stored: Vec<Vec<Vertex>> = Vec::new();
        for (index, edge) in edges.into_iter().enumerate() {
            let raw: Vec<Vertex> = edge.into_iter().collect();
            if let Some(&vertex) = raw.iter().find(|&&v| v >= n) {
                return Err(GraphError::VertexOutOfRange { index, vertex, n });
            }
            let set: BTreeSet<Vertex> = raw.iter().copied().collect();
            if set.len() != k || raw.len() != k {
                return Err(GraphError::NonUniformEdge {
                    index,
                    len: set.len(),
                    k,
                });
            }
            stored.push(set.into_iter().collect());
        }
        let mut seen = std::collections::HashMap::with_capacity(stored.len());
        for (index, edge) in stored.iter().enumerate() {
            if let Some(&first) = seen.get(edge) {
                return Err(GraphError::DuplicateEdge { index, first });
            }
            seen.insert(edge.clone(), index);
        }
        Ok(Self::from_sorted_unchecked(k, n, stored))
    }

    /// Builds the incidence table for edges already known to be valid.
    pub(crate) fn from_sorted_unchecked(k: usize, n: usize, edges: Vec<Vec<Vertex>>) -> Self {
        let mut incidence = vec![Vec::new(); n];
        for (j, edge) in edges.iter().enumerate() {
            for &v in edge {
                incidence[v].push(j);
            }
        }
        Hypergraph {
            k,
            n,
            edges,
            incidence,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    pub fn edge(&self, j: usize) -> &[Vertex] {
        &self.edges[j]
    }

    /// Indices of the edges containing `v`.
    pub fn incident(&self, v: Vertex) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.incidence[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.incidence.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Degree multiset, sorted non-increasing.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d = self.degrees();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    pub fn contains_edge(&self, edge: &[Vertex]) -> bool {
        let mut sorted = edge.to_vec();
        sorted.sort_unstable();
        sorted
            .first()
            .map(|&v| self.incidence[v].iter().any(|&j| self.edges[j] == sorted))
            .unwrap_or(false)
    }

    /// Edge-count distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut edge_seen = vec![false; self.edges.len()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let next = dist[v].unwrap() + 1;
            for &j in &self.incidence[v] {
                if std::mem::replace(&mut edge_seen[j], true) {
                    continue;
                }
                for &w in &self.edges[j] {
                    if dist[w].is_none() {
                        dist[w] = Some(next);
                        queue.push_back(w);
                    }
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.distances_from(0).iter().all(Option::is_some)
    }

    /// Applies `perm` (old label -> new label) to every vertex. Edge order is kept.
    pub fn relabel(&self, perm: &[Vertex]) -> Hypergraph {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let mut mapped: Vec<Vertex> = e.iter().map(|&v| perm[v]).collect();
                mapped.sort_unstable();
                mapped
            })
            .collect();
        Hypergraph::from_sorted_unchecked(self.k, self.n, edges)
    }

    /// Replaces the listed edges and revalidates uniqueness.
    pub(crate) fn with_replaced_edges(
        &self,
        replacements: &[(usize, Vec<Vertex>)],
    ) -> Result<Hypergraph, GraphError> {
        let mut edges = self.edges.clone();
        for (j, edge) in replacements {
            edges[*j] = edge.clone();
        }
        Hypergraph::new(self.k, self.n, edges)
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hypergraph")
            .field("k", &self.k)
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

/// A connected, acyclic k-uniform hypergraph.
#[derive(Clone, PartialEq, Eq)]
pub struct Supertree(Hypergraph);

impl Supertree {
    /// Acyclicity is the count identity `n = m(k-1) + 1` together with
    /// connectivity: the vertex-edge incidence graph then has `n + m` nodes and
    /// `n + m - 1` incidences, so it is a tree.
    pub fn new(graph: Hypergraph) -> Result<Self, GraphError> {
        if !graph.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let expected = graph.m() * (graph.k - 1) + 1;
        if graph.n != expected {
            return Err(GraphError::HasCycle {
                n: graph.n,
                expected,
            });
        }
        let mut pairs = HashSet::new();
        for v in 0..graph.n {
            let inc = &graph.incidence[v];
            for (a, &i) in inc.iter().enumerate() {
                for &j in &inc[a + 1..] {
                    if !pairs.insert((i.min(j), i.max(j))) {
                        return Err(GraphError::IntersectionTooLarge(i.min(j), i.max(j)));
                    }
                }
            }
        }
        Ok(Supertree(graph))
    }

    /// Wraps a hypergraph the caller has constructed as a supertree.
    pub(crate) fn new_unchecked(graph: Hypergraph) -> Self {
        debug_assert!(Supertree::new(graph.clone()).is_ok());
        Supertree(graph)
    }

    pub fn graph(&self) -> &Hypergraph {
        &self.0
    }

    /// Attaches a new edge at `anchor` made of `k - 1` fresh vertices.
    pub fn with_pendent_edge(&self, anchor: Vertex) -> Supertree {
        let (k, n) = (self.k(), self.n());
        let mut edges = self.edges().to_vec();
        let mut e = vec![anchor];
        e.extend(n..n + k - 1);
        edges.push(e);
        Supertree(Hypergraph::from_sorted_unchecked(k, n + k - 1, edges))
    }

    pub fn into_inner(self) -> Hypergraph {
        self.0
    }

    /// Largest edge-count distance over all vertex pairs.
    pub fn diameter(&self) -> usize {
        if self.m() == 0 {
            return 0;
        }
        // Both ends of a longest path have degree 1, and degree-1 vertices of
        // the same edge have the same eccentricity: one BFS per such edge.
        let mut best = 0;
        let mut done = vec![false; self.m()];
        for v in 0..self.n() {
            if self.degree(v) != 1 {
                continue;
            }
            let j = self.incident(v)[0];
            if std::mem::replace(&mut done[j], true) {
                continue;
            }
            let ecc = self
                .distances_from(v)
                .into_iter()
                .map(|d| d.expect("supertree is connected"))
                .max()
                .unwrap_or(0);
            best = best.max(ecc);
        }
        best
    }

    /// Whether edge `j` is a pendent edge: `k - 1` vertices of degree 1 and
    /// the remaining vertex of degree at least 2.
    pub fn is_pendent_edge(&self, j: usize) -> bool {
        let edge = self.edge(j);
        let ones = edge.iter().filter(|&&v| self.degree(v) == 1).count();
        ones == self.k() - 1 && edge.iter().any(|&v| self.degree(v) >= 2)
    }

    pub fn pendent_edges(&self) -> Vec<usize> {
        (0..self.m()).filter(|&j| self.is_pendent_edge(j)).collect()
    }

    /// `(p, q)`: number of pendent edges and of pendent (degree-1) vertices.
    ///
    /// A single edge has no anchor of degree at least 2, so it counts as zero
    /// pendent edges.
    pub fn pendent_counts(&self) -> (usize, usize) {
        let q = (0..self.n()).filter(|&v| self.degree(v) == 1).count();
        (self.pendent_edges().len(), q)
    }

    /// Vertices of edge `j` with degree at least 2.
    pub fn non_pendent_vertices(&self, j: usize) -> Vec<Vertex> {
        self.edge(j)
            .iter()
            .copied()
            .filter(|&v| self.degree(v) >= 2)
            .collect()
    }

    /// An edge with at least three non-pendent vertices.
    pub fn is_branch_edge(&self, j: usize) -> bool {
        self.non_pendent_vertices(j).len() >= 3
    }

    /// Power hypertree test: every edge has at least `k - 2` vertices of degree 1.
    pub fn is_hypertree(&self) -> bool {
        (0..self.m()).all(|j| {
            self.edge(j).iter().filter(|&&v| self.degree(v) == 1).count() + 2 >= self.k()
        })
    }

    pub fn canonical_code(&self) -> CanonicalCode {
        canon::canonical_code(self)
    }

    pub fn relabel(&self, perm: &[Vertex]) -> Supertree {
        Supertree(self.0.relabel(perm))
    }
}

impl Deref for Supertree {
    type Target = Hypergraph;

    fn deref(&self) -> &Hypergraph {
        &self.0
    }
}

impl fmt::Debug for Supertree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Supertree").field(&self.0).finish()
    }
}

impl TryFrom<Hypergraph> for Supertree {
    type Error = GraphError;

    fn try_from(graph: Hypergraph) -> Result<Self, GraphError> {
        Supertree::new(graph)
    }
}
