//! Named supertree families.
//!
//! Labeling convention, shared by every constructor: the loose-path spine comes
//! first, with spine vertex `v_i` (1-based along the path) at label
//! `(i - 1)(k - 1)` and edge `e_i` holding the `k` consecutive labels starting
//! there. Attached edges follow in order, each made of its anchor plus `k - 1`
//! fresh labels. Constructions are therefore reproducible bit for bit, while
//! isomorphism questions always go through [`CanonicalCode`](crate::hypergraph::CanonicalCode).

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{GraphError, Hypergraph, Supertree, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("input edge list is not a tree: {0}")]
    InputNotATree(String),
    #[error("degree sequence is not realizable: {0}")]
    NotRealizable(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn bad(msg: impl Into<String>) -> FamilyError {
    FamilyError::BadParams(msg.into())
}

/// Incremental edge-list builder used by all constructors.
struct Builder {
    k: usize,
    n: usize,
    edges: Vec<Vec<Vertex>>,
}

impl Builder {
    fn new(k: usize) -> Self {
        Builder {
            k,
            n: 1,
            edges: Vec::new(),
        }
    }

    /// Adds an edge through `anchor` with `k - 1` fresh vertices; returns them.
    fn attach(&mut self, anchor: Vertex) -> Vec<Vertex> {
        let fresh: Vec<Vertex> = (self.n..self.n + self.k - 1).collect();
        self.n += self.k - 1;
        let mut edge = vec![anchor];
        edge.extend(&fresh);
        self.edges.push(edge);
        fresh
    }

    /// Loose path of `len` edges starting at `start`; returns its far end.
    fn path(&mut self, start: Vertex, len: usize) -> Vertex {
        let mut end = start;
        for _ in 0..len {
            end = *self.attach(end).last().unwrap();
        }
        end
    }

    fn finish(self) -> Result<Supertree, FamilyError> {
        let g = Hypergraph::new(self.k, self.n, self.edges)?;
        Ok(Supertree::new(g)?)
    }
}

fn check_k(k: usize) -> Result<(), FamilyError> {
    if k < 2 {
        return Err(bad(format!("k must be at least 2, got {k}")));
    }
    Ok(())
}

/// Spine vertex `v_i` (1-based) of the leading loose path.
pub fn spine_vertex(i: usize, k: usize) -> Vertex {
    (i - 1) * (k - 1)
}

/// Loose path with `m` edges: `e_i = {(i-1)(k-1), ..., (i-1)(k-1) + k - 1}`.
pub fn loose_path(m: usize, k: usize) -> Result<Supertree, FamilyError> {
    check_k(k)?;
    if m < 1 {
        return Err(bad("loose path needs m >= 1"));
    }
    let mut b = Builder::new(k);
    b.path(0, m);
    b.finish()
}

/// Hyperstar: `m` edges through the center `0`.
pub fn hyperstar(m: usize, k: usize) -> Result<Supertree, FamilyError> {
    check_k(k)?;
    if m < 1 {
        return Err(bad("hyperstar needs m >= 1"));
    }
    let mut b = Builder::new(k);
    for _ in 0..m {
        b.attach(0);
    }
    b.finish()
}

/// k-th power of an ordinary tree: every tree edge `{a, b}` gains `k - 2`
/// fresh vertices. Tree vertices keep their labels, fresh ones follow in edge order.
pub fn power_k(tree_edges: &[(usize, usize)], k: usize) -> Result<Supertree, FamilyError> {
    check_k(k)?;
    if tree_edges.is_empty() {
        return Err(FamilyError::InputNotATree("need at least one edge".into()));
    }
    let order = tree_edges.iter().map(|&(a, b)| a.max(b)).max().unwrap() + 1;
    let tree = Hypergraph::new(2, order, tree_edges.iter().map(|&(a, b)| [a, b]))
        .map_err(|e| FamilyError::InputNotATree(e.to_string()))?;
    Supertree::new(tree).map_err(|e| FamilyError::InputNotATree(e.to_string()))?;
    let mut n = order;
    let mut edges = Vec::with_capacity(tree_edges.len());
    for &(a, b) in tree_edges {
        let mut e = vec![a, b];
        e.extend(n..n + k - 2);
        n += k - 2;
        edges.push(e);
    }
    Ok(Supertree::new(Hypergraph::new(k, n, edges)?)?)
}

fn check_path_params(name: &str, m: usize, d: usize, k: usize) -> Result<(), FamilyError> {
    check_k(k)?;
    if d < 3 {
        return Err(bad(format!("{name} requires d >= 3, got d = {d}")));
    }
    if d > m {
        return Err(bad(format!("{name} requires d <= m, got d = {d}, m = {m}")));
    }
    Ok(())
}

/// Loose path of length `d` with `m - d` edges attached at spine vertex
/// `v_{floor(d/2)+1}`.
pub fn s1(m: usize, d: usize, k: usize) -> Result<Supertree, FamilyError> {
    check_path_params("s1", m, d, k)?;
    attached_at_spine(m, d, k, d / 2 + 1)
}

/// Loose path of length `d` with `m - d` edges attached at spine vertex
/// `v_{floor(d/2)}`. Requires `d >= 4`: for `d = 3` the anchor would be a path end.
pub fn s2(m: usize, d: usize, k: usize) -> Result<Supertree, FamilyError> {
    check_path_params("s2", m, d, k)?;
    if d < 4 {
        return Err(bad(format!("s2 requires d >= 4, got d = {d}")));
    }
    attached_at_spine(m, d, k, d / 2)
}

fn attached_at_spine(m: usize, d: usize, k: usize, anchor: usize) -> Result<Supertree, FamilyError> {
    let mut b = Builder::new(k);
    b.path(0, d);
    for _ in d..m {
        b.attach(spine_vertex(anchor, k));
    }
    b.finish()
}

/// Loose path of odd length `d` with `m - d` edges attached at the first
/// degree-1 vertex of the middle edge `e_{floor(d/2)+1}`.
pub fn s3(m: usize, d: usize, k: usize) -> Result<Supertree, FamilyError> {
    check_path_params("s3", m, d, k)?;
    if d % 2 == 0 {
        return Err(bad(format!("s3 requires odd d, got d = {d}")));
    }
    if k < 3 {
        return Err(bad("s3 requires k >= 3: a 2-uniform middle edge has no pendent vertex"));
    }
    let mut b = Builder::new(k);
    b.path(0, d);
    let anchor = spine_vertex(d / 2 + 1, k) + 1;
    for _ in d..m {
        b.attach(anchor);
    }
    b.finish()
}

/// Loose path `v_1 e_1 v_2 e_2 v_3 e_3 v_4` with `m - 4` pendent edges at `v_2`
/// and one pendent edge at `v_3`.
pub fn s4(m: usize, k: usize) -> Result<Supertree, FamilyError> {
    check_k(k)?;
    if m < 5 {
        return Err(bad(format!("s4 requires m >= 5, got m = {m}")));
    }
    let mut b = Builder::new(k);
    b.path(0, 3);
    for _ in 0..m - 4 {
        b.attach(spine_vertex(2, k));
    }
    b.attach(spine_vertex(3, k));
    b.finish()
}

/// Hyperstar with `p` edges whose tips carry loose paths of almost equal lengths.
///
/// The tip of star edge `j` is its lowest fresh label. With `r = m - p` path
/// edges, the first `r mod p` tips get `ceil(r/p)` edges and the rest `floor(r/p)`.
pub fn t1(n: usize, p: usize, k: usize) -> Result<Supertree, FamilyError> {
    check_k(k)?;
    if n < 1 || (n - 1) % (k - 1) != 0 {
        return Err(bad(format!("n - 1 = {} is not divisible by k - 1 = {}", n.saturating_sub(1), k - 1)));
    }
    let m = (n - 1) / (k - 1);
    if p < 1 || p > m {
        return Err(bad(format!("t1 requires 1 <= p <= m = {m}, got p = {p}")));
    }
    let mut b = Builder::new(k);
    let tips: Vec<Vertex> = (0..p).map(|_| b.attach(0)[0]).collect();
    let r = m - p;
    for (j, &tip) in tips.iter().enumerate() {
        let len = r / p + usize::from(j < r % p);
        b.path(tip, len);
    }
    b.finish()
}

/// Non-increasing degree sequence of a would-be supertree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeSequence {
    degrees: Vec<usize>,
    k: usize,
}

impl DegreeSequence {
    /// Sorts `degrees` non-increasingly and checks the counting conditions:
    /// all degrees positive, `sum = m k` and `n = m(k-1) + 1`.
    pub fn new(mut degrees: Vec<usize>, k: usize) -> Result<Self, FamilyError> {
        check_k(k)?;
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        let n = degrees.len();
        if n == 0 || degrees.contains(&0) {
            return Err(FamilyError::NotRealizable("degrees must be positive".into()));
        }
        let sum: usize = degrees.iter().sum();
        if sum % k != 0 {
            return Err(FamilyError::NotRealizable(format!(
                "degree sum {sum} is not a multiple of k = {k}"
            )));
        }
        let m = sum / k;
        if n != m * (k - 1) + 1 {
            return Err(FamilyError::NotRealizable(format!(
                "{n} vertices but m(k-1)+1 = {} for m = {m}",
                m * (k - 1) + 1
            )));
        }
        Ok(DegreeSequence { degrees, k })
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.degrees.iter().sum::<usize>() / self.k
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }
}

/// `(q + 1 + m - n, 2, ..., 2, 1, ..., 1)` with `n - q - 1` twos and `q` ones,
/// where `m = (n-1)/(k-1)`: the degree sequence of the maximizer among
/// supertrees with `n` vertices and `q` pendent vertices.
pub fn pendant_degree_sequence(n: usize, q: usize, k: usize) -> Result<DegreeSequence, FamilyError> {
    check_k(k)?;
    if n < 1 || (n - 1) % (k - 1) != 0 {
        return Err(bad(format!("n - 1 = {} is not divisible by k - 1 = {}", n.saturating_sub(1), k - 1)));
    }
    let m = (n - 1) / (k - 1);
    if q + m + 1 < n + 2 || q + 1 > n {
        return Err(bad(format!(
            "q must satisfy n - m + 1 <= q <= n - 1, i.e. {} <= q <= {}, got q = {q}",
            (n + 1).saturating_sub(m),
            n - 1
        )));
    }
    let mut degrees = vec![q + 1 + m - n];
    degrees.extend(std::iter::repeat(2).take(n - q - 1));
    degrees.extend(std::iter::repeat(1).take(q));
    DegreeSequence::new(degrees, k)
}

/// Breadth-first ordering witness of a BFS supertree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsOrdering {
    /// Vertices listed from first to last.
    pub order: Vec<Vertex>,
    /// Distance `h(u)` from the root `order[0]`.
    pub heights: Vec<usize>,
}

impl BfsOrdering {
    /// Position of each vertex in `order`.
    pub fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.order.len()];
        for (pos, &v) in self.order.iter().enumerate() {
            rank[v] = pos;
        }
        rank
    }
}

/// The BFS supertree with degree sequence `pi`.
///
/// Vertices are created and processed in one queue. The root takes `d_0`
/// edges; every later vertex takes `d_i - 1` child edges, each filled with
/// `k - 1` fresh vertices, and fresh vertices receive the next degrees of
/// `pi` in order. Labels coincide with the BFS ordering, so the witness order
/// is `0, 1, ..., n - 1`.
pub fn bfs_supertree(pi: &DegreeSequence) -> Result<(Supertree, BfsOrdering), FamilyError> {
    let k = pi.k();
    let d = pi.degrees();
    let n = d.len();
    let mut edges: Vec<Vec<Vertex>> = Vec::new();
    let mut heights = vec![0usize; n];
    let mut created = 1;
    for v in 0..n {
        if v >= created {
            return Err(FamilyError::NotRealizable(format!(
                "ran out of vertices to expand at position {v}"
            )));
        }
        let children = if v == 0 { d[0] } else { d[v] - 1 };
        for _ in 0..children {
            if created + k - 1 > n {
                return Err(FamilyError::NotRealizable(format!(
                    "vertex {v} needs more than the {n} available vertices"
                )));
            }
            let mut e = vec![v];
            e.extend(created..created + k - 1);
            for w in created..created + k - 1 {
                heights[w] = heights[v] + 1;
            }
            created += k - 1;
            edges.push(e);
        }
    }
    if created != n {
        return Err(FamilyError::NotRealizable(format!(
            "construction used {created} of {n} vertices"
        )));
    }
    let tree = Supertree::new(Hypergraph::new(k, n, edges)?)?;
    Ok((
        tree,
        BfsOrdering {
            order: (0..n).collect(),
            heights,
        },
    ))
}

/// Literal check of the four BFS-ordering clauses for `ordering` on `t`.
///
/// Returns the first violated clause as an error message. Clause (c) is read
/// with `u_1 ⪯ v_1`: siblings share a parent.
pub fn check_bfs_ordering(t: &Supertree, ordering: &BfsOrdering) -> Result<(), String> {
    let n = t.n();
    if ordering.order.len() != n || ordering.order.iter().collect::<BTreeSet<_>>().len() != n {
        return Err("order is not a permutation of the vertices".into());
    }
    let root = ordering.order[0];
    let dist = t.distances_from(root);
    for v in 0..n {
        if dist[v] != Some(ordering.heights[v]) {
            return Err(format!("height of {v} is not its distance from the root"));
        }
    }
    let rank = ordering.ranks();
    let h = &ordering.heights;
    for w in ordering.order.windows(2) {
        let (u, v) = (w[0], w[1]);
        if h[u] > h[v] {
            return Err(format!("(a) fails: {u} precedes {v} but is higher"));
        }
        if t.degree(u) < t.degree(v) {
            return Err(format!("(b) fails: {u} precedes {v} but has smaller degree"));
        }
    }
    // Parent of a non-root vertex: the unique neighbor one level up.
    let parent: Vec<Option<Vertex>> = (0..n)
        .map(|v| {
            t.incident(v)
                .iter()
                .flat_map(|&j| t.edge(j).iter().copied())
                .find(|&w| h[w] + 1 == h[v])
        })
        .collect();
    for u in 0..n {
        for v in 0..n {
            if rank[u] < rank[v] {
                if let (Some(pu), Some(pv)) = (parent[u], parent[v]) {
                    if rank[pu] > rank[pv] {
                        return Err(format!("(c) fails: {u} before {v} but parents out of order"));
                    }
                }
            }
        }
    }
    for j in 0..t.m() {
        let mut ranks: Vec<usize> = t.edge(j).iter().map(|&v| rank[v]).collect();
        ranks.sort_unstable();
        // between the 2nd and the last member no outside vertex may appear
        if ranks[ranks.len() - 1] - ranks[1] + 1 != ranks.len() - 1 {
            return Err(format!("(d) fails on edge {j}"));
        }
    }
    Ok(())
}

/// Tree edge list of an ordinary tree given by parent pointers, for tests and docs.
pub fn tree_from_parents(parents: &[usize]) -> Vec<(usize, usize)> {
    parents
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i + 1))
        .collect()
}

/// Plain breadth-first discovery order from `root`, with heights.
pub fn bfs_order_from(t: &Supertree, root: Vertex) -> BfsOrdering {
    let dist = t.distances_from(root);
    let mut order = Vec::with_capacity(t.n());
    let mut seen = vec![false; t.n()];
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &j in t.incident(v) {
            for &w in t.edge(j) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    BfsOrdering {
        order,
        heights: dist.into_iter().map(|d| d.unwrap()).collect(),
    }
}
