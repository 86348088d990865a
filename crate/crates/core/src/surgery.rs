//! Edge-moving surgeries on uniform hypergraphs.
//!
//! All four operations build a new value and leave the input untouched. Only
//! [`edge_release`] and [`branch_collapse`] are closed on supertrees; the
//! others return plain hypergraphs and callers revalidate when they need a
//! [`Supertree`].

use std::collections::HashSet;

use thiserror::Error;

use crate::hypergraph::{GraphError, Hypergraph, Supertree, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(Vertex),
    #[error("target vertex {u} already lies in edge {edge}")]
    UNotOutsideEdge { u: Vertex, edge: usize },
    #[error("vertex {v} is not in edge {edge}")]
    VNotInEdge { v: Vertex, edge: usize },
    #[error("edge {0} is moved twice")]
    RepeatedEdge(usize),
    #[error("moving edges produces a repeated edge: {0}")]
    ResultHasDuplicateEdge(GraphError),
    #[error("edge {0} is a pendent edge")]
    EdgeIsPendent(usize),
    #[error("vertex {u} is not in edge {edge}")]
    UNotInEdge { u: Vertex, edge: usize },
    #[error("edge {0} has fewer than 3 non-pendent vertices")]
    NotBranchEdge(usize),
    #[error("retained vertices must be two distinct non-pendent vertices of edge {0}")]
    BadKeep(usize),
    #[error("edges {0} and {1} intersect")]
    EdgesNotDisjoint(usize, usize),
    #[error("bad switch subsets: {0}")]
    BadSubsetSizes(String),
    #[error("no pendent paths of lengths {p} and {q} at vertex {u}")]
    NotAGraftConfiguration { u: Vertex, p: usize, q: usize },
    #[error("result is not a supertree: {0}")]
    NotASupertree(GraphError),
}

fn check_edge(g: &Hypergraph, j: usize) -> Result<(), SurgeryError> {
    if j >= g.m() {
        return Err(SurgeryError::EdgeOutOfRange(j));
    }
    Ok(())
}

fn check_vertex(g: &Hypergraph, v: Vertex) -> Result<(), SurgeryError> {
    if v >= g.n() {
        return Err(SurgeryError::VertexOutOfRange(v));
    }
    Ok(())
}

/// Moves each listed edge `e_i` off its vertex `v_i` and onto `u`:
/// `e_i' = (e_i \ {v_i}) ∪ {u}`. An empty move list returns a copy of `g`.
pub fn move_edges(
    g: &Hypergraph,
    u: Vertex,
    moves: &[(usize, Vertex)],
) -> Result<Hypergraph, SurgeryError> {
    check_vertex(g, u)?;
    let mut seen = HashSet::new();
    let mut replacements = Vec::with_capacity(moves.len());
    for &(j, v) in moves {
        check_edge(g, j)?;
        check_vertex(g, v)?;
        if !seen.insert(j) {
            return Err(SurgeryError::RepeatedEdge(j));
        }
        let edge = g.edge(j);
        if edge.contains(&u) {
            return Err(SurgeryError::UNotOutsideEdge { u, edge: j });
        }
        if !edge.contains(&v) {
            return Err(SurgeryError::VNotInEdge { v, edge: j });
        }
        let mut moved: Vec<Vertex> = edge.iter().map(|&w| if w == v { u } else { w }).collect();
        moved.sort_unstable();
        replacements.push((j, moved));
    }
    g.with_replaced_edges(&replacements)
        .map_err(SurgeryError::ResultHasDuplicateEdge)
}

fn as_supertree(g: Hypergraph) -> Result<Supertree, SurgeryError> {
    Supertree::new(g).map_err(SurgeryError::NotASupertree)
}

/// The moves performed by [`edge_release`]: every edge meeting `e` outside
/// `u`, paired with its intersection vertex.
pub fn release_moves(t: &Supertree, e: usize, u: Vertex) -> Vec<(usize, Vertex)> {
    t.edge(e)
        .iter()
        .filter(|&&w| w != u)
        .flat_map(|&w| {
            t.incident(w)
                .iter()
                .filter(move |&&j| j != e)
                .map(move |&j| (j, w))
        })
        .collect()
}

/// Releases the non-pendent edge `e` at `u`: every edge adjacent to `e` that
/// avoids `u` is moved from its intersection vertex with `e` to `u`.
pub fn edge_release(t: &Supertree, e: usize, u: Vertex) -> Result<Supertree, SurgeryError> {
    check_edge(t, e)?;
    check_vertex(t, u)?;
    if t.is_pendent_edge(e) {
        return Err(SurgeryError::EdgeIsPendent(e));
    }
    if !t.edge(e).contains(&u) {
        return Err(SurgeryError::UNotInEdge { u, edge: e });
    }
    let moves = release_moves(t, e, u);
    as_supertree(move_edges(t, u, &moves)?)
}

/// Collapses the branch edge `e` onto two of its non-pendent vertices: every
/// other non-pendent vertex of `e` hands all its edges except `e` to `keep.0`.
pub fn branch_collapse(
    t: &Supertree,
    e: usize,
    keep: (Vertex, Vertex),
) -> Result<Supertree, SurgeryError> {
    check_edge(t, e)?;
    if !t.is_branch_edge(e) {
        return Err(SurgeryError::NotBranchEdge(e));
    }
    let inner = t.non_pendent_vertices(e);
    let (target, other) = keep;
    if target == other || !inner.contains(&target) || !inner.contains(&other) {
        return Err(SurgeryError::BadKeep(e));
    }
    let moves: Vec<(usize, Vertex)> = inner
        .iter()
        .filter(|&&w| w != target && w != other)
        .flat_map(|&w| {
            t.incident(w)
                .iter()
                .filter(move |&&j| j != e)
                .map(move |&j| (j, w))
        })
        .collect();
    as_supertree(move_edges(t, target, &moves)?)
}

/// Exchanges `U1 ⊂ e` with `V1 ⊂ f` between two disjoint edges:
/// `e' = (e \ U1) ∪ V1` and `f' = (f \ V1) ∪ U1`.
pub fn two_switch(
    g: &Hypergraph,
    e: usize,
    f: usize,
    u1: &[Vertex],
    v1: &[Vertex],
) -> Result<Hypergraph, SurgeryError> {
    check_edge(g, e)?;
    check_edge(g, f)?;
    let (ee, ff) = (g.edge(e), g.edge(f));
    if e == f || ee.iter().any(|v| ff.contains(v)) {
        return Err(SurgeryError::EdgesNotDisjoint(e, f));
    }
    let r = u1.len();
    if r != v1.len() || r == 0 || r >= g.k() {
        return Err(SurgeryError::BadSubsetSizes(format!(
            "need 1 <= |U1| = |V1| <= k - 1, got |U1| = {}, |V1| = {}",
            u1.len(),
            v1.len()
        )));
    }
    let distinct = |s: &[Vertex]| s.iter().collect::<HashSet<_>>().len() == s.len();
    if !distinct(u1) || !distinct(v1) {
        return Err(SurgeryError::BadSubsetSizes("subsets repeat a vertex".into()));
    }
    if !u1.iter().all(|v| ee.contains(v)) || !v1.iter().all(|v| ff.contains(v)) {
        return Err(SurgeryError::BadSubsetSizes("U1 must lie in e and V1 in f".into()));
    }
    let mut new_e: Vec<Vertex> = ee.iter().copied().filter(|v| !u1.contains(v)).collect();
    new_e.extend_from_slice(v1);
    new_e.sort_unstable();
    let mut new_f: Vec<Vertex> = ff.iter().copied().filter(|v| !v1.contains(v)).collect();
    new_f.extend_from_slice(u1);
    new_f.sort_unstable();
    g.with_replaced_edges(&[(e, new_e), (f, new_f)])
        .map_err(SurgeryError::ResultHasDuplicateEdge)
}

/// A pendent path hanging at some vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PendentPath {
    /// `(edge, vertex through which the walk entered it)`, root side first.
    pub steps: Vec<(usize, Vertex)>,
    /// Lowest-labeled degree-1 vertex of the last edge.
    pub end: Vertex,
}

impl PendentPath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Walks away from `root` through `first`; `None` unless the walk is a
/// pendent path (inner vertices of degree 2, all others of degree 1).
pub fn walk_pendent_path(g: &Hypergraph, root: Vertex, first: usize) -> Option<PendentPath> {
    let mut steps = Vec::new();
    let (mut edge, mut entry) = (first, root);
    for _ in 0..g.m() {
        steps.push((edge, entry));
        let mut next = None;
        let mut end = None;
        for &w in g.edge(edge) {
            if w == entry {
                continue;
            }
            match g.degree(w) {
                1 => end = Some(end.map_or(w, |e: Vertex| e.min(w))),
                2 if next.is_none() => next = Some(w),
                _ => return None,
            }
        }
        match next {
            None => return Some(PendentPath { steps, end: end? }),
            Some(w) => {
                let &following = g.incident(w).iter().find(|&&j| j != edge)?;
                edge = following;
                entry = w;
            }
        }
    }
    None
}

/// All pendent paths at `u`, one per incident edge that starts one.
pub fn pendent_paths_at(g: &Hypergraph, u: Vertex) -> Vec<PendentPath> {
    if g.degree(u) < 2 {
        return Vec::new();
    }
    g.incident(u)
        .iter()
        .filter_map(|&j| walk_pendent_path(g, u, j))
        .collect()
}

/// Grafts one edge from the `q`-path at `u` to the end of the `p`-path at `u`,
/// turning `H(u; p, q)` into `H(u; p + 1, q - 1)`.
///
/// The two paths are found by walking from `u`; among several candidates the
/// ones whose first edge has the lowest index are used.
pub fn graft_step(g: &Hypergraph, u: Vertex, p: usize, q: usize) -> Result<Hypergraph, SurgeryError> {
    check_vertex(g, u)?;
    let fail = || SurgeryError::NotAGraftConfiguration { u, p, q };
    if p == 0 || q == 0 {
        return Err(fail());
    }
    let paths = pendent_paths_at(g, u);
    let p_path = paths.iter().find(|path| path.len() == p).ok_or_else(fail)?;
    let q_path = paths
        .iter()
        .find(|path| path.len() == q && path.steps[0] != p_path.steps[0])
        .ok_or_else(fail)?;
    let &(last, entry) = q_path.steps.last().unwrap();
    move_edges(g, p_path.end, &[(last, entry)])
}

/// Attaches two pendent paths of lengths `p` and `q` at `u`, producing `H(u; p, q)`.
/// New vertices are appended after the existing labels.
pub fn attach_pendent_paths(g: &Hypergraph, u: Vertex, p: usize, q: usize) -> Hypergraph {
    let k = g.k();
    let mut n = g.n();
    let mut edges = g.edges().to_vec();
    for len in [p, q] {
        let mut anchor = u;
        for _ in 0..len {
            let mut e = vec![anchor];
            e.extend(n..n + k - 1);
            anchor = n + k - 2;
            n += k - 1;
            edges.push(e);
        }
    }
    Hypergraph::from_sorted_unchecked(k, n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{hyperstar, loose_path, s1, spine_vertex};

    #[test]
    fn moving_the_last_path_edge_gives_a_star() {
        let p = loose_path(3, 3).unwrap();
        let g = move_edges(&p, 2, &[(2, 4)]).unwrap();
        let t = Supertree::new(g).unwrap();
        assert_eq!(t.canonical_code(), hyperstar(3, 3).unwrap().canonical_code());
    }

    #[test]
    fn empty_move_is_identity() {
        let p = loose_path(3, 3).unwrap();
        assert_eq!(&move_edges(&p, 0, &[]).unwrap(), p.graph());
    }

    #[test]
    fn move_errors() {
        let p = loose_path(3, 3).unwrap();
        assert_eq!(
            move_edges(&p, 2, &[(0, 1)]).unwrap_err(),
            SurgeryError::UNotOutsideEdge { u: 2, edge: 0 }
        );
        assert_eq!(
            move_edges(&p, 0, &[(2, 3)]).unwrap_err(),
            SurgeryError::VNotInEdge { v: 3, edge: 2 }
        );
        assert_eq!(
            move_edges(&p, 0, &[(2, 4), (2, 5)]).unwrap_err(),
            SurgeryError::RepeatedEdge(2)
        );
        let g = Hypergraph::new(3, 5, [[0, 1, 2], [0, 1, 4]]).unwrap();
        assert!(matches!(
            move_edges(&g, 3, &[(0, 2), (1, 4)]).unwrap_err(),
            SurgeryError::ResultHasDuplicateEdge(_)
        ));
    }

    #[test]
    fn moving_attachment_across_the_middle_of_s1() {
        // s1(4,3,3): attached edge 3 sits at v2; moving it to v3 mirrors the graph.
        let t = s1(4, 3, 3).unwrap();
        let v2 = spine_vertex(2, 3);
        let v3 = spine_vertex(3, 3);
        assert_eq!(t.edge(3)[0], v2);
        let moved = Supertree::new(move_edges(&t, v3, &[(3, v2)]).unwrap()).unwrap();
        assert_eq!(moved.degree(v3), 3);
        assert_eq!(moved.canonical_code(), t.canonical_code());
    }

    #[test]
    fn release_on_a_path() {
        let p = loose_path(3, 3).unwrap();
        let released = edge_release(&p, 1, 2).unwrap();
        let direct = Supertree::new(move_edges(&p, 2, &[(2, 4)]).unwrap()).unwrap();
        assert_eq!(released.canonical_code(), direct.canonical_code());
    }

    #[test]
    fn release_with_nothing_to_move() {
        let e = loose_path(1, 3).unwrap();
        assert_eq!(edge_release(&e, 0, 1).unwrap(), e);
    }

    #[test]
    fn release_lowers_diameter_of_s1() {
        let t = s1(5, 3, 3).unwrap();
        let released = edge_release(&t, 1, spine_vertex(2, 3)).unwrap();
        assert_eq!(released.diameter(), 2);
        assert!(released.diameter() <= t.diameter());
    }

    #[test]
    fn release_errors() {
        let p = loose_path(3, 3).unwrap();
        assert_eq!(edge_release(&p, 0, 0).unwrap_err(), SurgeryError::EdgeIsPendent(0));
        assert_eq!(
            edge_release(&p, 1, 0).unwrap_err(),
            SurgeryError::UNotInEdge { u: 0, edge: 1 }
        );
    }

    fn branchy_k4() -> Supertree {
        // e = {0,1,2,3}; pendent edges at 0, 1, 2
        let g = Hypergraph::new(
            4,
            13,
            [
                vec![0, 1, 2, 3],
                vec![0, 4, 5, 6],
                vec![1, 7, 8, 9],
                vec![2, 10, 11, 12],
            ],
        )
        .unwrap();
        Supertree::new(g).unwrap()
    }

    #[test]
    fn collapse_moves_the_third_vertex() {
        let t = branchy_k4();
        let c = branch_collapse(&t, 0, (0, 1)).unwrap();
        assert_eq!(c.edge(3), &[0, 10, 11, 12]);
        assert_eq!(c.non_pendent_vertices(0), vec![0, 1]);
        assert_eq!(c.degree(0), 3);
        assert!(c.diameter() <= t.diameter());
    }

    #[test]
    fn collapse_errors() {
        let t = branchy_k4();
        assert_eq!(branch_collapse(&t, 1, (0, 1)).unwrap_err(), SurgeryError::NotBranchEdge(1));
        assert_eq!(branch_collapse(&t, 0, (0, 3)).unwrap_err(), SurgeryError::BadKeep(0));
        assert_eq!(branch_collapse(&t, 0, (0, 0)).unwrap_err(), SurgeryError::BadKeep(0));
    }

    #[test]
    fn switch_is_an_involution() {
        let t = loose_path(4, 3).unwrap();
        // edges 0 = {0,1,2} and 2 = {4,5,6} are disjoint
        let g = two_switch(&t, 0, 2, &[1], &[5]).unwrap();
        assert_eq!(g.edge(0), &[0, 2, 5]);
        assert_eq!(g.edge(2), &[1, 4, 6]);
        let back = two_switch(&g, 0, 2, &[5], &[1]).unwrap();
        assert_eq!(&back, t.graph());
    }

    #[test]
    fn switch_of_pendent_vertex_sets() {
        // hyperstar edges always meet at the center
        let t = hyperstar(2, 3).unwrap();
        let path = loose_path(3, 3).unwrap();
        assert!(matches!(
            two_switch(&t, 0, 1, &[1], &[3]).unwrap_err(),
            SurgeryError::EdgesNotDisjoint(0, 1)
        ));
        let g = two_switch(&path, 0, 2, &[0, 1], &[5, 6]).unwrap();
        let s = Supertree::new(g).unwrap();
        assert_eq!(s.canonical_code(), path.canonical_code());
    }

    #[test]
    fn switch_errors() {
        let t = loose_path(4, 3).unwrap();
        assert!(matches!(
            two_switch(&t, 0, 2, &[1], &[5, 6]).unwrap_err(),
            SurgeryError::BadSubsetSizes(_)
        ));
        assert!(matches!(
            two_switch(&t, 0, 2, &[0, 1, 2], &[4, 5, 6]).unwrap_err(),
            SurgeryError::BadSubsetSizes(_)
        ));
        assert!(matches!(
            two_switch(&t, 0, 2, &[4], &[5]).unwrap_err(),
            SurgeryError::BadSubsetSizes(_)
        ));
    }

    #[test]
    fn graft_from_one_one() {
        let base = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        let g = attach_pendent_paths(&base, 0, 1, 1);
        let t = Supertree::new(g.clone()).unwrap();
        assert_eq!(t.degree(0), 3);
        let grafted = Supertree::new(graft_step(&g, 0, 1, 1).unwrap()).unwrap();
        assert_eq!(grafted.degree(0), 2);
        assert_eq!(grafted.diameter(), 3);
        // two-edge path hanging at 0 plus the base edge: a loose path of length 3
        assert_eq!(grafted.canonical_code(), loose_path(3, 3).unwrap().canonical_code());
    }

    #[test]
    fn graft_preserves_counts() {
        let base = loose_path(2, 4).unwrap();
        let g = attach_pendent_paths(&base, 3, 2, 2);
        let after = graft_step(&g, 3, 2, 2).unwrap();
        assert_eq!((after.n(), after.m(), after.k()), (g.n(), g.m(), g.k()));
        let before = g.degree_sequence();
        let changed: usize = g
            .degrees()
            .iter()
            .zip(after.degrees())
            .filter(|(a, b)| **a != *b)
            .count();
        assert_eq!(changed, 2);
        assert_eq!(before.iter().sum::<usize>(), after.degrees().iter().sum::<usize>());
        assert!(Supertree::new(after).is_ok());
    }

    #[test]
    fn graft_recognition_failures() {
        let base = loose_path(2, 3).unwrap();
        let g = attach_pendent_paths(&base, 2, 2, 1);
        assert!(graft_step(&g, 2, 2, 1).is_ok());
        assert_eq!(
            graft_step(&g, 2, 3, 1).unwrap_err(),
            SurgeryError::NotAGraftConfiguration { u: 2, p: 3, q: 1 }
        );
        assert!(graft_step(&g, 2, 1, 0).is_err());
        assert!(graft_step(&g, 0, 1, 1).is_err());
    }
}
