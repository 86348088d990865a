//! AHU-style canonical codes for supertrees.
//!
//! A supertree is encoded through its compressed incidence tree: one node per
//! edge, one node per vertex of degree at least 2, and a tree arc for every
//! incidence between them. Degree-1 vertices are interchangeable inside their
//! edge, so they are folded into a count on the edge node. The tree is rooted
//! at its center; with two centers both rootings are encoded and the smaller
//! byte string wins.

use std::fmt;

use super::Supertree;

const OPEN: u8 = b'(';
const CLOSE: u8 = b')';
const EDGE: u8 = b'E';
const VERTEX: u8 = b'V';

/// Isomorphism-invariant byte string of a supertree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({})", self.to_hex())
    }
}

struct IncidenceTree {
    adj: Vec<Vec<usize>>,
    /// Degree-1 vertex count for edge nodes, `None` for vertex nodes.
    leaves: Vec<Option<u32>>,
}

impl IncidenceTree {
    fn build(t: &Supertree) -> Self {
        let m = t.m();
        let mut adj = vec![Vec::new(); m];
        let mut leaves: Vec<Option<u32>> = (0..m)
            .map(|j| Some(t.edge(j).iter().filter(|&&v| t.degree(v) == 1).count() as u32))
            .collect();
        for v in 0..t.n() {
            if t.degree(v) < 2 {
                continue;
            }
            let node = adj.len();
            adj.push(t.incident(v).to_vec());
            leaves.push(None);
            for &j in t.incident(v) {
                adj[j].push(node);
            }
        }
        IncidenceTree { adj, leaves }
    }

    fn centers(&self) -> Vec<usize> {
        let size = self.adj.len();
        if size <= 2 {
            return (0..size).collect();
        }
        let mut degree: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut layer: Vec<usize> = (0..size).filter(|&v| degree[v] == 1).collect();
        let mut remaining = size;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &leaf in &layer {
                for &w in &self.adj[leaf] {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
            layer = next;
        }
        layer.sort_unstable();
        layer
    }

    fn encode(&self, node: usize, parent: Option<usize>, out: &mut Vec<u8>) {
        out.push(OPEN);
        match self.leaves[node] {
            Some(count) => {
                out.push(EDGE);
                out.extend_from_slice(&count.to_be_bytes());
            }
            None => out.push(VERTEX),
        }
        let mut children: Vec<Vec<u8>> = self.adj[node]
            .iter()
            .filter(|&&c| Some(c) != parent)
            .map(|&c| {
                let mut buf = Vec::new();
                self.encode(c, Some(node), &mut buf);
                buf
            })
            .collect();
        children.sort_unstable();
        for child in children {
            out.extend_from_slice(&child);
        }
        out.push(CLOSE);
    }
}

pub(super) fn canonical_code(t: &Supertree) -> CanonicalCode {
    let header = (t.k() as u32).to_be_bytes();
    if t.m() == 0 {
        return CanonicalCode(header.to_vec());
    }
    let tree = IncidenceTree::build(t);
    let best = tree
        .centers()
        .into_iter()
        .map(|root| {
            let mut out = header.to_vec();
            tree.encode(root, None, &mut out);
            out
        })
        .min()
        .expect("non-empty tree has a center");
    CanonicalCode(best)
}

#[cfg(test)]
mod tests {
    use crate::hypergraph::{Hypergraph, Supertree};

    fn tree(k: usize, n: usize, edges: &[&[usize]]) -> Supertree {
        Supertree::new(Hypergraph::new(k, n, edges.iter().map(|e| e.to_vec())).unwrap()).unwrap()
    }

    #[test]
    fn relabeled_paths_share_a_code() {
        let a = tree(3, 7, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 6]]);
        let b = tree(3, 7, &[&[6, 5, 3], &[3, 0, 1], &[1, 2, 4]]);
        assert_eq!(a.canonical_code(), b.canonical_code());
    }

    #[test]
    fn star_and_path_differ() {
        let path = tree(3, 7, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 6]]);
        let star = tree(3, 7, &[&[0, 1, 2], &[0, 3, 4], &[0, 5, 6]]);
        assert_ne!(path.canonical_code(), star.canonical_code());
    }

    #[test]
    fn uniformity_is_part_of_the_code() {
        let a = tree(2, 2, &[&[0, 1]]);
        let b = tree(3, 3, &[&[0, 1, 2]]);
        assert_ne!(a.canonical_code(), b.canonical_code());
    }

    #[test]
    fn spider_vs_path() {
        let a = tree(2, 5, &[&[0, 1], &[1, 2], &[2, 3], &[2, 4]]);
        let b = tree(2, 5, &[&[4, 3], &[3, 2], &[2, 1], &[2, 0]]);
        assert_eq!(a.canonical_code(), b.canonical_code());
        let c = tree(2, 5, &[&[0, 1], &[1, 2], &[2, 3], &[3, 4]]);
        assert_ne!(a.canonical_code(), c.canonical_code());
    }
}
