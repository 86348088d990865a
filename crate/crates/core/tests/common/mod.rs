//! Brute-force helpers that share no code with the library's canonical forms.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use supertree::hypergraph::Hypergraph;

fn edge_set(g: &Hypergraph) -> HashSet<BTreeSet<usize>> {
    g.edges().iter().map(|e| e.iter().copied().collect()).collect()
}

/// Backtracking search for a vertex bijection carrying the edges of `g`
/// onto the edges of `h`.
pub fn isomorphic(g: &Hypergraph, h: &Hypergraph) -> bool {
    if g.k() != h.k() || g.n() != h.n() || g.m() != h.m() {
        return false;
    }
    let mut dg = g.degrees();
    let mut dh = h.degrees();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }
    let n = g.n();
    // Visit vertices in BFS order so edges close early.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &j in g.incident(v) {
                for &w in g.edge(j) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    let target = edge_set(h);
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(g, h, &order, 0, &mut map, &mut used, &target)
}

fn extend(
    g: &Hypergraph,
    h: &Hypergraph,
    order: &[usize],
    depth: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    target: &HashSet<BTreeSet<usize>>,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..h.n() {
        if used[w] || h.degree(w) != g.degree(v) {
            continue;
        }
        map[v] = w;
        used[w] = true;
        let consistent = g.incident(v).iter().all(|&j| {
            let e = g.edge(j);
            if e.iter().any(|&x| map[x] == usize::MAX) {
                return true;
            }
            target.contains(&e.iter().map(|&x| map[x]).collect::<BTreeSet<_>>())
        });
        if consistent && extend(g, h, order, depth + 1, map, used, target) {
            return true;
        }
        map[v] = usize::MAX;
        used[w] = false;
    }
    false
}

/// Keeps one graph per isomorphism class, using only [`isomorphic`].
pub fn classes(graphs: impl IntoIterator<Item = Hypergraph>) -> Vec<Hypergraph> {
    let mut reps: Vec<Hypergraph> = Vec::new();
    for g in graphs {
        if !reps.iter().any(|r| isomorphic(r, &g)) {
            reps.push(g);
        }
    }
    reps
}

/// Every labeled tree on `n >= 2` vertices, decoded from its Prüfer sequence.
pub fn labeled_trees(n: usize) -> Vec<Hypergraph> {
    if n == 2 {
        return vec![Hypergraph::new(2, 2, [[0, 1]]).unwrap()];
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    let mut out = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut seq = Vec::with_capacity(len);
        for _ in 0..len {
            seq.push(code % n);
            code /= n;
        }
        out.push(prufer_decode(&seq, n));
    }
    out
}

fn prufer_decode(seq: &[usize], n: usize) -> Hypergraph {
    let mut degree = vec![1; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in seq {
        let leaf = (0..n).find(|&u| degree[u] == 1).unwrap();
        edges.push([leaf, v]);
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
    edges.push([rest[0], rest[1]]);
    Hypergraph::new(2, n, edges).unwrap()
}

/// All labeled `k`-uniform supertrees reachable by attaching fresh edges at
/// every vertex, reduced with [`isomorphic`] after each step.
pub fn brute_force_supertrees(m: usize, k: usize) -> Vec<Hypergraph> {
    let mut level = vec![Hypergraph::new(k, k, [(0..k).collect::<Vec<_>>()]).unwrap()];
    for _ in 1..m {
        let mut next = Vec::new();
        for g in &level {
            for v in 0..g.n() {
                let mut edges = g.edges().to_vec();
                let mut e = vec![v];
                e.extend(g.n()..g.n() + k - 1);
                edges.push(e);
                next.push(Hypergraph::new(k, g.n() + k - 1, edges).unwrap());
            }
        }
        level = classes(next);
    }
    level
}
