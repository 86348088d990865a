//! Exhaustive generation of supertrees up to isomorphism.
//!
//! Every supertree with `m` edges arises from one with `m - 1` edges by
//! attaching a pendent edge, so the generator grows level by level from a
//! single edge and keeps one representative per canonical code.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::hypergraph::{CanonicalCode, Hypergraph, Supertree};
use crate::spectral::{spectral_radius, SolverOptions, SpectralError, SpectralResult, Tensor};

/// Largest `m * (k - 1)` the generator accepts unless the limit is raised.
pub const DEFAULT_SIZE_LIMIT: usize = 40;

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error("m = {m}, k = {k} exceeds the size limit m*(k-1) <= {limit}")]
    TooLarge { m: usize, k: usize, limit: usize },
    #[error("uniformity must be at least 2, got {0}")]
    BadUniformity(usize),
    #[error("spectral solve failed for {code}: {source}")]
    Spectral {
        code: CanonicalCode,
        #[source]
        source: SpectralError,
    },
    #[error("bad class `{0}`")]
    BadClass(String),
}

#[derive(Debug, Clone)]
pub struct EnumerateOptions {
    pub size_limit: usize,
    /// Drop partial trees whose diameter already exceeds this bound.
    pub max_diameter: Option<usize>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            size_limit: DEFAULT_SIZE_LIMIT,
            max_diameter: None,
        }
    }
}

impl EnumerateOptions {
    pub fn max_diameter(mut self, d: usize) -> Self {
        self.max_diameter = Some(d);
        self
    }

    pub fn size_limit(mut self, limit: usize) -> Self {
        self.size_limit = limit;
        self
    }
}

/// All `k`-uniform supertrees with `m` edges, one per isomorphism class,
/// sorted by canonical code.
///
/// ```
/// use supertree::enumerate::enumerate_supertrees;
///
/// // Trees with 5 edges: path, spider, caterpillar, star, broom, and one more.
/// assert_eq!(enumerate_supertrees(5, 2).unwrap().len(), 6);
/// ```
pub fn enumerate_supertrees(m: usize, k: usize) -> Result<Vec<Supertree>, EnumerateError> {
    enumerate_with(m, k, &EnumerateOptions::default())
}

pub fn enumerate_with(
    m: usize,
    k: usize,
    opts: &EnumerateOptions,
) -> Result<Vec<Supertree>, EnumerateError> {
    if k < 2 {
        return Err(EnumerateError::BadUniformity(k));
    }
    if m * (k - 1) > opts.size_limit {
        return Err(EnumerateError::TooLarge {
            m,
            k,
            limit: opts.size_limit,
        });
    }
    if m == 0 {
        let single = Supertree::new_unchecked(Hypergraph::from_sorted_unchecked(k, 1, Vec::new()));
        return Ok(vec![single]);
    }
    let first = Supertree::new_unchecked(Hypergraph::from_sorted_unchecked(
        k,
        k,
        vec![(0..k).collect()],
    ));
    let mut level: Vec<Supertree> = vec![first];
    for _ in 1..m {
        level = grow(&level, opts.max_diameter);
    }
    if let Some(d) = opts.max_diameter {
        level.retain(|t| t.diameter() <= d);
    }
    Ok(level)
}

fn grow(level: &[Supertree], max_diameter: Option<usize>) -> Vec<Supertree> {
    let candidates: Vec<(CanonicalCode, Supertree)> = level
        .par_iter()
        .flat_map_iter(|t| {
            anchors(t).into_iter().filter_map(move |v| {
                let child = t.with_pendent_edge(v);
                if max_diameter.is_some_and(|d| child.diameter() > d) {
                    return None;
                }
                Some((child.canonical_code(), child))
            })
        })
        .collect();
    let mut next = BTreeMap::new();
    for (code, tree) in candidates {
        next.entry(code).or_insert(tree);
    }
    next.into_values().collect()
}

/// Attachment points that can give distinct results: every vertex of
/// degree at least 2 and one degree-1 vertex per edge.
fn anchors(t: &Supertree) -> Vec<usize> {
    let mut out: Vec<usize> = (0..t.n()).filter(|&v| t.degree(v) >= 2).collect();
    for edge in t.edges() {
        if let Some(&v) = edge.iter().find(|&&v| t.degree(v) == 1) {
            out.push(v);
        }
    }
    out
}

/// A structural class of supertrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupertreeClass {
    All,
    Diameter(usize),
    PendentEdges(usize),
    PendentVertices(usize),
    /// Non-increasing degree sequence.
    DegreeSequence(Vec<usize>),
    Hypertree,
}

impl SupertreeClass {
    pub fn contains(&self, t: &Supertree) -> bool {
        match self {
            SupertreeClass::All => true,
            SupertreeClass::Diameter(d) => t.diameter() == *d,
            SupertreeClass::PendentEdges(p) => t.pendent_counts().0 == *p,
            SupertreeClass::PendentVertices(q) => t.pendent_counts().1 == *q,
            SupertreeClass::DegreeSequence(pi) => &t.degree_sequence() == pi,
            SupertreeClass::Hypertree => t.is_hypertree(),
        }
    }
}

impl FromStr for SupertreeClass {
    type Err = EnumerateError;

    /// Parses `all`, `hypertree`, `diameter=3`, `pendent-edges=2`,
    /// `pendent-vertices=5` or `degrees=3,2,1,1,1,1,1`.
    fn from_str(s: &str) -> Result<Self, EnumerateError> {
        let bad = || EnumerateError::BadClass(s.to_string());
        let s = s.trim();
        match s {
            "all" => return Ok(SupertreeClass::All),
            "hypertree" => return Ok(SupertreeClass::Hypertree),
            _ => {}
        }
        let (key, value) = s.split_once('=').ok_or_else(bad)?;
        let num = || value.trim().parse::<usize>().map_err(|_| bad());
        match key.trim() {
            "diameter" | "d" => Ok(SupertreeClass::Diameter(num()?)),
            "pendent-edges" | "pendent_edges" | "p" => Ok(SupertreeClass::PendentEdges(num()?)),
            "pendent-vertices" | "pendent_vertices" | "q" => {
                Ok(SupertreeClass::PendentVertices(num()?))
            }
            "degrees" | "pi" => {
                let mut pi = value
                    .split(',')
                    .map(|x| x.trim().parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad())?;
                pi.sort_unstable_by(|a, b| b.cmp(a));
                Ok(SupertreeClass::DegreeSequence(pi))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for SupertreeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupertreeClass::All => f.write_str("all"),
            SupertreeClass::Hypertree => f.write_str("hypertree"),
            SupertreeClass::Diameter(d) => write!(f, "diameter={d}"),
            SupertreeClass::PendentEdges(p) => write!(f, "pendent-edges={p}"),
            SupertreeClass::PendentVertices(q) => write!(f, "pendent-vertices={q}"),
            SupertreeClass::DegreeSequence(pi) => {
                let parts: Vec<String> = pi.iter().map(usize::to_string).collect();
                write!(f, "degrees={}", parts.join(","))
            }
        }
    }
}

pub fn filter_class(trees: Vec<Supertree>, class: &SupertreeClass) -> Vec<Supertree> {
    trees.into_iter().filter(|t| class.contains(t)).collect()
}

/// One supertree's place in a ranking.
#[derive(Debug, Clone)]
pub struct RankedEntry {
    /// Position of the tree in the slice passed to [`rank_by_q`].
    pub index: usize,
    pub code: CanonicalCode,
    pub result: SpectralResult,
}

impl RankedEntry {
    pub fn value(&self) -> f64 {
        self.result.value
    }
}

/// Supertrees sorted by decreasing `q`.
#[derive(Debug, Clone)]
pub struct Ranking {
    pub entries: Vec<RankedEntry>,
    /// Certification margin: brackets closer than this are not separated.
    pub margin: f64,
}

impl Ranking {
    /// `entries[i].lower - entries[i + 1].upper`.
    pub fn gap(&self, i: usize) -> Option<f64> {
        let a = self.entries.get(i)?;
        let b = self.entries.get(i + 1)?;
        Some(a.result.lower - b.result.upper)
    }

    /// Whether entry `i` is certified strictly above entry `i + 1`.
    pub fn separated(&self, i: usize) -> bool {
        self.gap(i).is_some_and(|g| g > self.margin)
    }

    /// Maximal runs of consecutive entries that are not separated.
    pub fn tie_groups(&self) -> Vec<Vec<usize>> {
        let mut groups = Vec::new();
        let mut current = Vec::new();
        for i in 0..self.entries.len() {
            current.push(i);
            if !self.separated(i) {
                continue;
            }
            groups.push(std::mem::take(&mut current));
        }
        if !current.is_empty() {
            groups.push(current);
        }
        groups
    }

    /// Entry `i` if it is certified strictly above every later entry.
    pub fn unique_argmax(&self) -> Option<&RankedEntry> {
        let first = self.entries.first()?;
        if self.entries.len() == 1 || self.separated(0) {
            Some(first)
        } else {
            None
        }
    }

    pub fn position(&self, code: &CanonicalCode) -> Option<usize> {
        self.entries.iter().position(|e| &e.code == code)
    }
}

/// Solves `q` for every tree in parallel, in input order.
pub fn solve_all(trees: &[Supertree], opts: &SolverOptions) -> Result<Vec<SpectralResult>, EnumerateError> {
    trees
        .par_iter()
        .map(|t| {
            spectral_radius(t, Tensor::Signless, opts).map_err(|source| EnumerateError::Spectral {
                code: t.canonical_code(),
                source,
            })
        })
        .collect()
}

/// Solves `q` for every tree in parallel and sorts by decreasing value.
pub fn rank_by_q(trees: &[Supertree], opts: &SolverOptions) -> Result<Ranking, EnumerateError> {
    let results = solve_all(trees, opts)?;
    let mut entries: Vec<RankedEntry> = results
        .into_iter()
        .zip(trees)
        .enumerate()
        .map(|(index, (result, t))| RankedEntry {
            index,
            code: t.canonical_code(),
            result,
        })
        .collect();
    entries.sort_by(|a, b| {
        b.result
            .value
            .total_cmp(&a.result.value)
            .then_with(|| a.code.cmp(&b.code))
    });
    Ok(Ranking {
        entries,
        margin: certification_margin(opts),
    })
}

/// Gap two brackets must clear before one value counts as strictly larger.
pub fn certification_margin(opts: &SolverOptions) -> f64 {
    10.0 * opts.tolerance
}

/// Number of distinct canonical codes in `trees`.
pub fn distinct_codes(trees: &[Supertree]) -> usize {
    trees.iter().map(Supertree::canonical_code).collect::<HashSet<_>>().len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn tree_counts_match_known_sequence() {
        let counts: Vec<usize> = (1..=8)
            .map(|m| enumerate_supertrees(m, 2).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 6, 11, 23, 47]);
    }

    #[test]
    fn three_uniform_small_counts() {
        let counts: Vec<usize> = (1..=4)
            .map(|m| enumerate_supertrees(m, 3).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 4]);
    }

    #[test]
    fn outputs_are_supertrees_with_distinct_codes() {
        let trees = enumerate_supertrees(5, 3).unwrap();
        for t in &trees {
            assert!(Supertree::new(t.graph().clone()).is_ok());
            assert_eq!(t.m(), 5);
        }
        assert_eq!(distinct_codes(&trees), trees.len());
    }

    #[test]
    fn diameter_pruning_agrees_with_filtering() {
        for d in 1..=5 {
            let full = filter_class(enumerate_supertrees(6, 3).unwrap(), &SupertreeClass::Diameter(d));
            let pruned = filter_class(
                enumerate_with(6, 3, &EnumerateOptions::default().max_diameter(d)).unwrap(),
                &SupertreeClass::Diameter(d),
            );
            let a: Vec<_> = full.iter().map(Supertree::canonical_code).collect();
            let b: Vec<_> = pruned.iter().map(Supertree::canonical_code).collect();
            assert_eq!(a, b, "d = {d}");
        }
    }

    #[test]
    fn size_limit() {
        assert!(matches!(
            enumerate_supertrees(21, 3),
            Err(EnumerateError::TooLarge { .. })
        ));
        let opts = EnumerateOptions::default().size_limit(2);
        assert!(enumerate_with(2, 2, &opts).is_ok());
        assert!(enumerate_with(3, 2, &opts).is_err());
    }

    #[test]
    fn class_parsing() {
        assert_eq!("diameter=3".parse::<SupertreeClass>().unwrap(), SupertreeClass::Diameter(3));
        assert_eq!(
            "degrees=1,3,1,2".parse::<SupertreeClass>().unwrap(),
            SupertreeClass::DegreeSequence(vec![3, 2, 1, 1])
        );
        assert!("colour=red".parse::<SupertreeClass>().is_err());
        for s in ["all", "hypertree", "pendent-edges=2", "pendent-vertices=5", "diameter=4"] {
            assert_eq!(s.parse::<SupertreeClass>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn star_ranks_first() {
        let trees = enumerate_supertrees(4, 3).unwrap();
        let ranking = rank_by_q(&trees, &SolverOptions::default()).unwrap();
        let star = families::hyperstar(4, 3).unwrap().canonical_code();
        assert_eq!(ranking.unique_argmax().unwrap().code, star);
        let path = families::loose_path(4, 3).unwrap().canonical_code();
        assert_eq!(ranking.entries.last().unwrap().code, path);
        let groups = ranking.tie_groups();
        assert_eq!(groups.iter().map(Vec::len).sum::<usize>(), trees.len());
    }

    #[test]
    fn ties_are_grouped() {
        let t = families::loose_path(3, 3).unwrap();
        let ranking = rank_by_q(&[t.clone(), t], &SolverOptions::default()).unwrap();
        assert_eq!(ranking.tie_groups(), vec![vec![0, 1]]);
        assert!(ranking.unique_argmax().is_none());
    }

    #[test]
    fn no_convergence_names_the_graph() {
        let t = families::loose_path(4, 3).unwrap();
        let opts = SolverOptions {
            max_iterations: 1,
            ..SolverOptions::default()
        };
        match rank_by_q(&[t.clone()], &opts) {
            Err(EnumerateError::Spectral { code, .. }) => assert_eq!(code, t.canonical_code()),
            other => panic!("unexpected {other:?}"),
        }
    }
}
