//! Extremal claims checked by exhaustive ranking of a class.

use std::collections::{BTreeMap, HashMap};

use super::{fmt_f, fmt_gap, Context, HarnessError, Report, Verdict};
use crate::enumerate::{
    enumerate_supertrees, enumerate_with, filter_class, rank_by_q, EnumerateOptions,
    Ranking, SupertreeClass,
};
use crate::families::{self, bfs_supertree, pendant_degree_sequence, DegreeSequence};
use crate::harness::ClaimId;
use crate::hypergraph::{CanonicalCode, Supertree};

const ARGMAX_COLUMNS: [&str; 6] = ["class_size", "expected", "argmax", "q_argmax", "q_second", "gap"];

/// Whether `expected` is the unique, bracket-separated maximizer.
fn argmax_verdict(ranking: &Ranking, expected: &CanonicalCode) -> Verdict {
    let Some(pos) = ranking.position(expected) else {
        return Verdict::Fail;
    };
    if pos == 0 {
        return if ranking.unique_argmax().is_some() {
            Verdict::Pass
        } else {
            Verdict::Inconclusive
        };
    }
    let top = &ranking.entries[0].result;
    let mine = &ranking.entries[pos].result;
    if top.lower - mine.upper > ranking.margin {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    }
}

fn argmax_values(ranking: &Ranking, expected: &CanonicalCode) -> Vec<String> {
    let first = ranking.entries.first();
    let second = ranking.entries.get(1);
    vec![
        ranking.entries.len().to_string(),
        expected.to_hex(),
        first.map_or("-".into(), |e| e.code.to_hex()),
        first.map_or("-".into(), |e| fmt_f(e.value())),
        second.map_or("-".into(), |e| fmt_f(e.value())),
        ranking.gap(0).map_or("-".into(), fmt_gap),
    ]
}

fn columns<'a>(leading: &[&'a str]) -> Vec<&'a str> {
    leading.iter().copied().chain(ARGMAX_COLUMNS).collect()
}

fn num(v: usize) -> String {
    v.to_string()
}

/// Largest `q` over supertrees (or hypertrees) with given diameter.
pub(super) fn diameter_class(ctx: &Context, hypertree: bool) -> Result<Report, HarnessError> {
    let mut report = ctx.report(&columns(&["k", "d", "m"]));
    for cell in ctx.grid.cells(&["k", "d", "m"])? {
        let (k, d, m) = (cell["k"], cell["d"], cell["m"]);
        if d < 3 || m <= d {
            return Err(HarnessError::BadGrid(format!("need 3 <= d < m, got d = {d}, m = {m}")));
        }
        let all = enumerate_with(m, k, &EnumerateOptions::default().max_diameter(d))?;
        let mut class = filter_class(all, &SupertreeClass::Diameter(d));
        if hypertree {
            class = filter_class(class, &SupertreeClass::Hypertree);
        }
        let ranking = rank_by_q(&class, ctx.solver)?;
        let expected = families::s1(m, d, k)?.canonical_code();
        let mut values = vec![num(k), num(d), num(m)];
        values.extend(argmax_values(&ranking, &expected));
        report.push(values, argmax_verdict(&ranking, &expected));
    }
    Ok(report)
}

/// The top of the ranking over diameter-3 supertrees.
pub(super) fn second_largest_d3(ctx: &Context) -> Result<Report, HarnessError> {
    let mut report = ctx.report(&[
        "k", "m", "class_size", "first", "second", "expected_first", "expected_second", "q_first",
        "q_second", "q_third", "gap_first_second", "gap_second_third",
    ]);
    let d = 3;
    for cell in ctx.grid.cells(&["k", "m"])? {
        let (k, m) = (cell["k"], cell["m"]);
        if m < 4 || k < 3 {
            return Err(HarnessError::BadGrid(format!("need m >= 4 and k >= 3, got m = {m}, k = {k}")));
        }
        let all = enumerate_with(m, k, &EnumerateOptions::default().max_diameter(d))?;
        let class = filter_class(all, &SupertreeClass::Diameter(d));
        let ranking = rank_by_q(&class, ctx.solver)?;
        let s1 = families::s1(m, d, k)?.canonical_code();
        let second = if m == 4 {
            families::s3(m, d, k)?
        } else {
            families::s4(m, k)?
        }
        .canonical_code();
        let codes: Vec<&CanonicalCode> = ranking.entries.iter().map(|e| &e.code).collect();
        let verdict = if (m == 4 && codes.len() != 2) || codes.len() < 2 {
            Verdict::Fail
        } else {
            let separated = ranking.separated(0) && (codes.len() < 3 || ranking.separated(1));
            if codes[0] == &s1 && codes[1] == &second {
                if separated {
                    Verdict::Pass
                } else {
                    Verdict::Inconclusive
                }
            } else if separated {
                Verdict::Fail
            } else {
                Verdict::Inconclusive
            }
        };
        let entry = |i: usize| ranking.entries.get(i);
        report.push(
            vec![
                num(k),
                num(m),
                num(ranking.entries.len()),
                entry(0).map_or("-".into(), |e| e.code.to_hex()),
                entry(1).map_or("-".into(), |e| e.code.to_hex()),
                s1.to_hex(),
                second.to_hex(),
                entry(0).map_or("-".into(), |e| fmt_f(e.value())),
                entry(1).map_or("-".into(), |e| fmt_f(e.value())),
                entry(2).map_or("-".into(), |e| fmt_f(e.value())),
                ranking.gap(0).map_or("-".into(), fmt_gap),
                ranking.gap(1).map_or("-".into(), fmt_gap),
            ],
            verdict,
        );
    }
    Ok(report)
}

struct Enumerated {
    cache: HashMap<(usize, usize), Vec<Supertree>>,
}

impl Enumerated {
    fn new() -> Self {
        Enumerated { cache: HashMap::new() }
    }

    fn get(&mut self, m: usize, k: usize) -> Result<&[Supertree], HarnessError> {
        if !self.cache.contains_key(&(m, k)) {
            self.cache.insert((m, k), enumerate_supertrees(m, k)?);
        }
        Ok(&self.cache[&(m, k)])
    }
}

/// Largest `q` among supertrees with `p` pendent edges.
pub(super) fn pendent_edges(ctx: &Context) -> Result<Report, HarnessError> {
    let mut report = ctx.report(&columns(&["k", "m", "n", "p"]));
    let mut trees = Enumerated::new();
    for cell in ctx.grid.cells(&["k", "m", "p"])? {
        let (k, m, n, p) = (cell["k"], cell["m"], cell["n"], cell["p"]);
        if p < 2 || p > m {
            return Err(HarnessError::BadGrid(format!("need 2 <= p <= m, got p = {p}, m = {m}")));
        }
        let class = filter_class(trees.get(m, k)?.to_vec(), &SupertreeClass::PendentEdges(p));
        let ranking = rank_by_q(&class, ctx.solver)?;
        let expected = families::t1(n, p, k)?.canonical_code();
        let mut values = vec![num(k), num(m), num(n), num(p)];
        values.extend(argmax_values(&ranking, &expected));
        report.push(values, argmax_verdict(&ranking, &expected));
    }
    Ok(report)
}

/// Degree/eigenvector monotonicity at a maximizer: returns the verdict, the
/// smallest `x_u - x_v` over pairs with `d_u > d_v`, and the number of
/// pairs with equal entries.
fn monotonicity(t: &Supertree, x: &[f64], eps: f64) -> (Verdict, f64, usize) {
    let mut verdict = Verdict::Pass;
    let mut min_sep = f64::INFINITY;
    let mut equal = 0;
    for u in 0..t.n() {
        for v in 0..t.n() {
            if u == v {
                continue;
            }
            let diff = x[u] - x[v];
            if t.degree(u) > t.degree(v) {
                min_sep = min_sep.min(diff);
                if diff < -eps {
                    verdict = verdict.and(Verdict::Fail);
                } else if diff <= eps {
                    verdict = verdict.and(Verdict::Inconclusive);
                }
            } else if u < v && diff.abs() <= eps && t.degree(u) == t.degree(v) {
                equal += 1;
            }
        }
    }
    (verdict, min_sep, equal)
}

/// Every realizable degree sequence: the BFS supertree is the maximizer,
/// and the maximizer orders its eigenvector by degree.
pub(super) fn degree_sequences(ctx: &Context) -> Result<Report, HarnessError> {
    let monotone = matches!(ctx.claim, ClaimId::DegreeOrder | ClaimId::EigenvectorOrder);
    let mut cols = vec!["k", "m", "degrees"];
    if monotone {
        cols.extend(["class_size", "argmax", "pairs", "min_separation", "equal_pairs", "threshold"]);
    } else {
        cols.extend(ARGMAX_COLUMNS);
    }
    let mut report = ctx.report(&cols);
    for cell in ctx.grid.cells(&["k", "m"])? {
        let (k, m) = (cell["k"], cell["m"]);
        let mut groups: BTreeMap<Vec<usize>, Vec<Supertree>> = BTreeMap::new();
        for t in enumerate_supertrees(m, k)? {
            groups.entry(t.degree_sequence()).or_default().push(t);
        }
        for (pi, class) in groups.into_iter().rev() {
            let ranking = rank_by_q(&class, ctx.solver)?;
            let label = pi.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            let mut values = vec![num(k), num(m), label];
            if !monotone {
                let (bfs, _) = bfs_supertree(&DegreeSequence::new(pi, k)?)?;
                let expected = bfs.canonical_code();
                values.extend(argmax_values(&ranking, &expected));
                report.push(values, argmax_verdict(&ranking, &expected));
                continue;
            }
            let n = class[0].n();
            values.push(num(class.len()));
            let Some(top) = ranking.unique_argmax() else {
                values.extend(["-".into(), "-".into(), "-".into(), "-".into(), "-".into()]);
                report.push(values, Verdict::Inconclusive);
                continue;
            };
            let t = &class[top.index];
            let eps = 10.0 * top.result.residual.max(ctx.solver.tolerance);
            let (verdict, min_sep, equal) = monotonicity(t, &top.result.eigenvector, eps);
            values.extend([
                top.code.to_hex(),
                num(n * (n - 1)),
                if min_sep.is_finite() { fmt_gap(min_sep) } else { "-".into() },
                num(equal),
                fmt_gap(eps),
            ]);
            report.push(values, verdict);
        }
    }
    Ok(report)
}

/// Largest `q` among supertrees with `q` pendent vertices.
pub(super) fn pendent_vertices(ctx: &Context) -> Result<Report, HarnessError> {
    let degrees_only = ctx.claim == ClaimId::PendentVertexDegrees;
    let mut cols = vec!["k", "m", "n", "q", "degrees"];
    if degrees_only {
        cols.extend(["class_size", "argmax", "argmax_degrees", "gap"]);
    } else {
        cols.extend(ARGMAX_COLUMNS);
    }
    let mut report = ctx.report(&cols);
    let mut trees = Enumerated::new();
    for cell in ctx.grid.cells(&["k", "m", "q"])? {
        let (k, m, n, q) = (cell["k"], cell["m"], cell["n"], cell["q"]);
        let pi = pendant_degree_sequence(n, q, k)?;
        let class = filter_class(trees.get(m, k)?.to_vec(), &SupertreeClass::PendentVertices(q));
        let ranking = rank_by_q(&class, ctx.solver)?;
        let label = pi.degrees().iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        let mut values = vec![num(k), num(m), num(n), num(q), label];
        if !degrees_only {
            let (bfs, _) = bfs_supertree(&pi)?;
            let expected = bfs.canonical_code();
            values.extend(argmax_values(&ranking, &expected));
            report.push(values, argmax_verdict(&ranking, &expected));
            continue;
        }
        values.push(num(class.len()));
        match ranking.unique_argmax() {
            Some(top) => {
                let got = class[top.index].degree_sequence();
                values.extend([
                    top.code.to_hex(),
                    got.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
                    ranking.gap(0).map_or("-".into(), fmt_gap),
                ]);
                report.push(values, Verdict::from_bool(got == pi.degrees()));
            }
            None => {
                values.extend(["-".into(), "-".into(), ranking.gap(0).map_or("-".into(), fmt_gap)]);
                report.push(values, Verdict::Inconclusive);
            }
        }
    }
    Ok(report)
}
