//! Surgery lemmas checked on enumerated or randomly drawn instances.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{certify_at_least, certify_greater, fmt_f, fmt_gap, Context, HarnessError, Report, Verdict};
use crate::enumerate::{enumerate_supertrees, solve_all};
use crate::hypergraph::{CanonicalCode, Hypergraph, Supertree};
use crate::spectral::SpectralResult;
use crate::surgery;

/// Random draws allowed per requested instance before giving up.
const ATTEMPTS_PER_INSTANCE: usize = 500;

/// Eigenvector products closer than this count as equal when deciding
/// whether a 2-switch hypothesis is strict.
const STRICT_THRESHOLD: f64 = 1e-8;

struct Pool {
    trees: Vec<Supertree>,
    results: Vec<SpectralResult>,
}

fn pool(ctx: &Context, min_m: usize, max_m: Option<usize>) -> Result<Pool, HarnessError> {
    let mut trees = Vec::new();
    for cell in ctx.grid.cells(&["k", "m"])? {
        let (k, m) = (cell["k"], cell["m"]);
        if m < min_m || max_m.is_some_and(|hi| m > hi) {
            continue;
        }
        trees.extend(enumerate_supertrees(m, k)?);
    }
    let results = solve_all(&trees, ctx.solver)?;
    Ok(Pool { trees, results })
}

fn max_m(ctx: &Context) -> Result<usize, HarnessError> {
    let cells = ctx.grid.cells(&["k", "m"])?;
    Ok(cells.iter().map(|c| c["m"]).max().unwrap_or(0))
}

/// Solves every distinct tree once.
fn solve_distinct<'a>(
    ctx: &Context,
    trees: impl IntoIterator<Item = &'a Supertree>,
) -> Result<HashMap<CanonicalCode, SpectralResult>, HarnessError> {
    let mut seen = HashSet::new();
    let unique: Vec<Supertree> = trees
        .into_iter()
        .filter(|t| seen.insert(t.canonical_code()))
        .cloned()
        .collect();
    let results = solve_all(&unique, ctx.solver)?;
    Ok(unique
        .iter()
        .map(Supertree::canonical_code)
        .zip(results)
        .collect())
}

fn shortfall(report: &mut Report, found: usize, wanted: usize) {
    if found >= wanted {
        return;
    }
    let mut values = vec!["-".to_string(); report.columns.len()];
    values[0] = format!("only {found} of {wanted} valid instances");
    report.push(values, Verdict::Inconclusive);
}

fn list(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub(super) fn move_edges(ctx: &Context) -> Result<Report, HarnessError> {
    let pool = pool(ctx, 2, None)?;
    let mut report = ctx.report(&[
        "instance", "k", "m", "graph", "u", "moves", "result", "q", "q_result", "gap",
    ]);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut seen = HashSet::new();
    let mut drawn: Vec<(usize, usize, Vec<(usize, usize)>, Supertree)> = Vec::new();
    let mut attempts = 0;
    while drawn.len() < ctx.instances && attempts < ctx.instances * ATTEMPTS_PER_INSTANCE && !pool.trees.is_empty() {
        attempts += 1;
        let idx = rng.gen_range(0..pool.trees.len());
        let t = &pool.trees[idx];
        let x = &pool.results[idx].eigenvector;
        let u = rng.gen_range(0..t.n());
        let outside: Vec<usize> = (0..t.m()).filter(|&j| !t.edge(j).contains(&u)).collect();
        if outside.is_empty() {
            continue;
        }
        let r = rng.gen_range(1..=outside.len().min(3));
        let mut chosen: Vec<usize> = outside.choose_multiple(&mut rng, r).copied().collect();
        chosen.sort_unstable();
        let mut moves = Vec::with_capacity(r);
        for &j in &chosen {
            let below: Vec<usize> = t.edge(j).iter().copied().filter(|&v| x[v] <= x[u]).collect();
            match below.choose(&mut rng) {
                Some(&v) => moves.push((j, v)),
                None => break,
            }
        }
        if moves.len() != chosen.len() || !seen.insert((idx, u, moves.clone())) {
            continue;
        }
        let Ok(g) = surgery::move_edges(t, u, &moves) else { continue };
        let Ok(result) = Supertree::new(g) else { continue };
        drawn.push((idx, u, moves, result));
    }
    let solved = solve_distinct(ctx, drawn.iter().map(|d| &d.3))?;
    for (i, (idx, u, moves, result)) in drawn.iter().enumerate() {
        let t = &pool.trees[*idx];
        let before = &pool.results[*idx];
        let code = result.canonical_code();
        let after = &solved[&code];
        let cmp = certify_greater(after, before, ctx.solver);
        let moves: Vec<String> = moves.iter().map(|(j, v)| format!("{j}:{v}")).collect();
        report.push(
            vec![
                i.to_string(),
                t.k().to_string(),
                t.m().to_string(),
                t.canonical_code().to_hex(),
                u.to_string(),
                moves.join(" "),
                code.to_hex(),
                fmt_f(before.value),
                fmt_f(after.value),
                fmt_gap(cmp.gap),
            ],
            cmp.verdict,
        );
    }
    shortfall(&mut report, drawn.len(), ctx.instances);
    Ok(report)
}

/// Edge release at every vertex of every non-pendent edge in the pool;
/// either the spectral or the diameter statement is checked.
pub(super) fn release(ctx: &Context, diameter: bool) -> Result<Report, HarnessError> {
    let pool = pool(ctx, 2, None)?;
    let columns: &[&str] = if diameter {
        &["instance", "k", "m", "graph", "edge", "u", "result", "d", "d_result"]
    } else {
        &["instance", "k", "m", "graph", "edge", "u", "result", "q", "q_result", "gap"]
    };
    let mut report = ctx.report(columns);
    let mut done: Vec<(usize, usize, usize, Supertree)> = Vec::new();
    for (idx, t) in pool.trees.iter().enumerate() {
        for e in (0..t.m()).filter(|&e| !t.is_pendent_edge(e)) {
            for &u in t.edge(e) {
                if surgery::release_moves(t, e, u).is_empty() {
                    continue;
                }
                let result = surgery::edge_release(t, e, u).map_err(|err| {
                    HarnessError::BadGrid(format!("edge release failed on {}: {err}", t.canonical_code()))
                })?;
                done.push((idx, e, u, result));
            }
        }
    }
    let solved = if diameter {
        HashMap::new()
    } else {
        solve_distinct(ctx, done.iter().map(|d| &d.3))?
    };
    for (i, (idx, e, u, result)) in done.iter().enumerate() {
        let t = &pool.trees[*idx];
        let code = result.canonical_code();
        let mut values = vec![
            i.to_string(),
            t.k().to_string(),
            t.m().to_string(),
            t.canonical_code().to_hex(),
            e.to_string(),
            u.to_string(),
            code.to_hex(),
        ];
        let verdict = if diameter {
            let (d, d2) = (t.diameter(), result.diameter());
            values.extend([d.to_string(), d2.to_string()]);
            Verdict::from_bool(d2 <= d)
        } else {
            let (before, after) = (&pool.results[*idx], &solved[&code]);
            let cmp = certify_greater(after, before, ctx.solver);
            values.extend([fmt_f(before.value), fmt_f(after.value), fmt_gap(cmp.gap)]);
            cmp.verdict
        };
        report.push(values, verdict);
    }
    Ok(report)
}

/// Every branch edge with every ordered choice of the two vertices kept.
pub(super) fn branch_collapse(ctx: &Context) -> Result<Report, HarnessError> {
    let pool = pool(ctx, 2, None)?;
    let mut report = ctx.report(&[
        "instance", "k", "m", "graph", "edge", "target", "kept", "result", "q", "q_result", "gap", "d",
        "d_result",
    ]);
    let mut done = Vec::new();
    for (idx, t) in pool.trees.iter().enumerate() {
        for e in (0..t.m()).filter(|&e| t.is_branch_edge(e)) {
            let inner = t.non_pendent_vertices(e);
            for &a in &inner {
                for &b in inner.iter().filter(|&&b| b != a) {
                    let result = surgery::branch_collapse(t, e, (a, b)).map_err(|err| {
                        HarnessError::BadGrid(format!(
                            "branch collapse failed on {}: {err}",
                            t.canonical_code()
                        ))
                    })?;
                    done.push((idx, e, a, b, result));
                }
            }
        }
    }
    let solved = solve_distinct(ctx, done.iter().map(|d| &d.4))?;
    for (i, (idx, e, a, b, result)) in done.iter().enumerate() {
        let t = &pool.trees[*idx];
        let code = result.canonical_code();
        let (before, after) = (&pool.results[*idx], &solved[&code]);
        let cmp = certify_greater(after, before, ctx.solver);
        let (d, d2) = (t.diameter(), result.diameter());
        report.push(
            vec![
                i.to_string(),
                t.k().to_string(),
                t.m().to_string(),
                t.canonical_code().to_hex(),
                e.to_string(),
                a.to_string(),
                b.to_string(),
                code.to_hex(),
                fmt_f(before.value),
                fmt_f(after.value),
                fmt_gap(cmp.gap),
                d.to_string(),
                d2.to_string(),
            ],
            cmp.verdict.and(Verdict::from_bool(d2 <= d)),
        );
    }
    Ok(report)
}

fn product(x: &[f64], vs: &[usize]) -> f64 {
    vs.iter().map(|&v| x[v]).product()
}

pub(super) fn two_switch(ctx: &Context) -> Result<Report, HarnessError> {
    let pool = pool(ctx, 2, None)?;
    let mut report = ctx.report(&[
        "instance", "k", "m", "graph", "e", "f", "u1", "v1", "gap_u1_v1", "gap_v2_u2", "strict", "result",
        "q", "q_result", "gap",
    ]);
    struct Draw {
        idx: usize,
        e: usize,
        f: usize,
        u1: Vec<usize>,
        v1: Vec<usize>,
        a: f64,
        b: f64,
        result: Supertree,
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut seen = HashSet::new();
    let mut drawn: Vec<Draw> = Vec::new();
    let mut attempts = 0;
    while drawn.len() < ctx.instances && attempts < ctx.instances * ATTEMPTS_PER_INSTANCE && !pool.trees.is_empty() {
        attempts += 1;
        let idx = rng.gen_range(0..pool.trees.len());
        let t = &pool.trees[idx];
        let x = &pool.results[idx].eigenvector;
        let (mut e, mut f) = (rng.gen_range(0..t.m()), rng.gen_range(0..t.m()));
        if e == f || t.edge(e).iter().any(|v| t.edge(f).contains(v)) {
            continue;
        }
        let r = rng.gen_range(1..t.k());
        let mut u1: Vec<usize> = t.edge(e).choose_multiple(&mut rng, r).copied().collect();
        let mut v1: Vec<usize> = t.edge(f).choose_multiple(&mut rng, r).copied().collect();
        let rest = |edge: &[usize], sub: &[usize]| -> Vec<usize> {
            edge.iter().copied().filter(|v| !sub.contains(v)).collect()
        };
        let mut a = product(x, &u1) - product(x, &v1);
        let mut b = product(x, &rest(t.edge(f), &v1)) - product(x, &rest(t.edge(e), &u1));
        if a <= 0.0 && b <= 0.0 {
            // Same switch read from the other edge.
            std::mem::swap(&mut e, &mut f);
            std::mem::swap(&mut u1, &mut v1);
            a = -a;
            b = -b;
        }
        if a < 0.0 || b < 0.0 {
            continue;
        }
        u1.sort_unstable();
        v1.sort_unstable();
        let key = if e < f {
            (idx, e, f, u1.clone(), v1.clone())
        } else {
            (idx, f, e, v1.clone(), u1.clone())
        };
        if !seen.insert(key) {
            continue;
        }
        let Ok(g) = surgery::two_switch(t, e, f, &u1, &v1) else { continue };
        let Ok(result) = Supertree::new(g) else { continue };
        drawn.push(Draw { idx, e, f, u1, v1, a, b, result });
    }
    let solved = solve_distinct(ctx, drawn.iter().map(|d| &d.result))?;
    for (i, d) in drawn.iter().enumerate() {
        let t = &pool.trees[d.idx];
        let code = d.result.canonical_code();
        let (before, after) = (&pool.results[d.idx], &solved[&code]);
        let strict = d.a.max(d.b) > STRICT_THRESHOLD;
        let cmp = if strict {
            certify_greater(after, before, ctx.solver)
        } else {
            certify_at_least(after, before, ctx.solver)
        };
        report.push(
            vec![
                i.to_string(),
                t.k().to_string(),
                t.m().to_string(),
                t.canonical_code().to_hex(),
                d.e.to_string(),
                d.f.to_string(),
                list(&d.u1),
                list(&d.v1),
                fmt_gap(d.a),
                fmt_gap(d.b),
                strict.to_string(),
                code.to_hex(),
                fmt_f(before.value),
                fmt_f(after.value),
                fmt_gap(cmp.gap),
            ],
            cmp.verdict,
        );
    }
    shortfall(&mut report, drawn.len(), ctx.instances);
    Ok(report)
}

/// `H(u; p, q)` against `H(u; p + 1, q - 1)` for random bases `H` whose
/// total edge count stays within the grid's largest `m`.
pub(super) fn grafting(ctx: &Context) -> Result<Report, HarnessError> {
    let top = max_m(ctx)?;
    let pool = pool(ctx, 1, Some(top.saturating_sub(2)))?;
    let mut report = ctx.report(&[
        "instance", "k", "base", "u", "p", "q", "graph", "grafted", "q_graph", "q_grafted", "gap",
    ]);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut seen = HashSet::new();
    let mut drawn: Vec<(usize, usize, usize, usize, Supertree, Supertree)> = Vec::new();
    let mut attempts = 0;
    while drawn.len() < ctx.instances && attempts < ctx.instances * ATTEMPTS_PER_INSTANCE && !pool.trees.is_empty() {
        attempts += 1;
        let idx = rng.gen_range(0..pool.trees.len());
        let h = &pool.trees[idx];
        let room = top - h.m();
        if room < 2 {
            continue;
        }
        let u = rng.gen_range(0..h.n());
        let total = rng.gen_range(2..=room);
        let q = rng.gen_range(1..=total / 2);
        let p = total - q;
        if !seen.insert((idx, u, p, q)) {
            continue;
        }
        let g = surgery::attach_pendent_paths(h, u, p, q);
        let grafted = surgery::graft_step(&g, u, p, q).map_err(|err| {
            HarnessError::BadGrid(format!("grafting failed on {}: {err}", h.canonical_code()))
        })?;
        let as_tree = |g: Hypergraph| {
            Supertree::new(g).map_err(|err| HarnessError::BadGrid(format!("grafting left the class: {err}")))
        };
        drawn.push((idx, u, p, q, as_tree(g)?, as_tree(grafted)?));
    }
    let solved = solve_distinct(ctx, drawn.iter().flat_map(|d| [&d.4, &d.5]))?;
    for (i, (idx, u, p, q, g, grafted)) in drawn.iter().enumerate() {
        let h = &pool.trees[*idx];
        let (cg, cs) = (g.canonical_code(), grafted.canonical_code());
        let (rg, rs) = (&solved[&cg], &solved[&cs]);
        let cmp = certify_greater(rg, rs, ctx.solver);
        report.push(
            vec![
                i.to_string(),
                h.k().to_string(),
                h.canonical_code().to_hex(),
                u.to_string(),
                p.to_string(),
                q.to_string(),
                cg.to_hex(),
                cs.to_hex(),
                fmt_f(rg.value),
                fmt_f(rs.value),
                fmt_gap(cmp.gap),
            ],
            cmp.verdict,
        );
    }
    shortfall(&mut report, drawn.len(), ctx.instances);
    Ok(report)
}
