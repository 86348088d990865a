//! Exploratory scan of the second place in the diameter-`d` ranking.

use std::time::Instant;

use super::{fmt_f, fmt_gap, Grid, HarnessError, Report, ReportKind, Verdict};
use crate::enumerate::{enumerate_with, filter_class, rank_by_q, EnumerateOptions, SupertreeClass};
use crate::families;
use crate::spectral::SolverOptions;

/// For every `(d, m, k)` cell, ranks the supertrees of diameter `d` and
/// asks whether the runner-up is `s2(m, d, k)`.
///
/// `grid` needs axes `d`, `m` and `k`; `m` may depend on `d`. A cell is
/// CONSISTENT when the first three places are bracket-separated and the
/// runner-up is `s2`, a COUNTEREXAMPLE when they are separated and it is not,
/// and INCONCLUSIVE otherwise.
pub fn conjecture_scan(grid: &Grid, solver: &SolverOptions) -> Result<Report, HarnessError> {
    solver.validate()?;
    let started = Instant::now();
    let mut report = Report::new(
        "conjecture-scan",
        ReportKind::Conjecture,
        grid.to_string(),
        *solver,
        &[
            "d", "m", "k", "class_size", "first", "first_is_s1", "second", "second_is_s2", "s2_rank",
            "q_first", "q_second", "q_third", "gap_first_second", "gap_second_third",
        ],
    );
    for cell in grid.cells(&["d", "m", "k"])? {
        let (d, m, k) = (cell["d"], cell["m"], cell["k"]);
        if d < 4 || m <= d {
            return Err(HarnessError::BadGrid(format!("need 4 <= d < m, got d = {d}, m = {m}")));
        }
        let all = enumerate_with(m, k, &EnumerateOptions::default().max_diameter(d))?;
        let class = filter_class(all, &SupertreeClass::Diameter(d));
        let ranking = rank_by_q(&class, solver)?;
        let s1 = families::s1(m, d, k)?.canonical_code();
        let s2 = families::s2(m, d, k)?.canonical_code();
        let entry = |i: usize| ranking.entries.get(i);
        let second_is_s2 = entry(1).is_some_and(|e| e.code == s2);
        let separated = ranking.entries.len() >= 2
            && ranking.separated(0)
            && (ranking.entries.len() < 3 || ranking.separated(1));
        let verdict = match (separated, second_is_s2) {
            (false, _) => Verdict::Inconclusive,
            (true, true) => Verdict::Pass,
            (true, false) => Verdict::Fail,
        };
        let hex = |i: usize| entry(i).map_or("-".into(), |e| e.code.to_hex());
        let q = |i: usize| entry(i).map_or("-".into(), |e| fmt_f(e.value()));
        report.push(
            vec![
                d.to_string(),
                m.to_string(),
                k.to_string(),
                ranking.entries.len().to_string(),
                hex(0),
                entry(0).is_some_and(|e| e.code == s1).to_string(),
                hex(1),
                second_is_s2.to_string(),
                ranking.position(&s2).map_or("-".into(), |p| (p + 1).to_string()),
                q(0),
                q(1),
                q(2),
                ranking.gap(0).map_or("-".into(), fmt_gap),
                ranking.gap(1).map_or("-".into(), fmt_gap),
            ],
            verdict,
        );
    }
    report.finish(started);
    Ok(report)
}
