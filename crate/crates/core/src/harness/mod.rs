//! Claim-by-claim verification over parameter grids.
//!
//! Every strict inequality is certified by brackets: `a > b` holds when
//! `a.lower - b.upper` exceeds ten times the solver tolerance, fails when the
//! brackets are separated the other way, and is inconclusive otherwise.

mod conjecture;
pub mod grid;
mod lemmas;
mod theorems;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::{certification_margin, EnumerateError};
use crate::families::FamilyError;
use crate::spectral::{SolverOptions, SpectralError, SpectralResult};

pub use conjecture::conjecture_scan;
pub use grid::{Grid, GridError};

pub const DEFAULT_SEED: u64 = 20_240_917;
pub const DEFAULT_INSTANCES: usize = 200;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("{0}")]
    BadGrid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    /// Combines two verdicts: any failure dominates, then any inconclusive.
    pub fn and(self, other: Verdict) -> Verdict {
        self.max(other)
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn label(self, kind: ReportKind) -> &'static str {
        match (kind, self) {
            (ReportKind::Claim, Verdict::Pass) => "PASS",
            (ReportKind::Claim, Verdict::Fail) => "FAIL",
            (ReportKind::Conjecture, Verdict::Pass) => "CONSISTENT",
            (ReportKind::Conjecture, Verdict::Fail) => "COUNTEREXAMPLE",
            (_, Verdict::Inconclusive) => "INCONCLUSIVE",
        }
    }

    fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportKind {
    Claim,
    Conjecture,
}

/// Result of certifying `a > b` from two brackets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub verdict: Verdict,
    /// `a.lower - b.upper`.
    pub gap: f64,
}

pub fn certify_greater(a: &SpectralResult, b: &SpectralResult, opts: &SolverOptions) -> Comparison {
    let margin = certification_margin(opts);
    let gap = a.lower - b.upper;
    let verdict = if gap > margin {
        Verdict::Pass
    } else if b.lower - a.upper > margin {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    Comparison { verdict, gap }
}

/// Certifies `a >= b`: only a separated reversal fails.
pub fn certify_at_least(a: &SpectralResult, b: &SpectralResult, opts: &SolverOptions) -> Comparison {
    let margin = certification_margin(opts);
    let gap = a.upper - b.lower;
    let verdict = if b.lower - a.upper > margin {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    Comparison { verdict, gap }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub values: Vec<String>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub claim_id: String,
    pub kind: ReportKind,
    pub params: String,
    pub solver: SolverOptions,
    pub seed: Option<u64>,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    pub verdict: Verdict,
    pub runtime_secs: f64,
}

impl Report {
    pub(crate) fn new(claim_id: &str, kind: ReportKind, params: String, solver: SolverOptions, columns: &[&str]) -> Self {
        Report {
            claim_id: claim_id.to_string(),
            kind,
            params,
            solver,
            seed: None,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            verdict: Verdict::Inconclusive,
            runtime_secs: 0.0,
        }
    }

    pub(crate) fn push(&mut self, values: Vec<String>, verdict: Verdict) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(Row { values, verdict });
    }

    /// Sets the overall verdict from the rows; no rows means inconclusive.
    pub(crate) fn finish(&mut self, started: Instant) {
        self.verdict = match self.rows.iter().map(|r| r.verdict).reduce(Verdict::and) {
            Some(v) => v,
            None => Verdict::Inconclusive,
        };
        self.runtime_secs = started.elapsed().as_secs_f64();
    }

    pub fn verdict_label(&self) -> &'static str {
        self.verdict.label(self.kind)
    }

    pub fn row_label(&self, row: &Row) -> &'static str {
        row.verdict.label(self.kind)
    }

    /// Value of `column` in `row`.
    pub fn get<'a>(&'a self, row: &'a Row, column: &str) -> Option<&'a str> {
        let i = self.columns.iter().position(|c| c == column)?;
        row.values.get(i).map(String::as_str)
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.rows.iter().filter(|r| r.verdict == verdict).count()
    }
}

/// Claims that [`verify`] knows how to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClaimId {
    MoveEdges,
    ReleaseSpectral,
    ReleaseDiameter,
    BranchCollapse,
    TwoSwitch,
    Grafting,
    HypertreeDiameter,
    SupertreeDiameter,
    SecondLargestD3,
    PendentEdges,
    DegreeOrder,
    EigenvectorOrder,
    DegreeSequence,
    PendentVertexDegrees,
    PendentVertices,
}

impl ClaimId {
    pub const ALL: [ClaimId; 15] = [
        ClaimId::MoveEdges,
        ClaimId::ReleaseSpectral,
        ClaimId::ReleaseDiameter,
        ClaimId::BranchCollapse,
        ClaimId::TwoSwitch,
        ClaimId::Grafting,
        ClaimId::HypertreeDiameter,
        ClaimId::SupertreeDiameter,
        ClaimId::SecondLargestD3,
        ClaimId::PendentEdges,
        ClaimId::DegreeOrder,
        ClaimId::EigenvectorOrder,
        ClaimId::DegreeSequence,
        ClaimId::PendentVertexDegrees,
        ClaimId::PendentVertices,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::MoveEdges => "lem2.4",
            ClaimId::ReleaseSpectral => "lem2.6",
            ClaimId::ReleaseDiameter => "lem2.7",
            ClaimId::BranchCollapse => "lem2.8",
            ClaimId::TwoSwitch => "lem2.9",
            ClaimId::Grafting => "lem2.10",
            ClaimId::HypertreeDiameter => "thm3.1",
            ClaimId::SupertreeDiameter => "thm3.3",
            ClaimId::SecondLargestD3 => "thm3.4",
            ClaimId::PendentEdges => "thm4.2",
            ClaimId::DegreeOrder => "lem4.4",
            ClaimId::EigenvectorOrder => "lem4.5",
            ClaimId::DegreeSequence => "thm4.8",
            ClaimId::PendentVertexDegrees => "lem4.9",
            ClaimId::PendentVertices => "thm4.10",
        }
    }

    /// Grid used for axes the caller does not set.
    pub fn default_grid(self) -> &'static str {
        match self {
            ClaimId::MoveEdges | ClaimId::TwoSwitch | ClaimId::Grafting => "k=2..4;m=2..6",
            ClaimId::ReleaseSpectral | ClaimId::ReleaseDiameter => "k=2..4;m=2..6",
            ClaimId::BranchCollapse => "k=3..4;m=4..7",
            ClaimId::HypertreeDiameter | ClaimId::SupertreeDiameter => "k=3,4;d=3..5;m=d+1..d+3",
            ClaimId::SecondLargestD3 => "k=3;m=4..7",
            ClaimId::PendentEdges => "k=3;m=2..6;p=2..m",
            ClaimId::DegreeOrder | ClaimId::EigenvectorOrder | ClaimId::DegreeSequence => "k=3;m=1..5",
            ClaimId::PendentVertexDegrees => "k=3;m=2..5;q=n-m+1..n-2",
            ClaimId::PendentVertices => "k=3;m=2..5;q=n-m+1..n-1",
        }
    }

    pub fn is_randomized(self) -> bool {
        matches!(self, ClaimId::MoveEdges | ClaimId::TwoSwitch | ClaimId::Grafting)
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClaimId {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<ClaimId, HarnessError> {
        let key = s.trim().to_ascii_lowercase();
        ClaimId::ALL
            .into_iter()
            .find(|c| c.as_str() == key)
            .ok_or_else(|| HarnessError::UnknownClaim(s.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub grid: Grid,
    pub solver: SolverOptions,
    pub seed: u64,
    pub instances: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            grid: Grid::default(),
            solver: SolverOptions::default(),
            seed: DEFAULT_SEED,
            instances: DEFAULT_INSTANCES,
        }
    }
}

impl VerifyOptions {
    pub fn grid(mut self, grid: &str) -> Result<Self, GridError> {
        self.grid = Grid::parse(grid)?;
        Ok(self)
    }
}

/// Checks one claim on every cell of the grid.
///
/// ```
/// use supertree::harness::{verify, ClaimId, Verdict, VerifyOptions};
///
/// let opts = VerifyOptions::default().grid("k=3;d=3;m=5").unwrap();
/// let report = verify(ClaimId::SupertreeDiameter, &opts).unwrap();
/// assert_eq!(report.verdict, Verdict::Pass);
/// ```
pub fn verify(claim: ClaimId, opts: &VerifyOptions) -> Result<Report, HarnessError> {
    opts.solver.validate()?;
    let started = Instant::now();
    let defaults = Grid::parse(claim.default_grid()).expect("built-in grids parse");
    let grid = opts.grid.over(&defaults);
    let ctx = Context {
        claim,
        grid: &grid,
        solver: &opts.solver,
        seed: opts.seed,
        instances: opts.instances,
    };
    let mut report = match claim {
        ClaimId::MoveEdges => lemmas::move_edges(&ctx)?,
        ClaimId::ReleaseSpectral => lemmas::release(&ctx, false)?,
        ClaimId::ReleaseDiameter => lemmas::release(&ctx, true)?,
        ClaimId::BranchCollapse => lemmas::branch_collapse(&ctx)?,
        ClaimId::TwoSwitch => lemmas::two_switch(&ctx)?,
        ClaimId::Grafting => lemmas::grafting(&ctx)?,
        ClaimId::HypertreeDiameter => theorems::diameter_class(&ctx, true)?,
        ClaimId::SupertreeDiameter => theorems::diameter_class(&ctx, false)?,
        ClaimId::SecondLargestD3 => theorems::second_largest_d3(&ctx)?,
        ClaimId::PendentEdges => theorems::pendent_edges(&ctx)?,
        ClaimId::DegreeOrder => theorems::degree_sequences(&ctx)?,
        ClaimId::EigenvectorOrder => theorems::degree_sequences(&ctx)?,
        ClaimId::DegreeSequence => theorems::degree_sequences(&ctx)?,
        ClaimId::PendentVertexDegrees => theorems::pendent_vertices(&ctx)?,
        ClaimId::PendentVertices => theorems::pendent_vertices(&ctx)?,
    };
    if claim.is_randomized() {
        report.seed = Some(opts.seed);
    }
    report.finish(started);
    Ok(report)
}

pub(crate) struct Context<'a> {
    pub claim: ClaimId,
    pub grid: &'a Grid,
    pub solver: &'a SolverOptions,
    pub seed: u64,
    pub instances: usize,
}

impl Context<'_> {
    pub fn report(&self, columns: &[&str]) -> Report {
        Report::new(
            self.claim.as_str(),
            ReportKind::Claim,
            self.grid.to_string(),
            *self.solver,
            columns,
        )
    }
}

pub(crate) fn fmt_f(x: f64) -> String {
    format!("{x:.12}")
}

pub(crate) fn fmt_gap(x: f64) -> String {
    format!("{x:.3e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn result(lower: f64, upper: f64) -> SpectralResult {
        SpectralResult {
            value: (lower + upper) / 2.0,
            lower,
            upper,
            eigenvector: vec![],
            residual: 0.0,
            iterations: 0,
        }
    }

    #[test]
    fn certification() {
        let opts = SolverOptions::default();
        let a = result(3.0, 3.0 + 1e-10);
        let b = result(2.0, 2.0 + 1e-10);
        assert_eq!(certify_greater(&a, &b, &opts).verdict, Verdict::Pass);
        assert_eq!(certify_greater(&b, &a, &opts).verdict, Verdict::Fail);
        assert_eq!(certify_greater(&a, &a, &opts).verdict, Verdict::Inconclusive);
        assert_eq!(certify_at_least(&a, &a, &opts).verdict, Verdict::Pass);
        assert_eq!(certify_at_least(&b, &a, &opts).verdict, Verdict::Fail);
    }

    #[test]
    fn claim_ids_roundtrip() {
        for c in ClaimId::ALL {
            assert_eq!(c.as_str().parse::<ClaimId>().unwrap(), c);
            Grid::parse(c.default_grid()).unwrap();
        }
        assert!(matches!("thm9.9".parse::<ClaimId>(), Err(HarnessError::UnknownClaim(_))));
    }

    #[test]
    fn empty_report_is_inconclusive() {
        let mut r = Report::new("x", ReportKind::Claim, String::new(), SolverOptions::default(), &["a"]);
        r.finish(Instant::now());
        assert_eq!(r.verdict, Verdict::Inconclusive);
        r.push(vec!["1".into()], Verdict::Pass);
        r.finish(Instant::now());
        assert_eq!(r.verdict, Verdict::Pass);
        r.push(vec!["2".into()], Verdict::Inconclusive);
        r.finish(Instant::now());
        assert_eq!(r.verdict_label(), "INCONCLUSIVE");
        r.push(vec!["3".into()], Verdict::Fail);
        r.finish(Instant::now());
        assert_eq!(r.verdict.exit_code(), 1);
    }
}
