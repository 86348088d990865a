//! Graph files and report export.
//!
//! A graph is stored as JSON: `{"k": 3, "n": 7, "edges": [[0,1,2], ...]}`.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::Ranking;
use crate::harness::Report;
use crate::hypergraph::{GraphError, Hypergraph, Supertree};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("edge {index}: {message}")]
    BadEdge { index: usize, message: String },
    #[error(transparent)]
    Graph(GraphError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    k: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

/// Parses the JSON graph format.
///
/// ```
/// use supertree::io::parse_graph;
///
/// let g = parse_graph(r#"{"k": 2, "n": 3, "edges": [[0, 1], [1, 2]]}"#).unwrap();
/// assert_eq!(g.m(), 2);
/// assert!(parse_graph(r#"{"k": 3, "n": 3, "edges": [[0, 1]]}"#).is_err());
/// ```
pub fn parse_graph(text: &str) -> Result<Hypergraph, IoError> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| IoError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Hypergraph::new(file.k, file.n, file.edges).map_err(|e| match e {
        GraphError::NonUniformEdge { index, .. }
        | GraphError::DuplicateEdge { index, .. }
        | GraphError::VertexOutOfRange { index, .. } => IoError::BadEdge {
            index,
            message: e.to_string(),
        },
        other => IoError::Graph(other),
    })
}

pub fn graph_to_json(g: &Hypergraph) -> String {
    let file = GraphFile {
        k: g.k(),
        n: g.n(),
        edges: g.edges().to_vec(),
    };
    serde_json::to_string(&file).expect("graph serializes")
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<Hypergraph, IoError> {
    parse_graph(&read(path.as_ref())?)
}

pub fn load_supertree(path: impl AsRef<Path>) -> Result<Supertree, IoError> {
    Supertree::new(load_graph(path)?).map_err(IoError::Graph)
}

pub fn save_graph(path: impl AsRef<Path>, g: &Hypergraph) -> Result<(), IoError> {
    write(path.as_ref(), graph_to_json(g).as_bytes())
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    fs::write(path, bytes).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes the report's rows with a trailing `verdict` column.
pub fn write_report_csv<W: Write>(report: &Report, out: W) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = report.columns.clone();
    header.push("verdict".into());
    w.write_record(&header)?;
    for row in &report.rows {
        let mut record = row.values.clone();
        record.push(report.row_label(row).into());
        w.write_record(&record)?;
    }
    w.flush().map_err(|source| IoError::Io {
        path: "<csv>".into(),
        source,
    })?;
    Ok(())
}

pub fn report_to_json(report: &Report) -> Result<String, IoError> {
    Ok(serde_json::to_string_pretty(report)?)
}

pub const ENUMERATION_COLUMNS: [&str; 10] = [
    "code", "n", "m", "d", "p", "q_pendent", "q_value", "lower", "upper", "iterations",
];

/// One row per tree; spectral columns are filled from `ranking` when given,
/// in which case rows follow the ranking order.
pub fn write_enumeration_csv<W: Write>(
    trees: &[Supertree],
    ranking: Option<&Ranking>,
    out: W,
) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ENUMERATION_COLUMNS)?;
    let order: Vec<usize> = match ranking {
        Some(r) => r.entries.iter().map(|e| e.index).collect(),
        None => (0..trees.len()).collect(),
    };
    for (pos, &i) in order.iter().enumerate() {
        let t = &trees[i];
        let (p, q) = t.pendent_counts();
        let mut record = vec![
            t.canonical_code().to_hex(),
            t.n().to_string(),
            t.m().to_string(),
            t.diameter().to_string(),
            p.to_string(),
            q.to_string(),
        ];
        match ranking.map(|r| &r.entries[pos].result) {
            Some(res) => record.extend([
                format!("{:.12}", res.value),
                format!("{:.12}", res.lower),
                format!("{:.12}", res.upper),
                res.iterations.to_string(),
            ]),
            None => record.extend(["".into(), "".into(), "".into(), "".into()]),
        }
        w.write_record(&record)?;
    }
    w.flush().map_err(|source| IoError::Io {
        path: "<csv>".into(),
        source,
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::s1;
    use crate::harness::{ReportKind, Verdict};
    use crate::spectral::SolverOptions;

    #[test]
    fn roundtrip_preserves_code() {
        let t = s1(5, 3, 3).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.json");
        save_graph(&path, t.graph()).unwrap();
        let back = load_supertree(&path).unwrap();
        assert_eq!(back.canonical_code(), t.canonical_code());
        assert_eq!(back.graph(), t.graph());
    }

    #[test]
    fn short_edge_names_its_index() {
        let err = parse_graph(r#"{"k":3,"n":5,"edges":[[0,1,2],[2,3]]}"#).unwrap_err();
        match err {
            IoError::BadEdge { index, .. } => assert_eq!(index, 1),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_graph("{\"k\": 3,\n \"n\": }").unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 2, .. }), "{err}");
        assert!(matches!(parse_graph(r#"{"k":2,"n":2,"edges":[[0,1]],"x":1}"#), Err(IoError::Parse { .. })));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(load_graph("/nonexistent/g.json"), Err(IoError::Io { .. })));
    }

    #[test]
    fn empty_report_is_header_only() {
        let r = Report {
            claim_id: "x".into(),
            kind: ReportKind::Claim,
            params: String::new(),
            solver: SolverOptions::default(),
            seed: None,
            columns: vec!["a".into(), "b".into()],
            rows: vec![],
            verdict: Verdict::Inconclusive,
            runtime_secs: 0.0,
        };
        let mut buf = Vec::new();
        write_report_csv(&r, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b,verdict\n");
        let json: serde_json::Value = serde_json::from_str(&report_to_json(&r).unwrap()).unwrap();
        assert_eq!(json["verdict"], "INCONCLUSIVE");
    }
}
