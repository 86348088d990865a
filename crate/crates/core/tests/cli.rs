use std::process::{Command, Output};

use supertree::families::s1;
use supertree::io::load_supertree;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_supertree"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn build_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s1.json");
    let p = path.to_str().unwrap();
    let o = run(&["families", "build", "--family", "s1", "--m", "5", "--d", "3", "--k", "3", "--out", p]);
    assert!(o.status.success());
    assert_eq!(load_supertree(&path).unwrap().canonical_code(), s1(5, 3, 3).unwrap().canonical_code());
    let o = run(&["spectral", "solve", "--in", p, "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["lower"].as_f64().unwrap() <= v["upper"].as_f64().unwrap());
}

#[test]
fn surgery_release() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("path.json");
    std::fs::write(&input, r#"{"k":3,"n":7,"edges":[[0,1,2],[2,3,4],[4,5,6]]}"#).unwrap();
    let o = run(&["surgery", "apply", "--op", "release", "--in", input.to_str().unwrap(), "--args", "e=1;u=2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let g = supertree::io::parse_graph(stdout(&o).trim()).unwrap();
    assert_eq!(g.degree(2), 3);
}

#[test]
fn enumerate_csv_columns() {
    let o = run(&["enumerate", "--m", "5", "--k", "3", "--class", "diameter=3", "--rank"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "code,n,m,d,p,q_pendent,q_value,lower,upper,iterations");
    assert_eq!(lines.count(), 3);
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "--claim", "thm3.3", "--grid", "k=3;d=3;m=5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",PASS"));
    let o = run(&["verify", "--claim", "lem2.4", "--grid", "k=3;m=3..5", "--instances", "20", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["claim_id"], "lem2.4");
    assert!(v["seed"].is_u64());
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(run(&["verify", "--claim", "thm9.9"]).status.code(), Some(3));
    assert_eq!(run(&["verify"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "--claim", "thm3.3", "--grid", "k=="]).status.code(), Some(3));
    assert_eq!(run(&["spectral", "solve", "--in", "/nonexistent.json"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_graph_names_the_edge() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.json");
    std::fs::write(&input, r#"{"k":3,"n":5,"edges":[[0,1,2],[2,3]]}"#).unwrap();
    let o = run(&["spectral", "solve", "--in", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("edge 1"));
}

#[test]
fn empty_scan_writes_header_only() {
    let o = run(&["conjecture-scan", "--d", "5..4", "--m", "d+1", "--k", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o).lines().count(), 1);
}
