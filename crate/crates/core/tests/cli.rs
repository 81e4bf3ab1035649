use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ssg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn schema_errors(instance: &Value) -> Vec<String> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas/report.schema.json");
    let schema: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    validator.iter_errors(instance).map(|e| e.to_string()).collect()
}

#[test]
fn family_output_parses_and_is_deterministic() {
    let a = ssg(&["family", "gamma9"]);
    let b = ssg(&["family", "gamma9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let g = ssg_core::bigraph::BipartiteGraph::from_text(&stdout(&a)).unwrap();
    assert_eq!((g.n_w(), g.n_u(), g.edge_count()), (27, 27, 243));
}

#[test]
fn bad_tokens_and_primes_exit_2() {
    assert_eq!(ssg(&["family", "sigma1:4"]).status.code(), Some(2));
    assert_eq!(ssg(&["family", "sigma1:3"]).status.code(), Some(2));
    assert_eq!(ssg(&["family", "nonsense"]).status.code(), Some(2));
    assert_eq!(ssg(&["verify-paper", "--p", "4"]).status.code(), Some(2));
    assert_eq!(ssg(&["verify-paper", "--p", "7"]).status.code(), Some(2));
    assert_eq!(ssg(&["expand", "sigma3small", "--p", "0"]).status.code(), Some(2));
}

#[test]
fn tiny_coset_bound_is_reported() {
    let o = Command::new(env!("CARGO_BIN_EXE_ssg"))
        .args(["family", "sigma1:5"])
        .env("SSG_COSET_BOUND", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn check_writes_verdict_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("verdict.json");
    let o = ssg(&["check", "gamma9", "--mode", "full", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("semisymmetric: true"));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["semisymmetric"], Value::Bool(true));
    assert_eq!(v["regular"], Value::Bool(true));
}

#[test]
fn certificate_mode_without_witness_is_undecided_on_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    assert!(ssg(&["family", "gamma1:5", "--out", file.to_str().unwrap()]).status.success());
    let o = ssg(&["check", file.to_str().unwrap(), "--mode", "certificate"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    let o = ssg(&["check", "gamma1:5", "--mode", "certificate"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("semisymmetric: true"));
}

#[test]
fn quotient_and_expand_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let expanded = dir.path().join("e.txt");
    let back = dir.path().join("q.txt");
    assert!(ssg(&["expand", "sigma3small", "--p", "3", "--out", expanded.to_str().unwrap()])
        .status
        .success());
    assert!(ssg(&["quotient", expanded.to_str().unwrap(), "--out", back.to_str().unwrap()])
        .status
        .success());
    let o = ssg(&["iso", back.to_str().unwrap(), "sigma3small"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "true");
    let o = ssg(&["iso", expanded.to_str().unwrap(), "gamma9"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn iso_distinguishes_the_small_pair() {
    let o = ssg(&["iso", "sigma3small", "sigma6small"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "false");
}

#[test]
fn aut_prints_order() {
    let o = ssg(&["aut", "sigma3small"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("order 1296"));
}

#[test]
fn witness_file_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let witness = dir.path().join("w.txt");
    assert!(ssg(&["family", "sigma3small", "--out", graph.to_str().unwrap()]).status.success());
    let aut = stdout(&ssg(&["aut", "sigma3small"]));
    let gens: String = aut.lines().skip(1).map(|l| format!("{l}\n")).collect();
    fs::write(&witness, gens).unwrap();
    let o = ssg(&[
        "check",
        graph.to_str().unwrap(),
        "--mode",
        "certificate",
        "--witness",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("edge-transitive: true"));
}

#[test]
fn verify_paper_reports_validate_and_repeat() {
    for p in ["3", "5"] {
        let a = ssg(&["verify-paper", "--p", p]);
        let b = ssg(&["verify-paper", "--p", p]);
        assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
        let ja: Value = serde_json::from_slice(&a.stdout).unwrap();
        let mut jb: Value = serde_json::from_slice(&b.stdout).unwrap();
        assert_eq!(schema_errors(&ja), Vec::<String>::new());
        assert_eq!(ja["verdict"], "pass");
        // Only the timings may differ between runs.
        let mut ja = ja;
        for j in [&mut ja, &mut jb] {
            for c in j["claims"].as_array_mut().unwrap() {
                c.as_object_mut().unwrap().remove("elapsed_ms");
            }
        }
        assert_eq!(ja, jb);
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let o = ssg(&["verify-paper", "--p", "3"]);
    let mut j: Value = serde_json::from_slice(&o.stdout).unwrap();
    j["unexpected"] = Value::Bool(true);
    assert!(!schema_errors(&j).is_empty());
}

fn write_graph(dir: &Path, name: &str, n_w: usize, n_u: usize, edges: &[(usize, usize)]) -> String {
    let mut text = format!("ssg-bipartite 1\nparts {n_w} {n_u}\nedges {}\n", edges.len());
    for (w, u) in edges {
        text.push_str(&format!("{w} {u}\n"));
    }
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn user_files_in_full_mode() {
    let dir = tempfile::tempdir().unwrap();
    let k33: Vec<(usize, usize)> = (0..3).flat_map(|w| (0..3).map(move |u| (w, u))).collect();
    let k33 = write_graph(dir.path(), "k33.graph", 3, 3, &k33);
    let o = ssg(&["check", &k33, "--mode", "full"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("semisymmetric: false"));

    let edge = write_graph(dir.path(), "edge.graph", 1, 1, &[(0, 0)]);
    assert_eq!(stdout(&ssg(&["aut", &edge])).lines().next(), Some("order 2"));
}

#[test]
fn family_headers_and_large_orders() {
    let s1 = stdout(&ssg(&["family", "sigma1:5"]));
    assert!(s1.contains("parts 125 25\n") && s1.contains("edges 625\n"));
    let o = ssg(&["aut", "gamma9"]);
    assert_eq!(stdout(&o).lines().next(), Some("order 13060694016"));
    for line in stdout(&o).lines().skip(1) {
        assert!(line.starts_with('(') || line == "()", "{line}");
    }
}
