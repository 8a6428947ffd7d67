use std::path::{Path, PathBuf};

use clusterkit::cli::run;
use serde_json::Value;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Outcome {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("clusterkit").chain(args.iter().copied()), &mut out, &mut err);
    Outcome { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn explore_a2_writes_pentagon() {
    let dir = tempfile::tempdir().unwrap();
    let a2 = file(dir.path(), "a2.json", r#"{"n": 2, "arrows": [[1, 2, 1]]}"#);
    let out = dir.path().join("graph.json");
    let r = cli(&["explore", "--quiver", a2.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let g = json(&out);
    assert_eq!(g["seeds"].as_array().unwrap().len(), 5);
    assert_eq!(g["variables"].as_array().unwrap().len(), 5);
    assert_eq!(g["edges"].as_array().unwrap().len(), 5);
    assert_eq!(g["truncated"], false);
    assert!(r.stdout.starts_with("5 seeds, 5 cluster variables, 5 edges"));

    let dot = dir.path().join("graph.dot");
    assert_eq!(cli(&["explore", "--quiver", a2.to_str().unwrap(), "--out", dot.to_str().unwrap()]).code, 0);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("graph exchange {"));
    assert_eq!(text.matches(" -- ").count(), 5);
}

#[test]
fn explore_kronecker_truncates() {
    let dir = tempfile::tempdir().unwrap();
    let k = file(dir.path(), "kronecker.json", r#"{"n": 2, "arrows": [[1, 2, 2]]}"#);
    let r = cli(&["explore", "--quiver", k.to_str().unwrap(), "--max-seeds", "10", "--json"]);
    assert_eq!(r.code, 0);
    let g: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(g["truncated"], true);
    assert!(g["seeds"].as_array().unwrap().len() <= 10);
}

#[test]
fn verify_disk6_file() {
    let dir = tempfile::tempdir().unwrap();
    let disk = file(dir.path(), "disk6.json", r#"{"surface": {"kind": "disk", "m": 6}}"#);
    let out = dir.path().join("report.json");
    let r = cli(&["verify", "--surface", disk.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let report = json(&out);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "pass"), "{report}");
    for name in ["clusters_maximal", "incompatible_products", "skein_identities", "exchange_graph_reconstruction"] {
        assert!(checks.iter().any(|c| c["name"] == name), "missing {name}");
    }
}

#[test]
fn verify_infinite_type_is_skipped_not_failed() {
    let r = cli(&["verify", "--preset", "annulus11", "--json"]);
    assert_eq!(r.code, 0);
    let report: Value = serde_json::from_str(&r.stdout).unwrap();
    let uni = report["checks"].as_array().unwrap().iter().find(|c| c["name"] == "unistructural_finite").unwrap();
    assert_eq!(uni["status"], "skipped");
}

#[test]
fn verify_disjoint_union() {
    let dir = tempfile::tempdir().unwrap();
    let q = file(dir.path(), "a1a2.json", r#"{"n": 3, "arrows": [[2, 3, 1]]}"#);
    let r = cli(&["verify", "--quiver", q.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("union_clusters"));
}

#[test]
fn basis_expansion() {
    let r = cli(&["basis", "--preset", "hexagon", "--expand", "1-3", "2-6", "--json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let x: Value = serde_json::from_str(&r.stdout).unwrap();
    let mut labels: Vec<&str> = x["terms"].as_array().unwrap().iter().map(|t| t["label"].as_str().unwrap()).collect();
    labels.sort();
    assert_eq!(labels, ["1", "3-6"]);

    let r = cli(&["basis", "--preset", "pentagon"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.lines().count(), 16);
}

#[test]
fn mutate_save_and_load() {
    let dir = tempfile::tempdir().unwrap();
    let snap = dir.path().join("session.json");
    let r = cli(&["mutate", "--preset", "A2", "--sequence", "1", "--save", snap.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("x1 = "));
    let saved = json(&snap);
    assert_eq!(saved["history"].as_array().unwrap().len(), 1);

    // one more mutation at 1 undoes the first
    let r = cli(&["mutate", "--load", snap.to_str().unwrap(), "--sequence", "1", "--json"]);
    assert_eq!(r.code, 0);
    let state: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(state["cluster"], serde_json::json!(["x1", "x2"]));
    assert_eq!(state["history"].as_array().unwrap().len(), 2);
}

#[test]
fn mutate_triangulation_reports_arcs() {
    let r = cli(&["mutate", "--preset", "hexagon", "--sequence", "2"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.lines().all(|l| l.contains('[')), "{}", r.stdout);
}

#[test]
fn render_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("hex.svg");
    assert_eq!(cli(&["render", "--preset", "hexagon", "--out", out.to_str().unwrap()]).code, 0);
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    let r = cli(&["render", "--preset", "markov"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("<line"));
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = file(dir.path(), "bad.json", "{not json");
    assert_eq!(cli(&["explore", "--quiver", bad.to_str().unwrap()]).code, 2);
    let skew = file(dir.path(), "skew.json", r#"{"n": 2, "arrows": [[1, 3, 1]]}"#);
    assert_eq!(cli(&["explore", "--quiver", skew.to_str().unwrap()]).code, 2);
    assert_eq!(cli(&["explore", "--quiver", "/nonexistent/q.json"]).code, 2);
    assert_eq!(cli(&["explore"]).code, 2);
    assert_eq!(cli(&["frobnicate"]).code, 2);
    let r = cli(&["mutate", "--preset", "A2", "--sequence", "5"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("out of range"));
}

#[test]
fn serve_on_busy_port_exits_2() {
    let taken = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = taken.local_addr().unwrap().port().to_string();
    let r = cli(&["serve", "--preset", "A2", "--port", &port]);
    assert_eq!(r.code, 2);
}
