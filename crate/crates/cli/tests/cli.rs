//! End-to-end tests of the `oddcycle` binary: exit codes, format surfaces,
//! and file round trips.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oddcycle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn demo_prints_the_headline_numbers() {
    let out = run(&["demo"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1/9"));
    assert!(text.contains("0.111111"));
    assert!(text.contains("= 1.000000"), "condition sums print as 1.000000");
    assert!(text.contains("2.236068"));
}

#[test]
fn demo_json_is_machine_readable() {
    let out = run(&["demo", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["nchv_bound"], 2.0);
    assert_eq!(doc["nchv_implication"], true);
    let hardy = doc["hardy_prob"].as_f64().expect("number");
    assert!((hardy - 1.0 / 9.0).abs() < 1e-11);
}

#[test]
fn bounds_text_csv_json_agree() {
    let text = stdout(&run(&["bounds", "--n", "5", "--n", "7"]));
    assert!(text.contains("2.236068"));
    assert!(text.contains("3.317667"));

    let csv = stdout(&run(&["bounds", "--n", "5", "--n", "7", "--format", "csv"]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,nchv_bound,quantum_bound,hardy_max_bound"));
    let row5 = lines.next().expect("row for n=5");
    assert!(row5.starts_with("5,2,2.2360679775,"));

    let json = stdout(&run(&["bounds", "--n", "5", "--n", "7", "--format", "json"]));
    let doc: serde_json::Value = serde_json::from_str(&json).expect("valid json");
    assert_eq!(doc[0]["nchv_bound"], 2);
    assert_eq!(doc[1]["n"], 7);
    let q5 = doc[0]["quantum_bound"].as_f64().expect("number");
    assert!((q5 - 5f64.sqrt()).abs() < 1e-10, "12 significant digits kept");
}

#[test]
fn bounds_large_n_uses_the_closed_form() {
    let text = stdout(&run(&["bounds", "--n", "10001"]));
    assert!(text.contains("closed form"));
    assert!(text.contains("5000"));
}

#[test]
fn family_roundtrip_through_check() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("fam3.json");
    let out = run(&["family", "--k", "3", "--out", path.to_str().expect("utf8 path")]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("n = 13 boxes"));
    assert!(path.exists());

    let check = run(&["check", "--scenario", path.to_str().expect("utf8 path")]);
    assert!(check.status.success());
    assert!(stdout(&check).contains("all conditions satisfied: yes"));
}

#[test]
fn check_json_reports_condition_sums() {
    let out = run(&["check", "--pentagon", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["valid"], true);
    assert_eq!(doc["all_satisfied"], true);
    assert_eq!(doc["condition_sums"].as_array().expect("array").len(), 2);
}

#[test]
fn graph_dot_lists_sorted_edges() {
    let out = run(&["graph", "--pentagon"]);
    assert!(out.status.success());
    let dot = stdout(&out);
    assert!(dot.starts_with("graph orthogonality {"));
    let edges: Vec<&str> = dot.lines().filter(|l| l.contains("--")).collect();
    assert_eq!(edges.len(), 5);
    let mut sorted = edges.clone();
    sorted.sort_unstable();
    assert_eq!(edges, sorted, "edge lines are lexicographically sorted");
}

#[test]
fn ks_block_has_eleven_edges() {
    let text = stdout(&run(&["ks-block"]));
    assert!(text.contains("orthogonality edges (11):"));
    assert!(text.contains("eta -- v6"));
    assert!(text.contains("eta -- v7"));

    let json = stdout(&run(&["graph", "--ks-block", "--format", "json"]));
    let doc: serde_json::Value = serde_json::from_str(&json).expect("valid json");
    assert_eq!(doc["edges"].as_array().expect("array").len(), 11);
}

#[test]
fn simulate_never_sees_the_forbidden_outcome() {
    let out = run(&["simulate", "--pentagon", "--shots", "2000", "--seed", "11"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("(1,1) outcomes observed: 0"));
}

#[test]
fn optimize_writes_a_loadable_scenario() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("best.json");
    let out = run(&[
        "optimize",
        "--n",
        "5",
        "--starts",
        "4",
        "--out",
        path.to_str().expect("utf8 path"),
    ]);
    assert!(out.status.success());
    let check = run(&["check", "--scenario", path.to_str().expect("utf8 path")]);
    assert!(check.status.success());
    assert!(stdout(&check).contains("all conditions satisfied: yes"));
}

#[test]
fn out_flag_redirects_reports() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("bounds.csv");
    let out = run(&[
        "bounds",
        "--n",
        "5",
        "--format",
        "csv",
        "--out",
        path.to_str().expect("utf8 path"),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty(), "report went to the file");
    let content = std::fs::read_to_string(&path).expect("file written");
    assert!(content.starts_with("n,nchv_bound,"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["demo", "--format", "csv"][..],
        &["check"][..],
        &["bounds", "--n", "6"][..],
        &["bounds", "--n", "4"][..],
        &["graph", "--pentagon", "--format", "csv"][..],
        &["simulate", "--pentagon", "--shots", "0"][..],
        &["check", "--pentagon", "--family", "2"][..],
        &["graph", "--pentagon", "--tol", "0.5"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}: {}", stderr(&out));
    }
}

#[test]
fn unreadable_input_exits_2() {
    let out = run(&["check", "--scenario", "/definitely/not/there.json"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("junk.json");
    std::fs::write(&path, "not json at all").expect("write");
    let out = run(&["check", "--scenario", path.to_str().expect("utf8 path")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn semantic_failures_exit_1() {
    let out = run(&["check", "--family", "1"]);
    assert_eq!(out.status.code(), Some(1), "degenerate family");

    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("broken.json");
    std::fs::write(
        &path,
        r#"{"n":5,"state":[0.0,0.0,1.0],
           "vectors":[[1.0,0.0,0.0],[0.0,1.0,0.0],[1.0,0.0,0.0],[0.0,1.0,0.0],[1.0,0.0,0.0]],
           "tolerance":1e-10}"#,
    )
    .expect("write");
    let out = run(&["check", "--scenario", path.to_str().expect("utf8 path")]);
    assert_eq!(out.status.code(), Some(1), "orthogonality violation");
    assert!(stdout(&out).contains("validation: FAILED"));
}

#[test]
fn family_report_matches_closed_form() {
    let out = run(&["family", "--k", "2", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let born = doc["hardy_prob"].as_f64().expect("number");
    let closed = doc["hardy_prob_closed_form"].as_f64().expect("number");
    assert_eq!(born, closed, "both rounded to 12 significant digits");
    assert!((born - 9.0 / 41.0).abs() < 1e-11);
}
