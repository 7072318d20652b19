use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

fn json_lines(text: &str) -> Vec<Value> {
    text.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn approx(v: &Value) -> f64 {
    v["approx"].as_f64().unwrap()
}

#[test]
fn star_leaf_loss_gives_four_root_two() {
    let text = ok(&[
        "analyze", "--family", "star", "--n", "6", "--lose", "1", "--format", "json",
    ]);
    let lines = json_lines(&text);
    assert_eq!(lines.len(), 1);
    let rec = &lines[0]["records"][0];
    assert_eq!(lines[0]["schema_version"], 1);
    assert_eq!(lines[0]["kind"], "loss_report");
    assert_eq!(rec["expectation"]["a"], "0/1");
    assert_eq!(rec["expectation"]["b"], "4/1");
    assert_eq!(rec["violates_full"], false);
    assert_eq!(rec["violates_induced"], false);
}

#[test]
fn two_centered_leaf_loss_violates_only_the_induced_bound() {
    let text = ok(&[
        "analyze",
        "--family",
        "two-centered-ghz",
        "--n",
        "12",
        "--lose-leaves-of-root",
        "0",
        "--count",
        "5",
        "--format",
        "json",
    ]);
    let report = &json_lines(&text)[0];
    let root1 = report["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["root"] == 1)
        .unwrap();
    assert_eq!(root1["expectation"]["a"], "0/1");
    assert_eq!(root1["expectation"]["b"], "11/1");
    assert_eq!(root1["violates_full"], false);
    assert_eq!(root1["violates_induced"], true);
}

#[test]
fn fixture_file_with_two_losses() {
    let path = fixture("two_roots.graph");
    let text = ok(&[
        "analyze",
        "--file",
        path.to_str().unwrap(),
        "--lose",
        "2,5",
        "--format",
        "json",
    ]);
    let report = &json_lines(&text)[0];
    let roots: Vec<u64> = report["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["root"].as_u64().unwrap())
        .collect();
    assert_eq!(roots, vec![0, 1]);
    let table = ok(&["analyze", "--file", path.to_str().unwrap(), "--lose", "2,5"]);
    assert!(table.contains("loss={2,5}"), "{table}");
}

#[test]
fn dense_center_sweep_flips_after_two_and_three_losses() {
    let text = ok(&[
        "sweep",
        "--family",
        "dense-center",
        "--n",
        "12",
        "--leaves-only",
        "--format",
        "json",
    ]);
    let lines = json_lines(&text);
    let rows: Vec<&Value> = lines.iter().filter(|l| l["kind"] == "tolerance_row").collect();
    assert_eq!(rows.len(), 7);
    let violating = |row: &Value, bound: &str| row[bound]["violating"].as_u64().unwrap();
    let full: Vec<u64> = rows.iter().map(|r| violating(r, "full")).collect();
    let induced: Vec<u64> = rows.iter().map(|r| violating(r, "induced")).collect();
    assert_eq!(full, vec![1, 6, 15, 0, 0, 0, 0]);
    assert_eq!(induced, vec![1, 6, 15, 20, 0, 0, 0]);
    let tol = lines.last().unwrap();
    assert_eq!(tol["kind"], "tolerance");
    assert_eq!(tol["k"], 3);

    let text = ok(&[
        "sweep",
        "--family",
        "dense-center",
        "--n",
        "12",
        "--leaves-only",
        "--bound",
        "full",
        "--format",
        "json",
    ]);
    assert_eq!(json_lines(&text).last().unwrap()["k"], 2);
}

#[test]
fn ring_and_star_tolerate_nothing() {
    for family in ["ring", "star"] {
        let text = ok(&["sweep", "--family", family, "--n", "6", "--format", "json"]);
        assert_eq!(json_lines(&text).last().unwrap()["k"], 0, "{family}");
    }
}

#[test]
fn critical_sets_are_listed() {
    let text = ok(&[
        "sweep",
        "--family",
        "star",
        "--n",
        "5",
        "--critical",
        "1",
        "--format",
        "json",
    ]);
    let line = &json_lines(&text)[0];
    assert_eq!(line["kind"], "critical_sets");
    assert_eq!(line["sets"].as_array().unwrap().len(), 5);
}

#[test]
fn verify_passes_on_random_and_family_graphs() {
    let text = ok(&[
        "verify",
        "--random",
        "20",
        "--n",
        "7",
        "--max-loss",
        "2",
        "--format",
        "json",
    ]);
    let line = &json_lines(&text)[0];
    assert_eq!(line["kind"], "verify_summary");
    assert_eq!(line["passed"], true);
    assert!(line["total_checked"].as_u64().unwrap() > 1000);

    let table = ok(&["verify", "--family", "dense-center", "--n", "12", "--loss-size", "3"]);
    assert!(table.contains("loss sets 220"), "{table}");
    assert!(table.contains("PASS"));

    let text = ok(&[
        "verify",
        "--random",
        "5",
        "--n",
        "6",
        "--replacement-invariance",
        "--format",
        "json",
    ]);
    let line = &json_lines(&text)[0];
    assert!(line["report"]["replacement"]["checked"].as_u64().unwrap() > 0);
}

#[test]
fn mixture_reports_margins_and_crossover() {
    let text = ok(&[
        "mixture",
        "--family",
        "dense-center",
        "--n",
        "12",
        "--leaves-only",
        "--p",
        "0,1",
        "--format",
        "json",
    ]);
    let lines = json_lines(&text);
    assert_eq!(lines.len(), 3);
    assert!((approx(&lines[0]["margin_full"]) - 4.970562748477143).abs() < 1e-12);
    let summary = &lines[2];
    assert_eq!(summary["kind"], "mixture_summary");
    assert_eq!(summary["crossover"], Value::Null);
    assert_eq!(summary["equal_margin_p"]["a"], "12/1");
    assert_eq!(summary["equal_margin_p"]["b"], "-6/1");
    assert_eq!(summary["hypothesis"], serde_json::json!([7]));
}

#[test]
fn mixture_with_a_distribution_file() {
    let dir = tempfile::tempdir().unwrap();
    let dist = dir.path().join("dist.txt");
    std::fs::write(&dist, "1/1 : 6\n").unwrap();
    let text = ok(&[
        "mixture",
        "--family",
        "dense-center",
        "--n",
        "12",
        "--dist",
        dist.to_str().unwrap(),
        "--hypothesis",
        "7",
        "--p",
        "1",
        "--format",
        "json",
    ]);
    let sample = &json_lines(&text)[0];
    assert_eq!(sample["full"]["a"], "5/1");
    assert_eq!(sample["full"]["b"], "5/1");
}

#[test]
fn family_commands() {
    let list = ok(&["family", "list"]);
    for name in ["ring", "star", "two-centered-ghz", "dense-center"] {
        assert!(list.contains(name));
    }
    assert_eq!(
        ok(&["family", "emit", "--family", "star", "--n", "3"]),
        "n=3\n0 1\n0 2\n"
    );
    let json: Value = serde_json::from_str(&ok(&["family", "emit", "--family", "ring", "--n", "4", "--json"])).unwrap();
    assert_eq!(json["n"], 4);
}

#[test]
fn json_output_is_deterministic() {
    let args = ["sweep", "--family", "dense-center", "--n", "10", "--format", "json"];
    let a = ok(&args);
    let b = ok(&args);
    assert_eq!(a, b);
    let mut seq = vec!["--sequential"];
    seq.extend_from_slice(&args);
    assert_eq!(ok(&seq), a);
    let args = [
        "verify", "--random", "10", "--n", "6", "--seed", "7", "--format", "json",
    ];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn table_decimals_match_json() {
    let args = ["analyze", "--family", "dense-center", "--n", "8", "--lose", "4"];
    let table = ok(&args);
    let mut json_args = args.to_vec();
    json_args.extend_from_slice(&["--format", "json"]);
    let report = &json_lines(&ok(&json_args))[0];
    for rec in report["records"].as_array().unwrap() {
        let shown = format!("({})", rec["expectation"]["approx"]);
        assert!(table.contains(&shown), "{shown} missing from\n{table}");
    }
}

#[test]
fn parse_errors_exit_one_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.graph");
    std::fs::write(&path, "n=3\n0 1\n1 x\n").unwrap();
    let out = run(&["analyze", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3, column 3"), "{err}");

    assert_eq!(run(&["analyze", "--family", "star"]).status.code(), Some(1));
    assert_eq!(
        run(&["analyze", "--family", "star", "--n", "4", "--lose", "9"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn budget_and_size_caps_exit_two() {
    let out = run(&["sweep", "--family", "star", "--n", "20", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("budget"));
    let out = run(&["verify", "--family", "ring", "--n", "16"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
