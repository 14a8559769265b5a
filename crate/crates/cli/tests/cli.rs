use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// (exit code, stdout, stderr)
fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("viewsel").chain(args.iter().copied());
    let code = viewsel_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?} failed: {err}");
    serde_json::from_str(&out).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {out}"))
}

#[test]
fn solve_r1_brute() {
    let r1 = fixture("r1.json");
    let v = json(&["solve", "--instance", p(&r1), "--solver", "brute"]);
    assert_eq!(v["selection"], serde_json::json!([2, 3]));
    assert_eq!((v["lambda"].as_u64(), v["mu"].as_u64(), v["tau"].as_u64()), (Some(11), Some(5), Some(1)));
    assert_eq!(v["feasible"], Value::Bool(true));

    let tight = json(&["solve", "--instance", p(&r1), "--solver", "dp", "--budget", "2"]);
    assert_eq!(tight["lambda"].as_u64(), Some(4));
}

#[test]
fn fptas_needs_epsilon() {
    let r1 = fixture("r1.json");
    let (code, out, err) = run(&["solve", "--instance", p(&r1), "--solver", "fptas"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert_eq!(err.lines().count(), 1);

    let v = json(&["solve", "--instance", p(&r1), "--solver", "fptas", "--epsilon", "0.25"]);
    assert!(v["lambda"].as_u64().unwrap() * 5 >= 11 * 4);
    assert_eq!(run(&["solve", "--instance", p(&r1), "--solver", "fptas", "--epsilon", "1.5"]).0, 2);
}

#[test]
fn input_errors_exit_2() {
    let r1 = fixture("r1.json");
    assert_eq!(run(&["solve", "--instance", p(&r1), "--solver", "brute", "--bogus"]).0, 2);
    assert_eq!(run(&["solve", "--instance", "/nonexistent.json", "--solver", "dp"]).0, 2);
    assert_eq!(run(&["eval", "--instance", p(&r1), "--selection", "2,x"]).0, 2);
    assert_eq!(run(&["eval", "--instance", p(&r1), "--selection", "9"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn brute_over_cap_is_a_resource_limit() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("big.json");
    json(&["gen", "--family", "random", "--n", "40", "--seed", "1", "--out", p(&inst)]);
    let (code, out, _) = run(&["solve", "--instance", p(&inst), "--solver", "brute"]);
    assert_eq!((code, out.as_str()), (3, ""));
}

#[test]
fn eval_of_solve_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for (family, seed) in [("random", 1), ("path", 2), ("star", 3), ("balanced-binary", 4)] {
        let inst = dir.path().join(format!("{family}.json"));
        json(&["gen", "--family", family, "--n", "12", "--seed", &seed.to_string(), "--out", p(&inst)]);
        let brute = json(&["solve", "--instance", p(&inst), "--solver", "brute"]);
        let dp = json(&["solve", "--instance", p(&inst), "--solver", "dp"]);
        assert_eq!(brute["lambda"], dp["lambda"]);
        for sol in [&brute, &dp] {
            let sel_file = dir.path().join("sel.json");
            std::fs::write(&sel_file, sol["selection"].to_string()).unwrap();
            let back = json(&["eval", "--instance", p(&inst), "--selection", p(&sel_file)]);
            assert_eq!(back["feasible"], Value::Bool(true));
            assert_eq!(back["lambda"], sol["lambda"]);
        }
    }
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    json(&["gen", "--family", "random", "--n", "20", "--seed", "5", "--budget", "30", "--out", p(&a)]);
    json(&["gen", "--family", "random", "--n", "20", "--seed", "5", "--budget", "30", "--out", p(&b)]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(run(&["gen", "--family", "tree", "--n", "3", "--seed", "0", "--out", p(&a)]).0, 2);
}

#[test]
fn ingest_bookstore_and_eval_overlap() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("books.json");
    let edges = dir.path().join("edges.csv");
    let v = json(&[
        "ingest",
        "--xml",
        p(&fixture("bookstore.xml")),
        "--workload",
        p(&fixture("bookstore_workload.json")),
        "--edges",
        p(&edges),
        "--out",
        p(&inst),
    ]);
    assert_eq!(v["nodes"].as_u64(), Some(14));
    assert_eq!(
        std::fs::read_to_string(&edges).unwrap(),
        std::fs::read_to_string(fixture("bookstore_edges.csv")).unwrap()
    );

    // 4 lies under 2, so it adds size but no saving.
    let both = json(&["eval", "--instance", p(&inst), "--selection", "2,4"]);
    let book = json(&["eval", "--instance", p(&inst), "--selection", "2"]);
    assert_eq!(both["lambda"], book["lambda"]);
    assert!(both["mu"].as_u64() > book["mu"].as_u64());
    assert_eq!(both["feasible"], Value::Bool(true));

    let (code, _, _) = run(&[
        "ingest",
        "--xml",
        p(&fixture("bookstore.xml")),
        "--workload",
        p(&fixture("bookstore_workload.json")),
        "--cost-model",
        "explicit",
        "--out",
        p(&inst),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn reduce_knapsack() {
    let dir = tempfile::tempdir().unwrap();
    let items = dir.path().join("items.json");
    let inst = dir.path().join("tree.json");
    std::fs::write(&items, "[[2,3],[3,4],[4,5]]").unwrap();
    json(&["reduce-knapsack", "--items", p(&items), "--capacity", "7", "--out", p(&inst)]);
    let v = json(&["solve", "--instance", p(&inst), "--solver", "dp"]);
    assert_eq!(v["lambda"].as_u64(), Some(5));

    std::fs::write(&items, r#"{"capacity": 100, "items": [[2,3],[3,4],[4,5]]}"#).unwrap();
    json(&["reduce-knapsack", "--items", p(&items), "--capacity", "9", "--out", p(&inst)]);
    let v = json(&["solve", "--instance", p(&inst), "--solver", "brute"]);
    assert_eq!(v["lambda"].as_u64(), Some(7));
}

#[test]
fn compare_formats() {
    let r1 = fixture("r1.json");
    let rows = json(&["compare", "--instance", p(&r1), "--epsilons", "0.05,0.5,1"]);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r["ratio"].as_f64().unwrap() >= 1.0));
    let (code, text, _) = run(&["compare", "--instance", p(&r1), "--epsilons", "0.5", "--format", "text"]);
    assert_eq!(code, 0);
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_viewsel");
    let r1 = fixture("r1.json");
    let ok = Command::new(bin).args(["solve", "--instance", p(&r1), "--solver", "dp"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["lambda"].as_u64(), Some(11));
    let bad = Command::new(bin).args(["solve", "--instance", p(&r1), "--solver", "fptas"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
}
