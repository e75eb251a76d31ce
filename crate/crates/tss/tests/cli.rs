//! End-to-end tests of the `tss` binary: exit codes, report shapes, file
//! validation, and byte-stable output.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn tss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tss"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 output")
}

#[test]
fn solve_reports_the_fixture_minimum() {
    let graph = fixture("sample11.tss");
    let expr = fixture("sample11.cwe");
    let out = tss(&[
        "solve",
        graph.to_str().unwrap(),
        expr.to_str().unwrap(),
        "--reconstruct",
        "--json",
        "--stable",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(report["min_target_size"], 1);
    assert_eq!(report["method"], "dp");
    assert_eq!(report["target_set"].as_array().unwrap().len(), 1);
    assert_eq!(report["instance"]["n"], 11);
    assert_eq!(report["instance"]["m"], 22);
    assert_eq!(report["instance"]["t_max"], 2);
    assert_eq!(report["instance"]["width"], 3);
    assert_eq!(report["elapsed_ms"], 0);
}

#[test]
fn mismatched_expression_exits_2_and_names_an_edge() {
    let out = tss(&[
        "solve",
        fixture("sample11.tss").to_str().unwrap(),
        fixture("sample11_mismatch.cwe").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(
        err.contains("edge"),
        "diagnostic should cite an edge: {err}"
    );
}

#[test]
fn tiny_state_budget_exits_3() {
    let out = tss(&[
        "solve",
        fixture("sample11.tss").to_str().unwrap(),
        fixture("sample11.cwe").to_str().unwrap(),
        "--max-states",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("budget"));
}

#[test]
fn oracle_agrees_on_the_fixture() {
    let out = tss(&[
        "oracle",
        fixture("sample11.tss").to_str().unwrap(),
        "--method",
        "subsets",
        "--json",
        "--stable",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["min_target_size"], 1);
    assert_eq!(report["method"], "oracle-subsets");
    assert_eq!(report["instance"]["width"], serde_json::Value::Null);
}

#[test]
fn oracle_rejects_oversized_instances_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.tss");
    let mut text = String::from("p tss 12 0\n");
    for v in 1..=12 {
        text.push_str(&format!("n {v} 0\n"));
    }
    std::fs::write(&path, text).unwrap();
    let out = tss(&["oracle", path.to_str().unwrap(), "--method", "orderings"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("limit"));
}

#[test]
fn four_cycle_oracle_needs_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c4.tss");
    std::fs::write(
        &path,
        "p tss 4 4\nn 1 2\nn 2 2\nn 3 2\nn 4 2\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n",
    )
    .unwrap();
    let out = tss(&["oracle", path.to_str().unwrap(), "--json", "--stable"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["min_target_size"], 2);
}

#[test]
fn stable_json_is_byte_identical_across_runs() {
    let graph = fixture("sample11.tss");
    let expr = fixture("sample11.cwe");
    let args = [
        "solve",
        graph.to_str().unwrap(),
        expr.to_str().unwrap(),
        "--reconstruct",
        "--json",
        "--stable",
    ];
    let first = tss(&args);
    let second = tss(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    let oracle_args = [
        "oracle",
        graph.to_str().unwrap(),
        "--json",
        "--stable",
        "--method",
        "orderings",
    ];
    // 11 vertices exceed the ordering oracle limit; stability is checked on
    // the subsets method instead.
    let _ = oracle_args;
    let subset_args = ["oracle", graph.to_str().unwrap(), "--json", "--stable"];
    let a = tss(&subset_args);
    let b = tss(&subset_args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn expr_validate_and_normalize_round_trip() {
    let out = tss(&[
        "expr",
        "validate",
        fixture("sample11.cwe").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "irredundant");

    let dir = tempfile::tempdir().unwrap();
    let redundant = dir.path().join("red.cwe");
    std::fs::write(&redundant, "(eta a b (eta a b (u (v 1 a) (v 2 b))))").unwrap();
    let out = tss(&["expr", "validate", redundant.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("redundant join"));

    let out = tss(&["expr", "normalize", redundant.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "(eta a b (u (v 1 a) (v 2 b)))");
}

#[test]
fn expr_build_emits_solvable_families() {
    let dir = tempfile::tempdir().unwrap();
    let out = tss(&["expr", "build", "path", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let cwe_path = dir.path().join("p5.cwe");
    std::fs::write(&cwe_path, stdout(&out)).unwrap();

    // Evaluate it back to .tss and check it is the 5-path.
    let out = tss(&["expr", "eval", cwe_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let eval_text = stdout(&out);
    assert!(eval_text.contains("p tss 5 4"));
    for edge in ["e 1 2", "e 2 3", "e 3 4", "e 4 5"] {
        assert!(eval_text.contains(edge), "missing {edge} in:\n{eval_text}");
    }
}

#[test]
fn expr_eval_round_trips_builder_output() {
    let dir = tempfile::tempdir().unwrap();
    let built = tss(&["expr", "build", "biclique", "2", "2"]);
    let cwe_path = dir.path().join("b22.cwe");
    std::fs::write(&cwe_path, stdout(&built)).unwrap();
    let evaluated = tss(&["expr", "eval", cwe_path.to_str().unwrap()]);
    let tss_path = dir.path().join("b22.tss");
    std::fs::write(&tss_path, stdout(&evaluated)).unwrap();

    // The emitted graph solves against the emitted expression.
    let out = tss(&[
        "solve",
        tss_path.to_str().unwrap(),
        cwe_path.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["min_target_size"], 0);
}

#[test]
fn selftest_passes_and_scales_with_cases() {
    let out = tss(&["selftest", "--seed", "1", "--cases", "50"]);
    assert_eq!(out.status.code(), Some(0), "output: {}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("[pass] solver-vs-subset-oracle: 50 cases"));
    assert!(text.contains("selftest passed"));

    let out = tss(&["selftest", "--cases", "0"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn selftest_counterexamples_replay_through_solve_and_oracle() {
    // Corrupt the solver at the library level to harvest a counterexample,
    // then feed its dumped .tss/.cwe files through the real commands: both
    // run cleanly, agree with each other, and expose the corrupted value.
    let corrupted = |e: &tss::cwexpr::CwExpr, thr: &tss::graph::ThresholdMap| {
        tss::selftest::default_solver(e, thr).map(|k| k + 1)
    };
    let outcome = tss::selftest::run(1, 10, &corrupted);
    assert!(!outcome.passed());
    let cx = &outcome.failures[0];

    let dir = tempfile::tempdir().unwrap();
    let tss_path = dir.path().join("replay.tss");
    let cwe_path = dir.path().join("replay.cwe");
    std::fs::write(&tss_path, &cx.tss_text).unwrap();
    std::fs::write(&cwe_path, cx.cwe_text.as_ref().unwrap()).unwrap();

    let solve = tss(&[
        "solve",
        tss_path.to_str().unwrap(),
        cwe_path.to_str().unwrap(),
        "--json",
        "--stable",
    ]);
    assert_eq!(solve.status.code(), Some(0), "stderr: {}", stderr(&solve));
    let solve_report: serde_json::Value = serde_json::from_str(&stdout(&solve)).unwrap();

    let oracle = tss(&["oracle", tss_path.to_str().unwrap(), "--json", "--stable"]);
    assert_eq!(oracle.status.code(), Some(0), "stderr: {}", stderr(&oracle));
    let oracle_report: serde_json::Value = serde_json::from_str(&stdout(&oracle)).unwrap();

    let true_k = oracle_report["min_target_size"].as_u64().unwrap();
    assert_eq!(solve_report["min_target_size"].as_u64().unwrap(), true_k);
    // The dump's detail names the corrupted value, one above the truth.
    assert!(
        cx.detail.contains(&format!("Ok({})", true_k + 1)),
        "detail: {} (true k = {true_k})",
        cx.detail
    );
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad_tss = dir.path().join("bad.tss");
    std::fs::write(&bad_tss, "p tss 2 1\nn 1 0\ne 1 2\n").unwrap();
    let out = tss(&["oracle", bad_tss.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let bad_cwe = dir.path().join("bad.cwe");
    std::fs::write(&bad_cwe, "(eta a a (v 1 a))").unwrap();
    let out = tss(&["expr", "validate", bad_cwe.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("differ"));

    let out = tss(&[
        "solve",
        fixture("sample11.tss").to_str().unwrap(),
        "/nonexistent.cwe",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
