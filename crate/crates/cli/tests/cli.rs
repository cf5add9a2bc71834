//! Interface tests: exit codes, pinned wire formats, determinism.

use std::fs;
use std::process::Command;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shiftperc"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let output = binary().args(args).output().expect("binary runs");
    (
        output.status.code().unwrap_or(-1),
        String::from_utf8(output.stdout).unwrap(),
        String::from_utf8(output.stderr).unwrap(),
    )
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("shiftperc-test-{}-{name}", std::process::id()));
    fs::write(&path, contents).unwrap();
    path
}

#[test]
fn help_and_usage_exit_codes() {
    let (code, stdout, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("Exit codes"));
    let (code, _, _) = run(&[]);
    assert_eq!(code, 2, "missing subcommand is a usage error");
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2, "unknown subcommand is a usage error");
    for sub in [
        "thresholds",
        "relations",
        "bounds",
        "oracle",
        "percolate",
        "debruijn",
        "reproduce",
    ] {
        let (code, stdout, _) = run(&[sub, "--help"]);
        assert_eq!(code, 0, "{sub} --help");
        assert!(
            stdout.contains("Exit codes"),
            "{sub} help must list exit codes"
        );
    }
    for leaf in [
        ["relations", "enumerate"],
        ["bounds", "finite-path"],
        ["oracle", "z-measure"],
        ["percolate", "sweep"],
        ["debruijn", "alpha"],
    ] {
        let (code, stdout, _) = run(&[leaf[0], leaf[1], "--help"]);
        assert_eq!(code, 0);
        assert!(
            stdout.contains("Exit codes"),
            "{leaf:?} help must list exit codes"
        );
    }
}

#[test]
fn validation_and_budget_exit_codes() {
    let (code, _, stderr) = run(&["thresholds", "--shift-k", "0"]);
    assert_eq!(code, 2, "{stderr}");
    let (code, _, stderr) = run(&["relations", "enumerate", "-k", "7"]);
    assert_eq!(code, 3, "{stderr}");
    let (code, _, stderr) = run(&[
        "debruijn", "alpha", "-d", "2", "-k", "8", "--method", "subset",
    ]);
    assert_eq!(code, 3, "{stderr}");
    let (code, _, stderr) = run(&["bounds", "finite-path", "-p", "2", "-k", "1"]);
    assert_eq!(code, 2, "{stderr}");
    let (code, _, stderr) = run(&[
        "percolate",
        "sweep",
        "--shift-k",
        "2",
        "-n",
        "10",
        "-p",
        "2",
        "--lambdas",
        "nope",
    ]);
    assert_eq!(code, 2, "{stderr}");
}

#[test]
fn pinned_json_shapes() {
    let (code, stdout, _) = run(&[
        "bounds",
        "finite-path",
        "-p",
        "2",
        "-k",
        "6",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "{\"lo\":{\"num\":1,\"den\":3},\"hi\":{\"num\":1,\"den\":2}}\n"
    );

    let (code, stdout, _) = run(&[
        "debruijn", "alpha", "-d", "2", "-k", "3", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(json["d"], 2);
    assert_eq!(json["k"], 3);
    assert_eq!(json["alpha"], 2);
    assert_eq!(json["method"], "subset");
    assert!(json["witness"].as_array().unwrap().len() == 1);
    assert!(
        stdout.starts_with("{\"d\":2,\"k\":3,\"alpha\":2,"),
        "field order pinned: {stdout}"
    );

    let (code, stdout, _) = run(&["thresholds", "--shift-k", "2", "--format", "json"]);
    assert_eq!(code, 0);
    assert!(
        stdout.contains("{\"kind\":\"vertex\",\"num\":1,\"den\":2,\"w\":2}"),
        "threshold report shape: {stdout}"
    );

    let (code, stdout, _) = run(&["oracle", "z-measure", "--shift-w", "2", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "{\"num\":1,\"den\":2}\n");
}

#[test]
fn relation_file_round_trip() {
    let rel = temp_file("rel.json", r#"{"domain":[1,2,3],"images":[2,3,4]}"#);
    let (code, stdout, _) = run(&["relations", "w", "--spec", rel.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("w (full map):  4"));
    assert!(stdout.contains("w (core):      3"));
    assert!(stdout.contains("vertex threshold: 2/3"));
    assert!(stdout.contains("edge threshold:   3/4"));
    let bad = temp_file("bad.json", r#"{"domain":[1,2],"images":[2,2]}"#);
    let (code, _, stderr) = run(&["relations", "w", "--spec", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("duplicate image"), "{stderr}");
    fs::remove_file(rel).ok();
    fs::remove_file(bad).ok();
}

#[test]
fn oracle_files_and_explicit_tables() {
    let rel = temp_file("rel2.json", r#"{"domain":[1,2],"images":[2,3]}"#);
    let coloring = temp_file(
        "coloring.json",
        r#"{"kind":"table","arity":2,"table":{"01":1,"10":0}}"#,
    );
    let (code, stdout, _) = run(&[
        "oracle",
        "z-measure",
        "--spec",
        rel.to_str().unwrap(),
        "--coloring",
        coloring.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code, 0, "{stdout}");
    let json: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    // g(ascending) = 1 beats g(descending) = 0 exactly when the middle
    // coordinate is the maximum: 2 of 6 permutations.
    assert_eq!(json["num"], 2);
    assert_eq!(json["den"], 6);
    fs::remove_file(rel).ok();
    fs::remove_file(coloring).ok();
}

#[test]
fn enumerate_pinned_set_format() {
    let (code, stdout, _) = run(&["relations", "enumerate", "-k", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(json["k"], 2);
    let relations = json["relations"].as_array().unwrap();
    assert_eq!(relations.len(), 4);
    for rel in relations {
        assert!(rel["domain"].is_array() && rel["images"].is_array());
    }
}

#[test]
fn sweep_is_byte_identical_and_has_pinned_columns() {
    let args = [
        "percolate",
        "sweep",
        "--shift-k",
        "2",
        "-n",
        "20",
        "-p",
        "2",
        "--lambdas",
        "0.2,1/2,0.8",
        "--replicas",
        "200",
        "--seed",
        "7",
        "--format",
        "csv",
    ];
    let (code_a, stdout_a, _) = run(&args);
    let (code_b, stdout_b, _) = run(&args);
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_eq!(
        stdout_a, stdout_b,
        "same argv and seed must be byte-identical"
    );
    // Worker count must not change exact outputs.
    let mut single = args.to_vec();
    single.extend(["--threads", "1"]);
    let (code_c, stdout_c, _) = run(&single);
    assert_eq!(code_c, 0);
    assert_eq!(stdout_a, stdout_c, "thread count must not affect results");
    let mut lines = stdout_a.lines();
    assert_eq!(lines.next().unwrap(), "# seed: 7");
    assert_eq!(
        lines.next().unwrap(),
        "lambda,replicas,freq_path_ge_p,ci_halfwidth,mean_inclusion,corollary_bound"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    // Exact columns are fractions, Monte Carlo columns decimals.
    assert!(rows[0].starts_with("1/5,200,"), "{}", rows[0]);
    assert!(rows[1].starts_with("1/2,200,"), "{}", rows[1]);
}

#[test]
fn sweep_accepts_relation_set_files() {
    let set = temp_file(
        "set.json",
        r#"{"k":2,"relations":[{"domain":[1,2],"images":[2,3]},{"domain":[1,2],"images":[3,4]}]}"#,
    );
    let (code, stdout, _) = run(&[
        "percolate",
        "sweep",
        "--spec",
        set.to_str().unwrap(),
        "-n",
        "8",
        "-p",
        "1",
        "--lambdas",
        "0,1",
        "--replicas",
        "20",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.lines().count() >= 4);
    fs::remove_file(set).ok();
}

#[test]
fn extremal_reports_structural_guarantee() {
    let (code, stdout, _) = run(&[
        "percolate",
        "extremal",
        "--shift-k",
        "3",
        "-n",
        "12",
        "-p",
        "2",
        "--replicas",
        "50",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(json["length_p_violations"], 0);
    assert_eq!(json["seed"], 1729, "default seed is printed");
}

#[test]
fn table_outputs_render_exact_values_as_fractions() {
    let (code, stdout, _) = run(&["bounds", "finite-path", "-p", "2", "-k", "5"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("2/5"), "{stdout}");
    assert!(
        !stdout.contains("0.4"),
        "no decimals for exact values: {stdout}"
    );
    let (code, stdout, _) = run(&["debruijn", "ratios", "-k", "3", "--d-max", "3"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("1/3"), "{stdout}");
}

#[test]
fn search_beyond_budget_is_flagged_heuristic() {
    let (code, stdout, _) = run(&["oracle", "search", "-k", "5", "-p", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("heuristic best-found"), "{stdout}");
    let (code, stdout, _) = run(&["oracle", "search", "-k", "5", "-p", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(json["exhaustive"], false);
}

#[test]
fn reproduce_tiny_budget_skips_and_succeeds() {
    let (code, stdout, _) = run(&["reproduce", "--budget", "tiny", "--format", "json"]);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(json["failed"], 0);
    assert_eq!(json["skipped"], 3);
    assert_eq!(json["passed"], 7);
    assert_eq!(json["budget"], "tiny");
    // The environment variable sets the default budget.
    let output = binary()
        .args(["reproduce", "--format", "json"])
        .env("SHIFTPERC_BUDGET", "tiny")
        .output()
        .unwrap();
    assert!(output.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&String::from_utf8(output.stdout).unwrap()).unwrap();
    assert_eq!(json["budget"], "tiny");
    let (code, _, stderr) = run(&["reproduce", "--budget", "enormous"]);
    assert_eq!(code, 2, "{stderr}");
}

#[test]
fn out_flag_writes_files() {
    let path = std::env::temp_dir().join(format!("shiftperc-out-{}.json", std::process::id()));
    let (code, stdout, _) = run(&[
        "bounds",
        "finite-path",
        "-p",
        "2",
        "-k",
        "6",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        "{\"lo\":{\"num\":1,\"den\":3},\"hi\":{\"num\":1,\"den\":2}}\n"
    );
    fs::remove_file(path).ok();
}
