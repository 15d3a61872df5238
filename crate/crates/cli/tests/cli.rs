use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use alwabp_cli::{run, EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("alwabp").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn binary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alwabp")).args(args).output().unwrap()
}

fn fig1() -> String {
    fixture("fig1.alwabp").display().to_string()
}

#[test]
fn solve_reports_optimum() {
    let (code, out, _) = call(&["solve", &fig1(), "--seed", "42"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "value 6"));
    assert!(out.lines().any(|l| l == "status optimal"));
    assert!(out.lines().any(|l| l == "config.seed 42"));
}

#[test]
fn bounds_report_lines() {
    let (code, out, _) = call(&["bounds", &fig1()]);
    assert_eq!(code, EXIT_OK);
    for line in ["LC1 5", "LC2 5", "LC3 5"] {
        assert!(out.lines().any(|l| l == line), "{line}");
    }
}

#[test]
fn export_writes_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.lp");
    let out = binary(&["export", &fig1(), "--model", "m3", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("\\ alwabp m3 6 3\n"));
    alwabp_core::export::parse_lp(&text).unwrap();
}

#[test]
fn json_report_schema() {
    let (code, out, _) = call(&["solve", &fig1(), "--json", "--no-timings"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["instance"]["tasks"], 6);
    assert_eq!(v["instance"]["workers"], 3);
    assert_eq!(v["result"]["value"], 6);
    assert_eq!(v["result"]["status"], "optimal");
    assert!(v["result"]["nodes"].is_u64());
    assert!(v["result"].get("elapsed_s").is_none());
    assert_eq!(v["config"]["seed"], 42);
    assert_eq!(v["config"]["heuristic"]["width"], 125);
    assert_eq!(v["bounds"][0]["name"], "LC1");
    assert_eq!(v["solution"]["worker_order"].as_array().unwrap().len(), 3);
    assert_eq!(v["solution"]["assignment"].as_array().unwrap().len(), 6);
}

#[test]
fn timings_only_when_asked() {
    let (_, with, _) = call(&["solve", &fig1()]);
    let (_, without, _) = call(&["solve", &fig1(), "--no-timings"]);
    assert!(with.contains("\nelapsed_s "));
    assert!(!without.contains("elapsed"));
    assert!(!without.contains("\ntime "));
}

#[test]
fn exit_codes() {
    let (code, _, err) = call(&["solve", &fig1(), "--bogus"]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(err.lines().count(), 1);

    let (code, _, err) = call(&["solve", "/nonexistent/x.alwabp"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.starts_with("error: cannot read"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.alwabp");
    std::fs::write(&bad, "alwabp 1\ntasks x\n").unwrap();
    let (code, _, err) = call(&["bounds", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(err.lines().count(), 1);

    // t1 -> t2 -> t3 where only worker 1 runs t1 and t3 and only worker 2 runs t2
    let infeasible = dir.path().join("infeasible.alwabp");
    std::fs::write(
        &infeasible,
        "alwabp 1\ntasks 3\nworkers 2\ntimes\n1 inf\ninf 1\n1 inf\nprecedences\n1 2\n2 3\nend\n",
    )
    .unwrap();
    let path = infeasible.to_str().unwrap();
    let (code, out, _) = call(&["solve", path]);
    assert_eq!(code, EXIT_INFEASIBLE);
    assert!(out.lines().any(|l| l == "status infeasible"));
    assert_eq!(call(&["oracle", path]).0, EXIT_INFEASIBLE);

    let out = binary(&["solve", path]);
    assert_eq!(out.status.code(), Some(EXIT_INFEASIBLE));
    assert_eq!(binary(&["--help"]).status.code(), Some(EXIT_OK));
}

#[test]
fn heuristic_and_oracle_agree_on_fig1() {
    let (code, out, _) = call(&["heur", &fig1(), "--t-min", "0", "--verbose", "--no-timings"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "value 6"));
    assert!(out.lines().any(|l| l.starts_with("log lower_bound ")));
    let (code, out, _) = call(&["oracle", &fig1()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "value 6"));
}

#[test]
fn generator_is_seeded() {
    let a = call(&[
        "gen",
        &fig1(),
        "--var",
        "high",
        "--inf",
        "0.2",
        "--workers",
        "4",
        "--seed",
        "9",
    ]);
    let b = call(&[
        "gen",
        &fig1(),
        "--var",
        "high",
        "--inf",
        "0.2",
        "--workers",
        "4",
        "--seed",
        "9",
    ]);
    let c = call(&[
        "gen",
        &fig1(),
        "--var",
        "high",
        "--inf",
        "0.2",
        "--workers",
        "4",
        "--seed",
        "10",
    ]);
    assert_eq!(a.0, EXIT_OK);
    assert_eq!(a.1, b.1);
    assert_ne!(a.1, c.1);
    let inst = alwabp_core::parse_instance(&a.1).unwrap();
    assert_eq!(inst.n_workers(), 4);
    let infeasible = inst.times().iter().filter(|p| p.is_none()).count();
    // round(0.2 * 24)
    assert_eq!(infeasible, 5);
}

#[test]
fn solve_output_is_reproducible() {
    let a = binary(&["solve", &fig1(), "--seed", "42", "--no-timings"]);
    let b = binary(&["solve", &fig1(), "--seed", "42", "--no-timings"]);
    assert_eq!(a.stdout, b.stdout);
}
