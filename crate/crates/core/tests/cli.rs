mod common;

use std::process::Command;

use avgcut::cli::{run, EXIT_INPUT, EXIT_LIMIT, EXIT_OK};
use avgcut::report::{parse_report, report_field};
use common::data_path;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("avgcut").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn without_elapsed(report: &str) -> String {
    report.lines().filter(|l| !l.starts_with("elapsed_ms=")).collect::<Vec<_>>().join("\n")
}

fn example() -> String {
    data_path("example.edges").display().to_string()
}

#[test]
fn cut_on_example() {
    let (code, out, _) = invoke(&["cut", "--objective", "max", "--format", "edgelist", "--input", &example()]);
    assert_eq!(code, EXIT_OK);
    let fields = parse_report(&out);
    assert_eq!(report_field(&fields, "command"), Some("cut"));
    assert_eq!(report_field(&fields, "average"), Some("3"));
    assert_eq!(report_field(&fields, "average_decimal"), Some("3"));
    assert_eq!(report_field(&fields, "size"), Some("13"));
    assert_eq!(report_field(&fields, "total"), Some("39"));
    assert_eq!(fields.iter().filter(|(k, _)| k == "cut_edge").count(), 13);
    assert!(report_field(&fields, "input_digest").unwrap().starts_with("sha256:"));
}

#[test]
fn trace_lists_contractions() {
    let (code, out, _) = invoke(&["cut", "--input", &example(), "--trace"]);
    assert_eq!(code, EXIT_OK);
    let fields = parse_report(&out);
    let count: usize = report_field(&fields, "contraction_count").unwrap().parse().unwrap();
    let steps: Vec<&str> = fields.iter().filter(|(k, _)| k == "contraction").map(|(_, v)| v.as_str()).collect();
    assert_eq!(steps.len(), count);
    assert_eq!(steps[0], "1\tv0\tb\tlambda=7/2\talpha0=13/5");
    assert!(steps.last().unwrap().ends_with("alpha0=3"));
}

#[test]
fn oracle_and_cut_agree() {
    let small = data_path("small.nwk").display().to_string();
    for obj in ["max", "min"] {
        let (c1, cut, _) = invoke(&["cut", "--objective", obj, "--format", "newick", "--input", &small]);
        let (c2, oracle, _) = invoke(&["oracle", "--objective", obj, "--format", "newick", "--input", &small, "--limit", "1000"]);
        assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
        let (a, b) = (parse_report(&cut), parse_report(&oracle));
        assert_eq!(report_field(&a, "average"), report_field(&b, "average"));
        assert_eq!(report_field(&b, "cuts_enumerated"), Some("4"));
    }
}

#[test]
fn count_on_example() {
    let (code, out, _) = invoke(&["count", "--input", &example()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(report_field(&parse_report(&out), "count"), Some("729"));
}

#[test]
fn oracle_limit_exit_code() {
    let (code, out, err) = invoke(&["oracle", "--input", &example(), "--limit", "728"]);
    assert_eq!(code, EXIT_LIMIT);
    assert!(out.is_empty());
    assert!(err.contains("729"), "{err}");
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.edges");
    std::fs::write(&bad, "r a 1\nr b -2\n").unwrap();
    let (code, _, err) = invoke(&["cut", "--input", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line 2"), "{err}");

    let (code, _, _) = invoke(&["cut", "--input", dir.path().join("missing").to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = invoke(&["cut", "--objective", "sideways", "--input", &example()]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = invoke(&["frobnicate"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn zero_weights_warn() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.edges");
    std::fs::write(&path, "r a 0\nr b 1\n").unwrap();
    let (code, out, err) = invoke(&["cut", "--input", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("warning: edge r -> a has zero weight"));
    assert_eq!(report_field(&parse_report(&out), "average"), Some("1/2"));
}

#[test]
fn cluster_two_scale() {
    let csv = data_path("two_scale.csv").display().to_string();
    let (code, out, _) = invoke(&["cluster", "--linkage", &csv, "--objective", "max", "--scheme", "gap"]);
    assert_eq!(code, EXIT_OK);
    let fields = parse_report(&out);
    assert_eq!(report_field(&fields, "weight_scheme"), Some("gap"));
    let communities: Vec<&str> = fields.iter().filter(|(k, _)| k == "community").map(|(_, v)| v.as_str()).collect();
    assert_eq!(communities, vec!["0 1 2", "3 4 5", "6 7 8"]);
    assert_eq!(report_field(&fields, "average"), Some("9"));
}

#[test]
fn repeated_runs_are_identical() {
    let (_, a, _) = invoke(&["cut", "--input", &example(), "--trace"]);
    let (_, b, _) = invoke(&["cut", "--input", &example(), "--trace"]);
    assert_eq!(without_elapsed(&a), without_elapsed(&b));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_avgcut");
    let ok = Command::new(bin).args(["count", "--input", &example()]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("count=729"));
    let limit = Command::new(bin).args(["oracle", "--input", &example(), "--limit", "10"]).output().unwrap();
    assert_eq!(limit.status.code(), Some(2));
    let bad = Command::new(bin).args(["cut"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
