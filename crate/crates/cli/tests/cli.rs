use weaklaw::finrel::{FinRel, FinSet};
use weaklaw_cli::{parse_sizes, run_args, EXIT_BUDGET, EXIT_FAIL, EXIT_PARSE, EXIT_PASS};

fn run(args: &[&str]) -> weaklaw_cli::Outcome {
    run_args(std::iter::once("weaklaw").chain(args.iter().copied()))
}

#[test]
fn sizes() {
    assert_eq!(parse_sizes("2").unwrap(), vec![0, 1, 2]);
    assert_eq!(parse_sizes("1..3").unwrap(), vec![1, 2, 3]);
    assert_eq!(parse_sizes("0, 2").unwrap(), vec![0, 2]);
    assert!(parse_sizes("3..1").is_err());
    assert!(parse_sizes("x").is_err());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["check-monad", "powerset", "--size", "2"]).code, EXIT_PASS);
    assert_eq!(run(&["check-law", "pf-over-p", "--size", "2"]).code, EXIT_FAIL);
    assert_eq!(run(&["check-law", "pf-over-p", "--size", "2", "--weak"]).code, EXIT_PASS);
    assert_eq!(run(&["check-monad", "nonsense"]).code, EXIT_PARSE);
    assert_eq!(run(&["derive-law", "finite-powerset", "--weak", "--size", "2"]).code, EXIT_BUDGET);
    assert_eq!(run(&["frobnicate"]).code, EXIT_PARSE);
}

#[test]
fn failing_report_carries_a_witness() {
    let out = run(&["check-delta-algebra", "pf-over-p", "--lattice", "m3", "--json"]);
    assert_eq!(out.code, EXIT_FAIL);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["status"], "fail");
    assert!(out.stdout.contains("\"witness\""));
}

#[test]
fn dot_output() {
    let out = run(&["check-wc", "finite-powerset", "--component", "unit", "--dot"]);
    assert_eq!(out.code, EXIT_FAIL);
    assert!(out.stdout.starts_with("digraph report {"));
    assert!(out.stdout.contains("witness"));
}

#[test]
fn lift_relation_reads_json() {
    let r = FinRel::from_mask(&FinSet::standard(2), &FinSet::standard(2), 0b0110);
    let path = std::env::temp_dir().join(format!("weaklaw-rel-{}.json", std::process::id()));
    std::fs::write(&path, serde_json::to_string(&r).unwrap()).unwrap();
    let out = run(&["lift-relation", "finite-powerset", "--input", path.to_str().unwrap(), "--json"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.code, EXIT_PASS, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let lifted: FinRel = serde_json::from_value(v["facts"]["relation"].clone()).unwrap();
    assert_eq!(lifted, weaklaw::barr::egli_milner(&r).unwrap());
}

#[test]
fn catalog_round_trips() {
    let out = run(&["catalog", "--json"]);
    assert_eq!(out.code, EXIT_PASS);
    let c: weaklaw::catalog::Catalog = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(c.entries.len(), weaklaw::catalog::catalog().entries.len());
}
