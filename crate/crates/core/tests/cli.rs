use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn matrep(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matrep"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn report(args: &[&str], dir: &Path) -> Value {
    let mut full = args.to_vec();
    full.extend(["--report", "-"]);
    let o = matrep(&full, dir);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn enumerate_then_check_rep() {
    let dir = tempfile::tempdir().unwrap();
    let o = matrep(&["enumerate", "--n", "4", "--r", "2", "--out", "c.census"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let census = std::fs::read_to_string(dir.path().join("c.census")).unwrap();
    assert!(census.starts_with("MCENSUS 1 n=4 r=2 mode=unlabeled\n"));
    assert!(census.lines().any(|l| l == "1,2;1,3;1,4;2,3;2,4;3,4"));

    let v = report(&["check-rep", "--in", "c.census", "--fields", "2,3"], dir.path());
    assert_eq!(v["command"], "check-rep");
    assert_eq!(v["fields"], serde_json::json!([2, 3]));
    let verdicts = v["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 7);
    let only_gf3: Vec<&Value> = verdicts
        .iter()
        .filter(|item| {
            let pf = item["per_field"].as_array().unwrap();
            pf[0]["status"] == "not-representable-over-this-field" && pf[1]["status"] == "found"
        })
        .collect();
    assert_eq!(only_gf3.len(), 1);
    assert_eq!(only_gf3[0]["matroid"]["bases"], "1,2;1,3;1,4;2,3;2,4;3,4");
    assert_eq!(v["aggregates"]["unlabeled_fraction"], 1.0);
    assert_eq!(v["aggregates"]["labeled_total"], "36");
}

#[test]
fn summary_goes_to_stdout_when_report_is_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = matrep(&["bounds", "--n", "12", "--r", "6", "--report", "b.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("log2_k = 418.41"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("b.json")).unwrap()).unwrap();
    assert!(v["aggregates"]["log2_k"]["value"].as_str().unwrap().starts_with("418.412024961057"));
    assert_eq!(v["aggregates"]["d"], 25);
    assert!(v.get("timings").is_none());
}

#[test]
fn precision_controls_digits() {
    let dir = tempfile::tempdir().unwrap();
    let v = report(&["bounds", "--n", "12", "--r", "6", "--precision", "30"], dir.path());
    assert_eq!(v["aggregates"]["log2_k"]["value"], "418.412024961057566201498097026817");
    assert_eq!(v["parameters"]["precision"], 30);
}

#[test]
fn verify_theorem2_range() {
    let dir = tempfile::tempdir().unwrap();
    let v = report(&["verify-theorem2", "--n-range", "12..16"], dir.path());
    assert_eq!(v["aggregates"]["all_hold"], true);
    let verdicts = v["verdicts"].as_array().unwrap();
    assert!(verdicts.iter().all(|x| x["status"] == "holds"));
    assert_eq!(verdicts.iter().filter(|x| x["kind"] == "aggregate").count(), 5);
}

#[test]
fn zero_patterns_of_x_and_x_plus_one() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.txt"), "# two polynomials\nx1\nx1 + 1\n").unwrap();
    let v = report(&["zero-patterns", "--system", "s.txt", "--fields", "2,3"], dir.path());
    let sets: Vec<&Value> = v["verdicts"].as_array().unwrap().iter().map(|x| &x["nonzero_set"]).collect();
    assert_eq!(sets, vec![&serde_json::json!([1]), &serde_json::json!([2]), &serde_json::json!([1, 2])]);
    assert_eq!(v["aggregates"]["union_count"], 3);
    assert_eq!(v["aggregates"]["within_bound"], true);
}

#[test]
fn conjecture_sample_records_seed() {
    let dir = tempfile::tempdir().unwrap();
    let v = report(&["conjecture-sample", "--n", "6", "--trials", "10", "--seed", "7", "--fields", "2,3"], dir.path());
    assert_eq!(v["seed"], 7);
    assert_eq!(v["parameters"]["r"], 3);
    assert_eq!(v["aggregates"]["nonbasis_count"], 3);
    assert_eq!(v["verdicts"].as_array().unwrap().len(), 10);
}

#[test]
fn labeled_census_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let o = matrep(&["enumerate", "--n", "3", "--r", "1", "--mode", "labeled"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("MCENSUS 1 n=3 r=1 mode=labeled"));
    assert_eq!(lines.filter(|l| !l.starts_with("census") && !l.starts_with("elapsed")).count(), 7);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // usage errors
    assert_eq!(matrep(&["frobnicate"], d).status.code(), Some(2));
    assert_eq!(matrep(&["bounds"], d).status.code(), Some(2));
    std::fs::write(d.join("c.census"), "MCENSUS 1 n=4 r=2 mode=unlabeled\n3,4\n").unwrap();
    assert_eq!(matrep(&["check-rep", "--in", "c.census", "--fields", "6"], d).status.code(), Some(2));
    assert_eq!(matrep(&["check-rep", "--in", "missing.census"], d).status.code(), Some(2));
    std::fs::write(d.join("bad.census"), "MCENSUS 1 n=4 r=2 mode=labeled\n1,3;1,2\n").unwrap();
    let o = matrep(&["check-rep", "--in", "bad.census"], d);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte 31"));
    // budget refusals
    assert_eq!(matrep(&["enumerate", "--n", "9", "--r", "4"], d).status.code(), Some(3));
    std::fs::write(d.join("s.txt"), "x1*x2*x3\n").unwrap();
    let o = matrep(&["zero-patterns", "--system", "s.txt", "--fields", "16", "--budget", "100"], d);
    assert_eq!(o.status.code(), Some(3));
    // help is not an error
    assert_eq!(matrep(&["--help"], d).status.code(), Some(0));
}

#[test]
fn budget_exhaustion_is_recorded_per_item() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = matrep(&["enumerate", "--n", "5", "--r", "2", "--out", "c.census"], d);
    assert_eq!(o.status.code(), Some(0));
    let v = report(&["check-rep", "--in", "c.census", "--fields", "2", "--budget", "1"], d);
    let inconclusive = v["aggregates"]["inconclusive"].as_u64().unwrap();
    assert!(inconclusive > 0);
    let items = v["verdicts"].as_array().unwrap();
    assert_eq!(items.len() as u64, v["aggregates"]["unlabeled_total"].as_u64().unwrap());
    assert!(items.iter().any(|x| x["verdict"] == "inconclusive"));
}
