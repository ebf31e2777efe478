use std::path::Path;
use std::process::{Command, Output};

use contractible_cli::JobSpec;

const EXAMPLE: &str = r#"{
  "domain": { "kind": "polydisc", "n": 2 },
  "weight": { "dim": 2, "integer_valued": true, "entries": [
    { "point": [[-0.5, 0], [0, 0]], "weight": 2 },
    { "point": [[0.5, 0], [0, 0]], "weight": 1 } ] },
  "point": [[0, 0], [0.3333333333333333, 0]]
}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contractible")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(line: &str, key: &str) -> f64 {
    let v: serde_json::Value = serde_json::from_str(line).unwrap();
    v[key].as_f64().unwrap()
}

#[test]
fn eval_prints_one_sixth_with_formula() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "cw.json", EXAMPLE);
    let out = run(&["eval", "--spec", &spec, "--format", "records"]);
    assert!(out.status.success());
    let line = stdout(&out);
    assert!((field(&line, "value") - 1.0 / 6.0).abs() < 1e-12);
    assert!(line.contains("carlehed-wiegerinck"));
}

#[test]
fn disc_weight_at_origin_is_the_product() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "disc.json",
        r#"{ "domain": { "kind": "unit_disc" },
             "weight": { "dim": 1, "entries": [
               { "point": [[0.5, 0]], "weight": 1.5 },
               { "point": [[0, -0.25]], "weight": 2 } ] },
             "point": [[0, 0]] }"#,
    );
    let out = run(&["eval", "--spec", &spec, "--format", "records"]);
    assert!(out.status.success());
    let want = 0.5f64.powf(1.5) * 0.25f64.powi(2);
    assert!((field(&stdout(&out), "value") - want).abs() < 1e-15);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{ "domain": { "kind": "polydisc", "n": 2 }, "colour": 1 }"#);
    assert_eq!(run(&["eval", "--spec", &bad]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--spec", "/nonexistent/job.json"]).status.code(), Some(2));

    let no_formula = EXAMPLE.replacen('{', r#"{ "invariant": "d_min","#, 1);
    let spec = write(dir.path(), "dmin.json", &no_formula);
    let out = run(&["eval", "--spec", &spec]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("estimate"));

    let spec = write(dir.path(), "cw.json", EXAMPLE);
    assert_eq!(run(&["estimate", "--spec", &spec]).status.code(), Some(2), "seed is mandatory");
    assert_eq!(run(&["verify", "no_such_property"]).status.code(), Some(2));
}

#[test]
fn verify_with_no_ids_is_a_no_op() {
    let out = run(&["verify"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_reports_and_csv() {
    let out = run(&["verify", "axiom_E", "chain", "--trials", "20", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("property_id,passed"));
    assert!(lines.next().unwrap().starts_with("axiom_E,true,0,20,"));
    assert!(lines.next().unwrap().starts_with("chain,true,0,20,"));
}

#[test]
fn estimate_is_byte_identical_under_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let job = EXAMPLE.replacen('{', r#"{ "invariant": "d_min", "seed": 7,"#, 1);
    let spec = write(dir.path(), "dmin.json", &job);
    let a = run(&["estimate", "--spec", &spec, "--witness"]);
    let b = run(&["estimate", "--spec", &spec, "--witness"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["estimate", "--spec", &spec, "--seed", "8", "--format", "records"]);
    let lower = field(&stdout(&c), "lower");
    assert!(lower > 0.0 && lower <= 0.125 + 1e-9);
}

#[test]
fn estimate_empty_weight_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "empty.json",
        r#"{ "domain": { "kind": "polydisc", "n": 2 }, "weight": { "dim": 2, "entries": [] },
             "point": [[0.1, 0], [0, 0.2]], "seed": 0 }"#,
    );
    let out = run(&["estimate", "--spec", &spec, "--format", "records"]);
    assert!(out.status.success());
    let line = stdout(&out);
    assert_eq!((field(&line, "lower"), field(&line, "upper")), (1.0, 1.0));
}

#[test]
fn estimate_coman_on_the_l1_ball() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "coman.json",
        r#"{ "domain": { "kind": "gauge_ball", "gauge": "abs_sum", "n": 2 },
             "weight": { "dim": 2, "integer_valued": true, "entries": [
               { "point": [[0.04, 0], [0.2, 0]], "weight": 1 },
               { "point": [[0.04, 0], [-0.2, 0]], "weight": 1 } ] },
             "point": [[0, 0], [0, 0]], "invariant": "coman", "seed": 0 }"#,
    );
    let out = run(&["estimate", "--spec", &spec, "--format", "records"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(field(&stdout(&out), "upper") <= 0.16 + 1e-9);
}

#[test]
fn estimate_green_contains_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "cw.json", EXAMPLE);
    let out = run(&["estimate", "--spec", &spec, "--seed", "3", "--format", "records"]);
    assert!(out.status.success());
    let line = stdout(&out);
    let (lo, hi) = (field(&line, "lower"), field(&line, "upper"));
    assert!(lo <= 1.0 / 6.0 + 1e-12 && 1.0 / 6.0 - 1e-12 <= hi && hi - lo <= 1e-4);
}

#[test]
fn job_files_round_trip_canonically() {
    let spec = JobSpec::from_json(EXAMPLE).unwrap();
    let canonical = spec.to_json();
    assert_eq!(JobSpec::from_json(&canonical).unwrap(), spec);
    assert_eq!(JobSpec::from_json(&canonical).unwrap().to_json(), canonical);

    // entries out of canonical order
    let shuffled = r#"{
      "domain": { "kind": "polydisc", "n": 2 },
      "weight": { "dim": 2, "integer_valued": true, "entries": [
        { "point": [[0.5, 0], [0, 0]], "weight": 1 },
        { "point": [[-0.5, 0], [0, 0]], "weight": 2 } ] },
      "point": [[0, 0], [0.3333333333333333, 0]]
    }"#;
    assert_eq!(JobSpec::from_json(shuffled).unwrap().to_json(), canonical);
}

#[test]
fn reproduce_table_passes() {
    let out = run(&["reproduce", "--format", "records"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 8);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["passed"], true, "{line}");
    }
    assert_eq!(run(&["reproduce"]).stdout, run(&["reproduce"]).stdout);
}
