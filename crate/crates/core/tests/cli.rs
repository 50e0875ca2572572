use std::path::Path;
use std::process::{Command, Output};

use dec_core::calculus::{d, Form};
use dec_core::io::{FormDocument, InhomogeneousDocument, MatrixDocument};
use dec_core::{GridShape, InhomogeneousForm};
use serde_json::Value;

fn dec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dec"))
        .args(args)
        .env_remove("DEC_FIXTURE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write_json(dir: &Path, name: &str, value: &impl serde::Serialize) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn cohomology_prints_betti_numbers() {
    let out = dec(&["cohomology", "--n", "3", "--m", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "b0=1 b1=2 b2=1\n");

    let out = dec(&["cohomology", "--n", "2", "--m", "2", "--with-generators"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let (first, rest) = text.split_once('\n').unwrap();
    assert_eq!(first, "b0=1 b1=2 b2=1");
    let doc: Value = serde_json::from_str(rest).unwrap();
    assert_eq!(doc["generators"][1].as_array().unwrap().len(), 2);
}

#[test]
fn zero_extent_is_rejected() {
    let out = dec(&["cohomology", "--n", "0", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("n must be >= 1"));
    let out = dec(&["matrices", "--n", "2", "--m", "0", "--op", "d0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("m must be >= 1"));
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(dec(&["matrices", "--n", "2", "--m", "2", "--op", "d7"]).status.code(), Some(2));
    assert_eq!(dec(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dec(&["--help"]).status.code(), Some(0));
}

#[test]
fn matrices_json_and_csv_agree() {
    let json = dec(&["matrices", "--n", "3", "--m", "2", "--op", "lap1"]);
    assert_eq!(json.status.code(), Some(0));
    let doc = MatrixDocument::parse(&stdout(&json)).unwrap();
    assert_eq!(doc.op, "lap1");
    assert_eq!(doc.ordering, "canonical");
    assert_eq!(doc.entries.len(), 12);

    let csv = dec(&["matrices", "--n", "3", "--m", "2", "--op", "lap1", "--format", "csv"]);
    let (rows, cols, entries) = MatrixDocument::parse_csv(&stdout(&csv)).unwrap();
    assert_eq!((rows, cols, entries), (doc.row_labels, doc.col_labels, doc.entries));
}

#[test]
fn output_is_byte_deterministic() {
    let args = ["matrices", "--n", "4", "--m", "3", "--op", "dirac", "--format", "csv"];
    assert_eq!(dec(&args).stdout, dec(&args).stdout);
    let args = ["check", "--suite", "all", "--n", "2", "--m", "3", "--seed", "9", "--trials", "10"];
    let (a, b) = (dec(&args), dec(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("suite=all shape=2x3 seed=9 trials=10\n"));
}

#[test]
fn verify_against_reference_matrices() {
    for op in ["d0", "d1", "delta1", "delta2", "lap0", "lap1", "lap2", "dirac"] {
        let out = dec(&["matrices", "--n", "2", "--m", "2", "--op", op, "--ordering", "paper2x2", "--verify-paper"]);
        assert_eq!(out.status.code(), Some(0), "{op}: {}", stderr(&out));
    }
    let out = dec(&["matrices", "--n", "2", "--m", "2", "--op", "d0", "--verify-paper"]);
    assert_eq!(out.status.code(), Some(2));
    let out = dec(&["matrices", "--n", "3", "--m", "2", "--op", "d0", "--ordering", "paper2x2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports_mismatch_from_overridden_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let text = include_str!("../fixtures/torus_2x2.json");
    let mut fx: Value = serde_json::from_str(text).unwrap();
    fx["A"][0][0] = Value::from(7);
    std::fs::write(dir.path().join("torus_2x2.json"), fx.to_string()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dec"))
        .args(["matrices", "--n", "2", "--m", "2", "--op", "d0", "--ordering", "paper2x2", "--verify-paper"])
        .env("DEC_FIXTURE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("MISMATCH"));
}

#[test]
fn decompose_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let t = GridShape::torus(3, 3).unwrap();
    let phi = Form::from_fn(t, 0, |_, k, s| (k * s) as f64);
    let winding = Form::from_fn(t, 1, |c, _, _| if c == 1 { 2.0 } else { 0.0 });
    let w = &d(&phi) + &winding;
    let input = write_json(dir.path(), "w.json", &FormDocument::from_form(&w));
    let output = dir.path().join("out.json");
    let out = dec(&["decompose", "--input", &input, "--output", output.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert!(doc["residual_norm"].as_f64().unwrap() < 1e-10);
    let harmonic: FormDocument = serde_json::from_value(doc["harmonic"].clone()).unwrap();
    let harmonic = harmonic.to_form().unwrap();
    assert!((&harmonic - &winding).max_abs() < 1e-10);
    let exact: FormDocument = serde_json::from_value(doc["exact"].clone()).unwrap();
    assert!((&exact.to_form().unwrap() - &d(&phi)).max_abs() < 1e-10);
}

#[test]
fn decompose_rejects_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"shape":{"n":2,"m":2,"topology":"torus"},"degree":1,"components":{"u":[[1,2]]}}"#).unwrap();
    let out = dec(&["decompose", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&path, "not json").unwrap();
    assert_eq!(dec(&["decompose", "--input", path.to_str().unwrap()]).status.code(), Some(2));
    let window = FormDocument::from_form(&Form::zeros(GridShape::window(2, 2).unwrap(), 0));
    let input = write_json(dir.path(), "window.json", &window);
    assert_eq!(dec(&["decompose", "--input", &input]).status.code(), Some(2));
}

#[test]
fn solve_dirac_and_harmonic_rejection() {
    let dir = tempfile::tempdir().unwrap();
    let t = GridShape::torus(2, 3).unwrap();
    let zero = Form::from_fn(t, 0, |_, k, s| if (k, s) == (1, 1) { 1.0 } else if (k, s) == (2, 3) { -1.0 } else { 0.0 });
    let f = InhomogeneousForm::new(zero, Form::zeros(t, 1), Form::zeros(t, 2)).unwrap();
    let input = write_json(dir.path(), "f.json", &InhomogeneousDocument::from_form(&f));
    let out = dec(&["solve-dirac", "--input", &input]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc["residual"].as_f64().unwrap() < 1e-10);
    let omega: InhomogeneousDocument = serde_json::from_value(doc["omega"].clone()).unwrap();
    let omega = omega.to_form().unwrap();
    assert!((&dec_core::calculus::dirac(&omega) - &f).max_abs() < 1e-10);

    let constant = Form::from_fn(t, 0, |_, _, _| 1.0);
    let h = InhomogeneousForm::new(constant, Form::zeros(t, 1), Form::zeros(t, 2)).unwrap();
    let input = write_json(dir.path(), "h.json", &InhomogeneousDocument::from_form(&h));
    let out = dec(&["solve-dirac", "--input", &input]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("F has harmonic component"));
}
