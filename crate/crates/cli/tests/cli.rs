use std::path::Path;
use std::process::{Command, Output};

fn svmgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_svmgeo")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> serde_json::Value {
    let out = svmgeo(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap_or(serde_json::Value::Null)
}

fn gen(dir: &Path, name: &str, extra: &[&str]) -> String {
    let path = dir.join(name).to_str().unwrap().to_string();
    let mut args = vec!["gen", "--seed", "5", "--out", &path];
    args.extend_from_slice(extra);
    ok(&args);
    path
}

#[test]
fn gen_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "a.csv", &["--n-plus", "7", "--n-minus", "4", "--d", "3"]);
    let b = gen(dir.path(), "b.csv", &["--n-plus", "7", "--n-minus", "4", "--d", "3"]);
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 11);
    assert!(text.lines().all(|l| l.split(',').count() == 4));
}

#[test]
fn seed_is_required() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    assert!(!svmgeo(&["gen", "--out", out.to_str().unwrap()]).status.success());
    assert!(!svmgeo(&["experiment", "--name", "intercept-study"]).status.success());
}

#[test]
fn fit_each_classifier() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen(dir.path(), "d.csv", &["--n-plus", "12", "--n-minus", "10"]);
    let svm = ok(&["fit", "--data", &data, "--c", "0.5"]);
    assert_eq!(svm["C"], 0.5);
    assert_eq!(svm["w"].as_array().unwrap().len(), 2);
    let hard = ok(&["fit", "--data", &data, "--classifier", "hard"]);
    assert!(hard["C"].is_null());
    for c in ["md", "fld", "mdp"] {
        let m = ok(&["fit", "--data", &data, "--classifier", c]);
        assert!(m["b"].is_number(), "{c}");
    }
    let centroid = ok(&["fit", "--data", &data, "--c", "0.5", "--intercept", "centroid"]);
    assert_eq!(centroid["w"], svm["w"]);
    assert!(!svmgeo(&["fit", "--data", &data]).status.success());
}

#[test]
fn verify_and_path_write_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen(
        dir.path(),
        "d.csv",
        &["--n-plus", "12", "--n-minus", "8", "--separation", "8"],
    );
    let report = ok(&["verify", "--data", &data]);
    assert!(!report["checks"].as_array().unwrap().is_empty());

    let test = gen(
        dir.path(),
        "t.csv",
        &["--n-plus", "40", "--n-minus", "40", "--separation", "8"],
    );
    let plots = dir.path().join("plots");
    let curve = ok(&[
        "path",
        "--data",
        &data,
        "--test",
        &test,
        "--grid-count",
        "6",
        "--plot-dir",
        plots.to_str().unwrap(),
    ]);
    assert_eq!(curve["rows"].as_array().unwrap().len(), 6);
    assert!(plots.join("errors.csv").exists() && plots.join("manifest.json").exists());
}

#[test]
fn cv_and_small_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen(dir.path(), "d.csv", &[]);
    let r = ok(&["cv", "--data", &data, "--c", "1", "--folds", "4", "--stratified"]);
    assert_eq!(r["fold_errors"].as_array().unwrap().len(), 4);

    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"generator":{"n_plus":8,"n_minus":7,"d":3,"separation":2.0,"seed":0},
            "grid":{"min":null,"max":null,"count":5},"folds":3,"stratified":false,
            "intercept_mode":"adaptive","repetitions":2,"test_size":50,"seed":0}"#,
    )
    .unwrap();
    let s = ok(&["experiment", "--config", cfg.to_str().unwrap(), "--seed", "3"]);
    assert_eq!(s["completed"], 2);
}

#[test]
fn malformed_csv_reports_row() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.csv");
    std::fs::write(&p, "1,2,1\n3,x,-1\n").unwrap();
    let out = svmgeo(&["fit", "--data", p.to_str().unwrap(), "--classifier", "md"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains('2'));
}
