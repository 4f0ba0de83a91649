use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quditclass"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        let o = run(dir.path(), &["gen", "circles", "--n", "120", "--seed", "9", "--out", name]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let a = std::fs::read(path(dir.path(), "a.csv")).unwrap();
    let b = std::fs::read(path(dir.path(), "b.csv")).unwrap();
    assert_eq!(a, b);
    assert!(String::from_utf8(a).unwrap().starts_with("x1,x2,label\n"));
    assert!(path(dir.path(), "a.csv.manifest.json").exists());

    let o = run(dir.path(), &["gen", "moons", "--n", "120", "--seed", "10", "--out", "c.csv"]);
    assert!(o.status.success());
    assert_ne!(std::fs::read(path(dir.path(), "c.csv")).unwrap(), b);
}

#[test]
fn unknown_model_lists_zoo() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "xor", "--n", "40", "--out", "d.csv"]);
    let o = run(dir.path(), &["train", "--model", "qubit-Z", "--data", "d.csv", "--out", "t.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("qutrit-uci"));
}

#[test]
fn missing_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["train", "--model", "qubit-A", "--data", "nope.csv", "--out", "t.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nope.csv"));
}

#[test]
fn train_then_eval_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = run(d, &["gen", "xor", "--n", "200", "--center", "0.25,0.25", "--noise", "0", "--seed", "1", "--out", "x.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = run(
        d,
        &["train", "--model", "qubit-A", "--data", "x.csv", "--train-fraction", "0.2", "--restarts", "8", "--seed", "4", "--out", "fit.json"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let stored: serde_json::Value = serde_json::from_slice(&std::fs::read(path(d, "fit.json")).unwrap()).unwrap();
    let test_acc = stored["test_accuracy"].as_f64().unwrap();
    let train_acc = stored["train_accuracy"].as_f64().unwrap();

    for (subset, expected) in [("test", test_acc), ("train", train_acc)] {
        let out = format!("eval-{subset}.json");
        let o = run(d, &["eval", "--model", "qubit-A", "--params", "fit.json", "--data", "x.csv", "--subset", subset, "--out", &out]);
        assert!(o.status.success(), "{}", stderr(&o));
        let v: serde_json::Value = serde_json::from_slice(&std::fs::read(path(d, &out)).unwrap()).unwrap();
        assert!((v["accuracy"].as_f64().unwrap() - expected).abs() <= 1e-12);
    }

    let o = run(d, &["eval", "--model", "qubit-B", "--params", "fit.json", "--data", "x.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parameter"), "{}", stderr(&o));

    std::fs::write(path(d, "cut.json"), "{\"best_params\": {\"s\": [0.1]").unwrap();
    let o = run(d, &["eval", "--model", "qubit-A", "--params", "cut.json", "--data", "x.csv"]);
    assert!(!o.status.success());

    std::fs::write(path(d, "empty.csv"), "x1,x2,label\n").unwrap();
    let o = run(d, &["eval", "--model", "qubit-A", "--params", "fit.json", "--data", "empty.csv"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("empty dataset"), "{}", stderr(&o));
}

#[test]
fn kernel_prints_both_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["kernel", "--x", "0.3,-0.2", "--y", "0.3,-0.2", "--closed-form"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.matches("1.000000").count(), 2, "{text}");

    let o = run(dir.path(), &["kernel", "--x", "1,0", "--y", "0,1", "--closed-form"]);
    assert_eq!(stdout(&o).matches("0.500000").count(), 2);

    let o = run(dir.path(), &["kernel", "--x", "0,0", "--y", "0,1", "--closed-form"]);
    assert!(!o.status.success());
}

#[test]
fn grid_has_resolution_squared_rows() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(d, &["gen", "xor", "--n", "60", "--out", "x.csv"]);
    run(d, &["train", "--model", "qubit-A", "--data", "x.csv", "--restarts", "2", "--out", "fit.json"]);
    let o = run(d, &["grid", "--model", "qubit-A", "--params", "fit.json", "--resolution", "7", "--out", "g.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(path(d, "g.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x1,x2,expectation,class");
    assert_eq!(lines.len(), 1 + 49);

    let o = run(d, &["grid", "--model", "qubit-A", "--params", "fit.json", "--bloch", "x.csv", "--out", "b.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(path(d, "b.csv")).unwrap();
    assert_eq!(text.lines().count(), 61);
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').take(3).map(|c| c.parse().unwrap()).collect();
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        assert!((norm - 1.0).abs() < 1e-8);
    }

    let o = run(d, &["grid", "--model", "qubit-G", "--params", "fit.json", "--out", "h.csv"]);
    assert!(!o.status.success());
}

#[test]
fn pca_rejects_too_many_components() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(d, &["gen", "moons", "--n", "50", "--out", "m.csv"]);
    let o = run(d, &["pca", "--in", "m.csv", "--out", "p.csv", "--components", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(d, &["pca", "--in", "m.csv", "--out", "p.csv", "--components", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(path(d, "p.csv")).unwrap();
    assert!(text.starts_with("x1,label\n"), "{text}");
    assert!(path(d, "p.csv.pca.json").exists());
}

#[test]
fn lmdim_prints_a_table_row() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["lmdim", "--model", "qubit-C", "--n-max", "3", "--restarts", "10", "--pattern-budget", "2", "--out", "lm.json"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let last = stdout(&o).lines().last().unwrap().to_string();
    assert!(last.starts_with("qubit-C"), "{last}");
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(path(dir.path(), "lm.json")).unwrap()).unwrap();
    assert_eq!(report["num_params"], 3);

    let o = run(dir.path(), &["lmdim", "--model", "qutrit-3class", "--out", "x.json"]);
    assert!(!o.status.success());
}

#[test]
fn zoo_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["zoo", "--export", "specs"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let spec = path(dir.path(), "specs/qubit-B.json");
    let o = run(dir.path(), &["gen", "xor", "--n", "40", "--out", "x.csv"]);
    assert!(o.status.success());
    let o = run(
        dir.path(),
        &["train", "--model", spec.to_str().unwrap(), "--data", "x.csv", "--restarts", "1", "--out", "t.json"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
}
