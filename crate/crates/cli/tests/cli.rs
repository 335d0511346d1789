use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SMALL: &[&str] = &[
    "--synthetic.n_nonfraud",
    "1000",
    "--synthetic.n_fraud",
    "60",
    "--split.train_nonfraud_count",
    "200",
    "--split.test_nonfraud_count",
    "100",
];

fn qae(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qae"))
        .env("RUST_LOG", "warn")
        .arg("--out")
        .arg(out)
        .args(SMALL)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(out: &Path, args: &[&str]) -> String {
    let o = qae(out, args);
    assert!(
        o.status.success(),
        "qae {args:?} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

fn fails(out: &Path, args: &[&str], code: i32) -> String {
    let o = qae(out, args);
    assert_eq!(
        o.status.code(),
        Some(code),
        "stdout: {}",
        String::from_utf8_lossy(&o.stdout)
    );
    String::from_utf8(o.stderr).unwrap()
}

/// Data lines of a CSV artifact, after checking the metadata and header lines.
fn csv_rows(path: &Path) -> Vec<String> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let meta = lines.next().unwrap();
    assert!(meta.starts_with("# config_sha256="), "{meta}");
    assert!(meta.contains(" seed="), "{meta}");
    assert!(lines.next().is_some(), "missing header row");
    lines.map(str::to_string).collect()
}

fn trained(dir: &Path, epochs: &str) {
    ok(dir, &["prepare"]);
    ok(dir, &["--train.epochs", epochs, "train"]);
}

#[test]
fn prepare_writes_cache_and_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(dir.path(), &["prepare"]);
    assert!(stdout.contains("1000 non-fraud, 60 fraud"), "{stdout}");
    let selection: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("selection.json")).unwrap())
            .unwrap();
    assert_eq!(selection["selected"].as_array().unwrap().len(), 16);
    assert_eq!(csv_rows(&dir.path().join("reduced.csv")).len(), 1060);
    let names = ["reduced.csv", "selection.json", "prepared.json"];
    let first: Vec<String> = names
        .iter()
        .map(|n| fs::read_to_string(dir.path().join(n)).unwrap())
        .collect();
    ok(dir.path(), &["prepare"]);
    for (n, text) in names.iter().zip(&first) {
        assert_eq!(
            &fs::read_to_string(dir.path().join(n)).unwrap(),
            text,
            "{n} changed"
        );
    }
}

#[test]
fn prepare_reads_a_csv_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("data.csv");
    ok(
        dir.path(),
        &["synth-data", "--output", csv.to_str().unwrap()],
    );
    let out = dir.path().join("run");
    ok(&out, &["--dataset", csv.to_str().unwrap(), "prepare"]);
    let a = fs::read(out.join("prepared.json")).unwrap();
    let synthetic = dir.path().join("synthetic");
    ok(&synthetic, &["prepare"]);
    assert_eq!(a, fs::read(synthetic.join("prepared.json")).unwrap());
}

#[test]
fn missing_dataset_exits_2_naming_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let err = fails(
        dir.path(),
        &["--dataset", "/no/such/file.csv", "prepare"],
        2,
    );
    assert!(err.contains("/no/such/file.csv"), "{err}");
}

#[test]
fn train_without_prepare_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = fails(dir.path(), &["train"], 2);
    assert!(err.contains("prepared.json"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    fails(dir.path(), &["frobnicate"], 2);
    fails(dir.path(), &["--train.epoch", "3", "prepare"], 2);
    fails(dir.path(), &["--k", "8", "prepare"], 2);
    fails(dir.path(), &["--train.epochs", "0", "prepare"], 2);
}

#[test]
fn training_is_deterministic_and_logs_every_epoch() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    trained(a.path(), "100");
    trained(b.path(), "100");
    assert_eq!(csv_rows(&a.path().join("history.csv")).len(), 100);
    for name in ["model.json", "history.csv"] {
        assert_eq!(
            fs::read_to_string(a.path().join(name)).unwrap(),
            fs::read_to_string(b.path().join(name)).unwrap(),
            "{name} differs"
        );
    }
    let c = tempfile::tempdir().unwrap();
    ok(c.path(), &["--seed", "9", "prepare"]);
    ok(c.path(), &["--seed", "9", "--train.epochs", "100", "train"]);
    assert_ne!(
        fs::read(a.path().join("model.json")).unwrap(),
        fs::read(c.path().join("model.json")).unwrap()
    );
}

#[test]
fn evaluate_emits_table_and_distribution() {
    let dir = tempfile::tempdir().unwrap();
    trained(dir.path(), "1");
    ok(dir.path(), &["evaluate"]);
    let metrics = csv_rows(&dir.path().join("metrics.csv"));
    let thresholds: Vec<&str> = metrics
        .iter()
        .map(|r| r.split(',').next().unwrap())
        .collect();
    assert_eq!(thresholds, ["0.4", "0.45", "0.5", "0.55", "0.65"]);
    assert_eq!(csv_rows(&dir.path().join("fidelities.csv")).len(), 160);
    let dist: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("distribution.json")).unwrap())
            .unwrap();
    assert_eq!(dist["nonfraud"]["count"], 100);
    assert_eq!(dist["fraud"]["count"], 60);

    let first = fs::read(dir.path().join("fidelities.csv")).unwrap();
    ok(dir.path(), &["evaluate"]);
    assert_eq!(first, fs::read(dir.path().join("fidelities.csv")).unwrap());
}

#[test]
fn degenerate_thresholds_are_flagged() {
    let dir = tempfile::tempdir().unwrap();
    trained(dir.path(), "1");
    ok(dir.path(), &["--thresholds", "[0.0, 1.0]", "evaluate"]);
    let rows = csv_rows(&dir.path().join("metrics.csv"));
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.ends_with(",true")), "{rows:?}");
}

#[test]
fn sweeps_have_the_documented_shapes() {
    let dir = tempfile::tempdir().unwrap();
    trained(dir.path(), "1");

    ok(dir.path(), &["sweep", "--kind", "prevalence"]);
    let rows = csv_rows(&dir.path().join("prevalence.csv"));
    assert_eq!(rows.len(), 4 * 3);

    ok(dir.path(), &["sweep", "--kind", "noise"]);
    let rows = csv_rows(&dir.path().join("noise.csv"));
    assert_eq!(rows.len(), 5 * 11);
    for kind in [
        "bit_flip",
        "phase_flip",
        "depolarizing",
        "amplitude_damping",
        "phase_damping",
    ] {
        assert_eq!(
            rows.iter()
                .filter(|r| r.starts_with(&format!("{kind},")))
                .count(),
            11
        );
    }

    ok(
        dir.path(),
        &[
            "--noise.shot_grid",
            "[128, 256]",
            "sweep",
            "--kind",
            "shots",
        ],
    );
    let rows = csv_rows(&dir.path().join("shots.csv"));
    assert_eq!(rows.len(), 5 * 2);
    assert!(rows.iter().all(|r| r.split(',').nth(1) == Some("0.5")));
}

#[test]
fn hw_classify_on_synthesized_jobs() {
    let dir = tempfile::tempdir().unwrap();
    trained(dir.path(), "1");
    ok(dir.path(), &["--hw.n_jobs", "40", "synth-jobs"]);
    let stdout = ok(
        dir.path(),
        &[
            "hw-classify",
            "--jobs",
            dir.path().join("jobs.json").to_str().unwrap(),
        ],
    );
    assert!(stdout.contains("in-sample: accuracy"), "{stdout}");
    let metrics: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("hw_metrics.json")).unwrap())
            .unwrap();
    assert_eq!(metrics["jobs"], 40);
    assert_eq!(metrics["held_out"]["test_jobs"], 20);
    assert!(dir.path().join("hw_model.json").exists());
}

#[test]
fn hw_classify_rejects_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("jobs.json");
    let arg = path.to_str().unwrap();

    fs::write(&path, "[]").unwrap();
    let err = fails(dir.path(), &["hw-classify", "--jobs", arg], 2);
    assert!(err.contains("no jobs"), "{err}");

    fs::write(
        &path,
        "[\n  {\"job_id\": \"a\",\n  \"label\": 0,\n  \"counts\": {oops}}\n]",
    )
    .unwrap();
    let err = fails(dir.path(), &["hw-classify", "--jobs", arg], 2);
    assert!(err.contains("line 4"), "{err}");

    let job = |id: &str| {
        format!(r#"{{"job_id": "{id}", "label": 0, "counts": {{"000": 900, "101": 124}}}}"#)
    };
    let jobs: Vec<String> = ["a", "b", "c", "d"].iter().map(|id| job(id)).collect();
    fs::write(&path, format!("[{}]", jobs.join(", "))).unwrap();
    let err = fails(dir.path(), &["hw-classify", "--jobs", arg], 2);
    assert!(err.contains("fraud"), "{err}");
}
