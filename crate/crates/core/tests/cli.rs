use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn scan_nacs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scan-nacs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn line_count(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count()
}

/// The OUT column of a dataset file.
fn targets(path: &Path) -> String {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| format!("{}\n", l.split_once(" OUT: ").unwrap().1))
        .collect()
}

#[test]
fn generate_then_eval_nacs_jump() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d");
    let out = scan_nacs(&[
        "generate",
        "--direction",
        "nacs",
        "--split",
        "primitive",
        "--primitive",
        "jump",
        "--out",
        data.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(line_count(&data.join("train.txt")), 13_204);
    assert_eq!(line_count(&data.join("test.txt")), 7_706);
    assert!(data.join("manifest.json").exists());

    let preds = dir.path().join("p.txt");
    fs::write(&preds, targets(&data.join("test.txt"))).unwrap();
    let report = dir.path().join("r.json");
    let out = scan_nacs(&[
        "eval",
        "--direction",
        "nacs",
        "--dataset",
        data.to_str().unwrap(),
        "--predictions",
        preds.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("accuracy 1.000000 (7706/7706)"));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(json["accuracy"], 1.0);
    assert!(json.get("verdicts").is_none());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let out = out.to_str().unwrap();
    let usage = scan_nacs(&[
        "generate",
        "--split",
        "simple",
        "--fraction",
        "1.5",
        "--seed",
        "1",
        "--out",
        out,
    ]);
    assert_eq!(usage.status.code(), Some(2));
    assert!(!Path::new(out).exists());
    assert_eq!(
        scan_nacs(&[
            "generate",
            "--split",
            "length",
            "--fraction",
            "0.5",
            "--out",
            out
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        scan_nacs(&["generate", "--split", "simple", "--out", out])
            .status
            .code(),
        Some(2)
    );
    // degenerate split is a data error
    let degenerate = scan_nacs(&[
        "generate",
        "--split",
        "length",
        "--threshold",
        "48",
        "--out",
        out,
    ]);
    assert_eq!(degenerate.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&degenerate.stderr).contains("degenerate"));
    let missing = scan_nacs(&[
        "eval",
        "--dataset",
        "/nonexistent",
        "--predictions",
        "/nonexistent",
    ]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn generate_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        let out = scan_nacs(&[
            "generate",
            "--split",
            "simple",
            "--seed",
            "2024",
            "--out",
            d.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    for name in ["train.txt", "test.txt", "manifest.json"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap()
        );
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 2024);
    assert_eq!(manifest["defaults"]["train_fraction"], 0.8);
    assert_eq!(manifest["defaults"]["length_threshold"], 22);
    assert_eq!(manifest["train_count"], 16_728);
}

#[test]
fn stats_writes_both_forms() {
    let dir = tempfile::tempdir().unwrap();
    let out = scan_nacs(&[
        "stats",
        "--seed",
        "5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("stats.json")).unwrap()).unwrap();
    assert_eq!(json["command_count"], 20_910);
    assert_eq!(json["distinct_action_sequences"], 9_228);
    assert_eq!(json["splits"].as_array().unwrap().len(), 4);
    let text = fs::read_to_string(dir.path().join("stats.txt")).unwrap();
    assert!(text.contains("primitive(turn-left)"));
}
