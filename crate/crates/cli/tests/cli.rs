//! End-to-end checks of the binary: output shapes, determinism and the
//! exit-code contract (2 config, 3 data, 4 failed internal check).

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn privtree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_privtree"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

#[test]
fn tree_prints_the_embedded_sample() {
    let out = privtree(&["tree"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("LiverSize = ENLARGED -> CLASS1 (4/4)"), "{text}");
    assert!(text.contains("PatientsWeight <= 77.5"));
}

#[test]
fn tree_json_is_parseable() {
    let out = privtree(&["tree", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["root"]["kind"], "internal");
    assert_eq!(doc["class_attribute"], "Class");
}

#[test]
fn constant_shift_reproduces_the_frozen_column() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    write(
        &config,
        "[perturb.domain_overrides]\nPatientsWeight = [1.0, 100.0]\n",
    );
    let out_csv = dir.path().join("out.csv");
    let report = dir.path().join("report.json");
    let out = privtree(&[
        "perturb",
        "--config",
        config.to_str().unwrap(),
        "--no-capt",
        "--inject-shift",
        "PatientsWeight=-4.26",
        "--out",
        out_csv.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let csv = fs::read_to_string(&out_csv).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "LiverSize,PatientsWeight,EatsPizza,Class");
    assert_eq!(lines[1], "NORMAL,65.74,YES,CLASS1");
    assert_eq!(lines[8], "ENLARGED,60.74,YES,CLASS1");
    assert_eq!(lines[14], "SHRINKED,91.74,NO,CLASS1");

    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["lrpa"]["injected_shifts"]["PatientsWeight"], -4.26);
    assert_eq!(doc["lwpa"]["injected_shifts"]["PatientsWeight"], -4.26);
    assert!(doc["capt"].is_null());
    assert_eq!(doc["lrpa"]["wrap_events"], serde_json::json!({}));
}

#[test]
fn same_seed_writes_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = privtree(&["perturb", "--seed", "7", "--out", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn perturb_to_stdout_is_plain_csv() {
    let out = privtree(&["perturb", "--scale-lrpa", "0", "--scale-lwpa", "0", "--no-capt"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), privtree_core::embedded_liver_csv());
}

#[test]
fn perturb_summary_appears_when_writing_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = privtree(&["perturb", "--seed", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("wrote 14 rows"), "{text}");
    assert!(text.contains("changed cells:"), "{text}");
}

#[test]
fn unknown_shift_attribute_is_a_config_error() {
    let out = privtree(&["perturb", "--inject-shift", "Nope=-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("Nope"));
}

#[test]
fn categorical_shift_attribute_is_a_config_error() {
    let out = privtree(&["perturb", "--inject-shift", "LiverSize=-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not numeric"));
}

#[test]
fn out_of_range_probability_is_a_config_error() {
    let out = privtree(&["perturb", "--p", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_dataset_file_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    write(
        &config,
        concat!(
            "dataset = \"absent.csv\"\n",
            "[[columns]]\nname = \"X\"\nkind = \"numeric\"\n",
            "[[columns]]\nname = \"C\"\nkind = \"categorical\"\nrole = \"class\"\n",
        ),
    );
    let out = privtree(&["tree", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    write(&config, "this is not toml [");
    let out = privtree(&["tree", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_csv_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    write(
        &config,
        concat!(
            "dataset = \"data.csv\"\n",
            "[[columns]]\nname = \"X\"\nkind = \"numeric\"\n",
            "[[columns]]\nname = \"C\"\nkind = \"categorical\"\nrole = \"class\"\n",
        ),
    );
    write(&dir.path().join("data.csv"), "X,C\n1,a\nnot-a-number,b\n");
    let out = privtree(&["tree", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("not-a-number"));
}

#[test]
fn demo_passes_its_self_checks() {
    let out = privtree(&["demo"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("0.940"));
    assert!(text.contains("0.694"));
    assert!(text.contains("rebuilt-tree similarity: 1.000"));
    let again = privtree(&["demo"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn identity_config_evaluates_to_equal_columns() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    write(
        &config,
        concat!(
            "[perturb]\n",
            "noise_scale_lrpa = 0.0\n",
            "noise_scale_lwpa = 0.0\n",
            "capt_enabled = false\n",
        ),
    );
    let out = privtree(&[
        "eval",
        "--config",
        config.to_str().unwrap(),
        "--format",
        "json",
        "--split-seed",
        "9",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["accuracy_original_train"], doc["accuracy_perturbed_train"]);
    assert_eq!(doc["accuracy_original_test"], doc["accuracy_perturbed_test"]);
    assert_eq!(doc["tree_similarity"], 1.0);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    write(&config, "[perturb]\nseed = 1\np = 0.2\n");
    let with_flag = privtree(&[
        "perturb",
        "--config",
        config.to_str().unwrap(),
        "--seed",
        "7",
    ]);
    let no_config = privtree(&["perturb", "--seed", "7", "--p", "0.2"]);
    assert!(with_flag.status.success());
    assert_eq!(with_flag.stdout, no_config.stdout);
}
