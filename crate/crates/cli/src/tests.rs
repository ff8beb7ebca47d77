use std::path::PathBuf;

use acm_wild::moduli::WildnessReport;
use acm_wild::CohomologyTable;

use super::{execute, Execution};

fn run(args: &[&str]) -> Execution {
    execute(std::iter::once("acm-wild").chain(args.iter().copied()))
}

fn stdout(o: &Execution) -> String {
    o.stdout.clone()
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Compares against a checked-in file; `UPDATE_GOLDEN=1` rewrites it.
fn check_golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {}; rerun with UPDATE_GOLDEN=1", path.display()));
    assert!(expected == actual, "output differs from {}", path.display());
}

#[test]
fn certify_quadric_surface() {
    let o = run(&[
        "certify",
        "--n",
        "3",
        "--ci-degrees",
        "2",
        "--a",
        "1",
        "--s",
        "3",
        "--seed",
        "42",
        "--format",
        "json",
    ]);
    assert_eq!(o.code, 0);
    let report: WildnessReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report.verdict);
    assert_eq!((report.prime, report.seed), (32003, 42));
    assert_eq!(report.rank, 3);
    assert_eq!(report.ambient_dim_for_s, 15);
}

#[test]
fn certify_golden() {
    let o = run(&[
        "certify",
        "--n",
        "3",
        "--ci-degrees",
        "2",
        "--a",
        "2",
        "--s",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(o.code, 0);
    check_golden("certify_n3_ci2_a2_s3.json", &stdout(&o));
}

#[test]
fn table_plane_golden() {
    let o = run(&["table", "--n", "2", "--a", "1", "--seed", "7", "--format", "markdown"]);
    assert_eq!(o.code, 0);
    let md = stdout(&o);
    assert!(
        md.contains("| h^1 | 0 | 0 | 0 | 0 | 2 | 2 | 0 | 0 | 0 | 0 | 0 |"),
        "{md}"
    );
    assert!(md.contains("cells differing from the closed form: 0"));
    check_golden("table_n2_a1_seed7.md", &md);
}

#[test]
fn report_round_trips() {
    let o = run(&["certify", "--n", "2", "--a", "1", "--format", "json"]);
    let text = stdout(&o);
    let report: WildnessReport = serde_json::from_str(&text).unwrap();
    assert_eq!(acm_wild::report::to_canonical_json(&report), text);
}

#[test]
fn small_twist_is_refused() {
    for s in ["1", "2"] {
        let o = run(&["certify", "--n", "3", "--ci-degrees", "2", "--s", s]);
        assert_eq!(o.code, 1);
        let err = &o.stderr;
        assert!(err.contains("need s >= 3"), "{err}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn refusals_exit_one() {
    // a curve, a line, and a bundle on P^1
    for args in [
        &["certify", "--n", "3", "--ci-degrees", "2,2"][..],
        &["certify", "--n", "2", "--ci-degrees", "3"],
        &["construct", "--n", "1"],
        &["construct", "--n", "2", "--a", "0"],
    ] {
        assert_eq!(run(args).code, 1, "{args:?}");
    }
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        &["table"][..],
        &["table", "--n", "2", "--prime", "100"],
        &["table", "--n", "2", "--prime", "32001"],
        &["table", "--n", "two"],
        &["frobnicate", "--n", "2"],
        &["table", "--n", "2", "--format", "yaml"],
    ] {
        assert_eq!(run(args).code, 2, "{args:?}");
    }
}

#[test]
fn restrict_needs_forms_but_samples_them() {
    let o = run(&[
        "restrict",
        "--n",
        "3",
        "--ci-degrees",
        "3",
        "--a",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(o.code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let table: CohomologyTable = serde_json::from_value(v["table"].clone()).unwrap();
    assert_eq!((table.t_min, table.t_max), (-7, 4));
    for t in table.twists().filter(|t| ![-1, -2].contains(t)) {
        assert_eq!(table.get(1, t), Some(0));
    }
    assert_eq!(v["acm"]["verdict"], "acm");
}

#[test]
fn simplicity_and_bound() {
    let o = run(&["simplicity", "--n", "3", "--a", "2", "--format", "json"]);
    assert_eq!(o.code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["stabilizer"]["stab_dimension"], 1);
    assert_eq!(v["stabilizer"]["kac_value"], -44);

    let o = run(&["bound", "--n", "3", "--ci-degrees", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["family_dimension"], 12);
    assert_eq!(v["veronese_bound"], 19);
    assert_eq!(v["embedding_dimension"], 15);
}

#[test]
fn window_flags_and_output_file() {
    let dir = std::env::temp_dir().join(format!("acm-wild-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.json");
    let o = run(&[
        "table",
        "--n",
        "2",
        "--t-min",
        "-3",
        "--t-max",
        "-1",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["table"]["cells"][1], serde_json::json!([0, 2, 2]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn empty_window_serializes_empty_cells() {
    let o = run(&["table", "--n", "2", "--t-min", "1", "--t-max", "0", "--format", "json"]);
    assert_eq!(o.code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["table"]["cells"], serde_json::json!([]));
    assert_eq!(v["table"]["t_min"], 1);
    assert_eq!(v["table"]["t_max"], 0);
}
