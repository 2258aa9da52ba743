//! End-to-end runs of the compiled binary: exit-code contract,
//! deterministic reports, and fixture-directory resolution.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn workspace_root() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf()
}

fn czjump(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_czjump"))
        .args(args)
        .current_dir(workspace_root())
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn analyze_fixture_succeeds() {
    let out = czjump(&["analyze", "fixtures/ellipsoid_sqrt3.cat"]);
    assert_eq!(exit_code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("mean index 12+6*sqrt(3)"));
    assert!(stdout.contains("(1/3)*pi"));
}

#[test]
fn perturbed_action_fails_verification() {
    let out = czjump(&["analyze", "fixtures/perturbed_action.cat"]);
    assert_eq!(exit_code(&out), 1);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("resonance-constant: FAIL"));
}

#[test]
fn missing_file_is_input_error() {
    let out = czjump(&["analyze", "no_such_file.cat"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn empty_catalogue_is_input_error() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("empty.cat");
    std::fs::write(&path, "schema 1\nn 3\nfield 3\nprovenance ellipsoid\n").unwrap();
    let out = czjump(&["index", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("empty catalogue"));
}

#[test]
fn zero_iterate_is_input_error() {
    let out = czjump(&["index", "fixtures/ellipsoid_sqrt3.cat", "--k-min", "0"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn exhausted_scan_exits_three_with_diagnostics() {
    let out = czjump(&[
        "jump",
        "fixtures/ellipsoid_sqrt3.cat",
        "--m",
        "2",
        "--n-div",
        "2",
        "--t-max",
        "10",
    ]);
    assert_eq!(exit_code(&out), 3);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("search exhausted"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = czjump(&[
            "analyze",
            "fixtures/ellipsoid_sqrt3.cat",
            "--report",
            path.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn jump_report_feeds_analyze() {
    let dir = TempDir::new().unwrap();
    let sol = dir.path().join("solution.json");
    let out = czjump(&[
        "jump",
        "fixtures/two_rational_means.cat",
        "--m",
        "2",
        "--n-div",
        "2",
        "--epsilon",
        "1/100",
        "--even-d",
        "--t-max",
        "10000",
        "--report",
        sol.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let out = czjump(&[
        "analyze",
        "fixtures/two_rational_means.cat",
        "--solution",
        sol.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1, "rational-mean uniqueness fails");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("pin both iterates to the same level 70"));
}

#[test]
fn fixture_dir_env_resolves_relative_paths() {
    let out = Command::new(env!("CARGO_BIN_EXE_czjump"))
        .args(["analyze", "ellipsoid_sqrt3.cat"])
        .current_dir(std::env::temp_dir())
        .env("CZJUMP_FIXTURE_DIR", workspace_root().join("fixtures"))
        .output()
        .expect("binary runs");
    assert_eq!(exit_code(&out), 0);
}

#[test]
fn verify_suite_filter_limits_the_run() {
    let out = czjump(&["verify", "--suite", "scalar-canonical"]);
    assert_eq!(exit_code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("suite scalar-canonical: pass"));
    assert!(!stdout.contains("suite analyzer-window"));
}

#[test]
fn corrupted_fixture_is_input_error() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("broken.cat");
    std::fs::write(&path, "schema 1\nn 3\nfield 3\nprovenance ellipsoid\nalpha ???\n").unwrap();
    let out = czjump(&[
        "verify",
        "--suite",
        "scalar-canonical",
        "--fixture",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn convention_switch_is_exposed() {
    let out = czjump(&[
        "index",
        "fixtures/sdm_candidate.cat",
        "--k-max",
        "2",
        "--convention",
        "reversal",
    ]);
    assert_eq!(exit_code(&out), 0);
}

#[test]
fn index_report_pins_first_iterate_values() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("index.json");
    let out = czjump(&[
        "index",
        "fixtures/ellipsoid_sqrt3.cat",
        "--k-min",
        "1",
        "--k-max",
        "3",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rows = report["rows"].as_array().unwrap();
    let find = |orbit: &str, k: i64| {
        rows.iter()
            .find(|r| r["orbit"] == orbit && r["k"] == k)
            .unwrap_or_else(|| panic!("{orbit} k={k}"))
    };
    assert_eq!(find("x1", 1)["mu_minus"], 22);
    assert_eq!(find("x1", 1)["mu_plus"], 22);
    assert_eq!(find("x3", 1)["mu_minus"], 4);
    assert_eq!(find("x2", 1)["mean_index"], "6");
    assert_eq!(find("x1", 1)["mean_index"], "12+6*sqrt(3)");
    let convexity = report["convexity"].as_array().unwrap();
    let margin = |orbit: &str| {
        convexity
            .iter()
            .find(|r| r["orbit"] == orbit)
            .unwrap()["margin"]
            .as_i64()
            .unwrap()
    };
    assert_eq!(margin("x1"), 18);
    assert_eq!(margin("x3"), 0);
}

#[test]
fn jump_binary_full_flag_run_on_main_fixture() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("sol.json");
    let out = czjump(&[
        "jump",
        "fixtures/ellipsoid_sqrt3.cat",
        "--m",
        "2",
        "--n-div",
        "2",
        "--epsilon",
        "1/1000",
        "--eta",
        "1/20",
        "--l0",
        "3",
        "--even-d",
        "--t-max",
        "10000000",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["solution"]["t"], 130_368);
    assert_eq!(report["solution"]["d"], 130_368);
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["config"]["epsilon_tightened"], false);
    // scalars in the canonical literal grammar, no decimals in the body
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.contains("\"1/1000\""));
    let out = czjump(&[
        "analyze",
        "fixtures/ellipsoid_sqrt3.cat",
        "--solution",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
}
