//! End-to-end runs of the `hbps` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hbps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hbps"))
        .args(args)
        .env_remove("HBPS_CACHE_DIR")
        .output()
        .expect("hbps runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn cache_files(dir: &Path) -> usize {
    std::fs::read_dir(dir).unwrap().filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "json")).count()
}

#[test]
fn tables_match_goldens_and_exit_zero() {
    let out = hbps(&["tables", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("\"matches_golden\": true").count(), 3);
    assert_eq!(text.matches("\"matches_paper\": true").count(), 3);
}

#[test]
fn betti_table_one_matches_golden_bytes() {
    let out = hbps(&["betti", "--ell", "1", "--rank", "3", "--c1", "-1,0", "--J", "1,0,plus", "--c2-min", "2", "--c2-max", "5"]);
    assert!(out.status.success());
    let golden = std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/table1.json")).unwrap();
    assert_eq!(out.stdout, golden);
}

#[test]
fn cached_and_fresh_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["betti", "--rank", "3", "--c1", "-1,1", "--c2-min", "2", "--c2-max", "4", "--cache-dir", d];
    let fresh = hbps(&args);
    assert_eq!(cache_files(dir.path()), 1);
    let cached = hbps(&args);
    assert!(fresh.status.success() && cached.status.success());
    assert_eq!(fresh.stdout, cached.stdout);
    // a different configuration gets its own entry
    let other = hbps(&["betti", "--rank", "3", "--c1", "-1,1", "--c2-min", "2", "--c2-max", "3", "--cache-dir", d]);
    assert!(other.status.success());
    assert_eq!(cache_files(dir.path()), 2);
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hbps"))
        .args(["euler", "--rank", "1", "--c1", "0,0", "--c2-min", "0", "--c2-max", "1"])
        .env("HBPS_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(cache_files(dir.path()), 1);
}

#[test]
fn results_do_not_depend_on_jobs() {
    let base = ["betti", "--rank", "3", "--c1", "-1,2", "--c2-min", "3", "--c2-max", "5"];
    let one = hbps(&[&base[..], &["--jobs", "1"]].concat());
    let four = hbps(&[&base[..], &["--jobs", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn rank_one_series_is_one() {
    let v = stdout_json(&hbps(&["series", "--rank", "1", "--c1", "0,0", "--qmax", "3"]));
    assert_eq!(v["terms"], serde_json::json!([["0", [[0, "1"]]]]));
    assert_eq!(v["den"], serde_json::json!([]));
}

#[test]
fn vanishing_chamber_gives_empty_series() {
    for ell in ["1", "2", "3"] {
        for c1 in ["1,0", "1,1"] {
            let v = stdout_json(&hbps(&["series", "--ell", ell, "--c1", c1, "--J", "0,1,plus", "--qmax", "4"]));
            assert_eq!(v["terms"], serde_json::json!([]), "ell {ell} c1 {c1}");
        }
    }
}

/// Betti numbers of `S^[n]` for `n ≤ top` from Göttsche's product
/// `Π_k Π_{i=0,2,4} (1 − z^{2k−2+i} tᵏ)^{−b_i}` with `(b₀, b₂, b₄) = (1, 2, 1)`.
fn goettsche(top: usize) -> Vec<Vec<i64>> {
    // series[n][d] = coefficient of tⁿ z^d
    let width = 4 * top + 1;
    let mut series = vec![vec![0i64; width]; top + 1];
    series[0][0] = 1;
    for k in 1..=top {
        for (i, b) in [(0usize, 1), (2, 2), (4, 1)] {
            let shift = 2 * k - 2 + i;
            for _ in 0..b {
                // multiply by 1/(1 − z^shift t^k) = Σ_j z^{j·shift} t^{jk}
                for n in k..=top {
                    for d in shift..width {
                        series[n][d] += series[n - k][d - shift];
                    }
                }
            }
        }
    }
    series.into_iter().enumerate().map(|(n, row)| row[..=4 * n].to_vec()).collect()
}

#[test]
fn hilbert_scheme_rows() {
    let v = stdout_json(&hbps(&["betti", "--rank", "1", "--c1", "0,0", "--c2-min", "0", "--c2-max", "3"]));
    let betti: Vec<Vec<i64>> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["betti"].as_array().unwrap().iter().map(|b| b.as_i64().unwrap()).collect())
        .collect();
    assert_eq!(betti, goettsche(3));
    assert_eq!(betti[2], vec![1, 0, 3, 0, 6, 0, 3, 0, 1]);
}

#[test]
fn figure_one_walls() {
    let v = stdout_json(&hbps(&["walls", "--rank", "2", "--c1", "-1,1", "--c2-min", "2", "--c2-max", "2"]));
    let walls = v[0]["walls"].as_array().unwrap();
    let ratios: Vec<&str> = walls.iter().map(|w| w["ratio"].as_str().unwrap()).collect();
    assert_eq!(ratios, ["1:3", "1:1"]);
    let decompositions: usize = walls.iter().map(|w| w["decompositions"].as_array().unwrap().len()).sum();
    assert_eq!(decompositions, 3);
}

#[test]
fn walls_empty_below_bogomolov() {
    let v = stdout_json(&hbps(&["walls", "--rank", "2", "--c1", "-1,1", "--c2-min", "-3", "--c2-max", "-3"]));
    assert_eq!(v[0]["walls"], serde_json::json!([]));
}

#[test]
fn wallcross_two_paths_agree() {
    let v = stdout_json(&hbps(&[
        "wallcross", "--rank", "3", "--c1", "-1,0", "--from", "1,2,plus", "--via", "1,1,minus", "--J", "1,0,plus",
        "--c2-min", "2", "--c2-max", "3",
    ]));
    assert_eq!(v["two_path"]["holds"], Value::Bool(true));
}

#[test]
fn blowup_suite_passes_with_expected_failure() {
    let v = stdout_json(&hbps(&["check", "blowup", "--qmax", "4"]));
    assert_eq!(v["pass"], Value::Bool(true));
    let unexpected_hold = v["items"].as_array().unwrap().iter().any(|i| i["holds"] == Value::Bool(false));
    assert!(unexpected_hold, "the l=2 Appell relations should fail");
}

#[test]
fn errors_are_structured_with_exit_two() {
    let out = hbps(&["betti", "--J", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "lattice");
    let out = hbps(&["betti", "--rank", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hbps(&["betti", "--ell", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_and_markdown_render() {
    let out = hbps(&["euler", "--rank", "1", "--c1", "0,0", "--c2-min", "0", "--c2-max", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "ell,r,c1,c2,J,dim,euler");
    assert!(lines[3].ends_with(",4,14"), "{}", lines[3]);
    let out = hbps(&["series", "--rank", "2", "--c1", "1,1", "--qmax", "2", "--format", "md"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("denominator:"));
}
