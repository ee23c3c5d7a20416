//! End-to-end checks of the `csa` binary: flag handling, output formats and
//! exit statuses.

use std::process::{Command, Output};

fn csa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn bound_single_rate_json() {
    let out = csa(&["bound", "--rate", "0.4545454545454546"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let g_bar = json["g_bar"].as_f64().unwrap();
    assert!((g_bar - 0.843).abs() < 0.001, "g_bar = {g_bar}");
}

#[test]
fn bound_curve_csv_row_count() {
    let out = csa(&[
        "bound", "--curve", "--rmin", "0.05", "--rmax", "0.95", "--steps", "19",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("rate,g_bar"));
    assert_eq!(lines.count(), 19);
}

#[test]
fn bound_rejects_out_of_range_rate() {
    let out = csa(&["bound", "--rate", "1.5"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("rate"));
}

#[test]
fn threshold_preset_json() {
    let out = csa(&["threshold", "--preset", "rep2"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let g_star = json["g_star"].as_f64().unwrap();
    assert!((g_star - 0.5).abs() < 0.002, "g_star = {g_star}");
    let bracket = json["bracket"].as_array().unwrap();
    assert!(bracket[0].as_f64().unwrap() <= g_star);
    assert!(g_star <= bracket[1].as_f64().unwrap());
    assert!((json["rate"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn threshold_from_file_matches_preset(
) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dist.json");
    let content = r#"{
        "k": 1,
        "entries": [
            {"family": "repetition", "n": 2, "lambda": 0.8},
            {"family": "repetition", "n": 3, "lambda": 0.2}
        ]
    }"#;
    std::fs::write(&path, content).unwrap();
    let from_file = csa(&["threshold", "--file", path.to_str().unwrap()]);
    assert!(from_file.status.success());
    let from_preset = csa(&["threshold", "--preset", "lambda5"]);
    assert_eq!(stdout(&from_file), stdout(&from_preset));
    let json: serde_json::Value = serde_json::from_str(&stdout(&from_file)).unwrap();
    let g_star = json["g_star"].as_f64().unwrap();
    assert!((g_star - 0.6238).abs() < 0.002, "g_star = {g_star}");
}

#[test]
fn threshold_degenerate_preset_warns() {
    let out = csa(&["threshold", "--preset", "rep1"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["g_star"].as_f64().unwrap(), 0.0);
    assert_eq!(json["degenerate"].as_bool(), Some(true));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rate-1"));
}

#[test]
fn exit_chart_csv_shape() {
    let out = csa(&[
        "exit-chart", "--preset", "rep3", "--g", "0.5", "--samples", "11",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,f_b,f_s_inv"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11);
    assert!(rows[0].starts_with("0.00000000000e0,0.00000000000e0,0.00000000000e0"));
}

#[test]
fn simulate_single_point_csv() {
    let out = csa(&[
        "simulate", "--preset", "rep3", "--slots", "100", "--g", "0.5", "--frames", "8",
        "--errors", "1000000", "--seed", "42",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("g,plr,plr_lo,plr_hi,throughput,frames,mean_iters")
    );
    let row = lines.next().unwrap();
    assert_eq!(row.split(',').count(), 7);
    assert!(row.contains(",8,"), "frame count column: {row}");
    // same seed reproduces byte-identical output
    let again = csa(&[
        "simulate", "--preset", "rep3", "--slots", "100", "--g", "0.5", "--frames", "8",
        "--errors", "1000000", "--seed", "42",
    ]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn simulate_grid_rows() {
    let out = csa(&[
        "simulate", "--preset", "rep2", "--slots", "50", "--gmin", "0.2", "--gmax", "0.4",
        "--gstep", "0.1", "--frames", "4", "--errors", "1000000",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 4); // header + 3 grid points
}

#[test]
fn optimize_writes_report_and_distribution() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let dist_path = dir.path().join("champion.json");
    let out = csa(&[
        "optimize", "--k", "1", "--family", "rep", "--lengths", "2,3", "--rate",
        "0.4545454545454546", "--pop", "8", "--gens", "2", "--seed", "7", "--out",
        report_path.to_str().unwrap(), "--dist-out", dist_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["problem"]["k"].as_u64(), Some(1));
    assert_eq!(report["history"].as_array().unwrap().len(), 2);
    let champion = &report["champion"]["entries"];
    let l0 = champion[0]["lambda"].as_f64().unwrap();
    assert!((l0 - 0.8).abs() < 1e-6);
    // the side file parses as a distribution and feeds back into threshold
    let check = csa(&["threshold", "--file", dist_path.to_str().unwrap()]);
    assert!(check.status.success());
}

#[test]
fn presets_lists_known_names() {
    let out = csa(&["presets"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in ["rep2", "rep3", "lambda1", "lambda5", "lambda6"] {
        assert!(text.contains(name), "missing {name} in listing");
    }
}

#[test]
fn unknown_preset_fails_cleanly() {
    let out = csa(&["threshold", "--preset", "lambda9"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown preset"));
}

#[test]
fn output_file_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bound.csv");
    let out = csa(&[
        "bound", "--curve", "--rmin", "0.1", "--rmax", "0.9", "--steps", "5", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written.lines().count(), 6);
}
