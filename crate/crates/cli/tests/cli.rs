//! End-to-end runs of the `barrierclock` binary.

use std::process::{Command, Output};

use barrierclock::weaktimes::conditional_times_rectangular;
use barrierclock::UnitSystem;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_barrierclock")).args(args).output().expect("binary runs")
}

fn run_with_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_barrierclock"))
        .args(args)
        .env("BARRIERCLOCK_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Rows of a CSV document as (header, numeric-or-empty cells).
fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn times_report_is_consistent() {
    let out = run(&["times", "--barrier", "1,10", "--energy", "0.5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let ct = conditional_times_rectangular(1.0, 10.0, 0.5, UnitSystem::default()).unwrap();
    let tau_t = ct.tau_t.unwrap();
    let close = |a: f64, b: f64| (a - b).abs() < 1e-12 * b.abs();
    assert!(close(v["tau_T"]["re"].as_f64().unwrap(), tau_t.re()));
    assert!(close(v["tau_T"]["im"].as_f64().unwrap(), tau_t.im()));
    assert!(close(v["tau_d"].as_f64().unwrap(), ct.tau_d));
    assert_eq!(v["unitarity_check"], true);
    assert_eq!(v["identity_check"], true);
    assert_eq!(v["tau_g_reference"], "hbar d/dE [arg t + k D]");
    assert!(v["tau_R_reason"].is_null());
}

#[test]
fn free_profile_reports_undefined_reflection_time() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("free.json");
    std::fs::write(&path, r#"[{"x_left": -1.0, "x_right": 1.0, "V": 0.0}]"#).unwrap();
    let out = run(&["times", "--profile", path.to_str().unwrap(), "--energy", "0.5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["tau_R"].is_null());
    assert_eq!(v["tau_R_reason"], "reflection_vanishes");
    assert!((v["tau_T"]["re"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        vec!["times", "--barrier", "1", "--energy", "1"],
        vec!["times", "--barrier", "1,1", "--energy", "-1"],
        vec!["times", "--barrier", "1,1"],
        vec!["sweep", "--barrier", "1,1", "--energy", "0.5", "--param", "d", "--range", "1:2"],
        vec!["density", "--barrier", "1,1", "--energy", "0.5", "--channel", "q", "--xrange", "0:1:2"],
        vec!["times", "--profile", "/nonexistent/profile.json", "--energy", "0.5"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = run_with_threads(&["verify", "--cases", "1"], "zero");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reflected_density_follows_transmission_phase() {
    let out = run(&["density", "--barrier", "1,2", "--energy", "0.4", "--channel", "R", "--xrange", "1:8:400"]);
    assert!(out.status.success());
    let (header, rows) = csv(&stdout(&out));
    assert_eq!(header, ["x", "re", "im", "reason"]);
    let times = run(&["times", "--barrier", "1,2", "--energy", "0.4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&times)).unwrap();
    let k = v["k"].as_f64().unwrap();
    let arg_t = v["t"]["im"].as_f64().unwrap().atan2(v["t"]["re"].as_f64().unwrap());

    let (mut ss, mut sc, mut cc, mut ys, mut yc) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for row in &rows {
        let x: f64 = row[0].parse().unwrap();
        let y: f64 = row[1].parse().unwrap();
        let (s, c) = (2.0 * k * x).sin_cos();
        ss += s * s;
        sc += s * c;
        cc += c * c;
        ys += y * s;
        yc += y * c;
    }
    let det = ss * cc - sc * sc;
    let phi = ((yc * ss - ys * sc) / det).atan2((ys * cc - yc * sc) / det);
    let pi = std::f64::consts::PI;
    let mut d = (phi - arg_t).rem_euclid(pi);
    if d > pi / 2.0 {
        d -= pi;
    }
    assert!(d.abs() < 1e-6, "phase offset {d}");
}

#[test]
fn squeeze_sweep_scales_out_of_plane_time() {
    let out = run(&[
        "clock", "--barrier", "1,5", "--energy", "0.5", "--spin", "20", "--omega", "1e-5", "--squeeze-sweep", "3.16:0.3:6",
    ]);
    assert!(out.status.success());
    let (header, rows) = csv(&stdout(&out));
    let (w, y, z) = (column(&header, "width"), column(&header, "tau_y_re"), column(&header, "tau_z"));
    let vals: Vec<(f64, f64, f64)> =
        rows.iter().map(|r| (r[w].parse().unwrap(), r[y].parse().unwrap(), r[z].parse().unwrap())).collect();
    let y0 = vals[0].1;
    for pair in vals.windows(2) {
        assert!(pair[1].2.abs() < pair[0].2.abs());
    }
    for &(width, tau_y, tau_z) in &vals {
        assert!((tau_y - y0).abs() < 1e-3 * y0.abs());
        // tau_z / width^2 is constant
        let first = vals[0].2 / (vals[0].0 * vals[0].0);
        assert!((tau_z / (width * width) - first).abs() < 1e-2 * first.abs());
    }
}

#[test]
fn width_sweep_in_json_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("sweep.dat");
    let out = run(&[
        "sweep", "--barrier", "1,1", "--energy", "0.5", "--param", "d", "--range", "1:4:4", "--format", "json",
        "--plot-data", plot.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.len(), 4);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row["d"].as_f64().unwrap(), 1.0 + i as f64);
        let w = row["w_T"].as_f64().unwrap() + row["w_R"].as_f64().unwrap();
        assert!((w - 1.0).abs() < 1e-12);
    }
    let data = std::fs::read_to_string(&plot).unwrap();
    assert!(data.starts_with("# d energy transmission"));
    assert_eq!(data.lines().count(), 5);
}

#[test]
fn resonance_sweep_marks_missing_reflection_time() {
    // k2 d = pi at E = V0 + pi^2 / 8 for d = 2
    let e = 1.0 + std::f64::consts::PI.powi(2) / 8.0;
    let range = format!("{e}:{e}:1");
    let out = run(&["sweep", "--barrier", "1,2", "--energy", "1", "--param", "energy", "--range", &range]);
    assert!(out.status.success());
    let (header, rows) = csv(&stdout(&out));
    let row = &rows[0];
    assert_eq!(row[column(&header, "tau_R_re")], "");
    assert_eq!(row[column(&header, "reason")], "tau_R:reflection_vanishes");
}

#[test]
fn pointer_sweep_reports_weak_limit() {
    let out = run(&["pointer", "--barrier", "1,5", "--energy", "0.5", "--g0-sweep", "1e-6:1e-5:2", "--log"]);
    assert!(out.status.success());
    let (header, rows) = csv(&stdout(&out));
    let ratio = column(&header, "dQ_over_g0");
    let ct = conditional_times_rectangular(1.0, 5.0, 0.5, UnitSystem::default()).unwrap();
    let re = ct.tau_t.unwrap().re();
    for row in &rows {
        let v: f64 = row[ratio].parse().unwrap();
        assert!((v - re).abs() < 1e-4 * re);
    }
}

#[test]
fn verify_passes_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reports.jsonl");
    let out = run(&["verify", "--seed", "7", "--cases", "500", "--output", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() >= 500);
    for line in &lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pass"], true);
        for field in ["quantity", "primary", "oracle", "abs_error", "rel_error", "tolerance", "relative"] {
            assert!(!v[field].is_null(), "{field} missing in {line}");
        }
    }
}

#[test]
fn zero_tolerance_fails_verification() {
    let out = run(&["verify", "--seed", "7", "--cases", "3", "--tolerance", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
}

#[test]
fn output_is_independent_of_thread_count() {
    let args = ["verify", "--seed", "11", "--cases", "40"];
    let one = run_with_threads(&args, "1");
    let four = run_with_threads(&args, "4");
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);

    let sweep = ["sweep", "--barrier", "1,3", "--energy", "0.5", "--param", "energy-frac", "--range", "0.1:2:25"];
    assert_eq!(run_with_threads(&sweep, "1").stdout, run_with_threads(&sweep, "3").stdout);
}
