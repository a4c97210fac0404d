use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

const LIMITS: &str =
    r#""limits": {"j_max": 6500, "a_max": 13, "v_max": 0.6, "j_rm": 6000, "alpha_rm": 9, "omega_rm": 2.61}"#;

fn config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn experiment(dir: &TempDir, distance: f64) -> PathBuf {
    let body = format!(
        r#"{{
  "object": {{"mass_kg": 1.0, "radius_m": 0.004, "height_m": 0.2}},
  "baseline_object": {{"mass_kg": 1.0, "radius_m": 0.003, "height_m": 0.2}},
  {LIMITS},
  "target": {{"distance_m": {distance}, "theta_rad": 0.39269908169872414}}
}}"#
    );
    config(dir, "experiment.json", &body)
}

fn waiter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_waiter")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn plan_writes_csv_matching_summary() {
    let dir = TempDir::new().unwrap();
    let cfg = experiment(&dir, 0.5);
    let csv = dir.path().join("t.csv");
    let out = waiter(&["plan", "--config", s(&cfg), "--out", s(&csv)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = stdout_json(&out);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,phi,omega,alpha,jerk_rot,a,v,s,x,y,z,pitch"));
    let last: Vec<f64> = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|f| f.parse().unwrap())
        .collect();
    assert!((last[0] - summary["t_total"].as_f64().unwrap()).abs() < 1e-9);
    assert!((last[7] - 0.5).abs() < 1e-6);
    assert_eq!(text.lines().count() - 1, summary["samples"].as_u64().unwrap() as usize);
    assert!(summary["phi_rm"].as_f64().unwrap() > 0.0);
    assert!(!text.contains('\r'));
}

#[test]
fn plan_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = experiment(&dir, 0.5);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let ra = waiter(&["plan", "--config", s(&cfg), "--out", s(&a)]);
    let rb = waiter(&["plan", "--config", s(&cfg), "--out", s(&b)]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let strip = |o: &Output| String::from_utf8_lossy(&o.stdout).replace(s(&a), "").replace(s(&b), "");
    assert_eq!(strip(&ra), strip(&rb));
}

#[test]
fn zero_distance_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = experiment(&dir, 0.0);
    let out = waiter(&["plan", "--config", s(&cfg)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("target_distance"));
}

#[test]
fn tiny_distance_is_infeasible() {
    let dir = TempDir::new().unwrap();
    let cfg = experiment(&dir, 1e-9);
    assert_eq!(waiter(&["plan", "--config", s(&cfg)]).status.code(), Some(2));
}

#[test]
fn unknown_keys_and_bad_flags_are_config_errors() {
    let dir = TempDir::new().unwrap();
    let cfg = config(
        &dir,
        "bad.json",
        &format!(r#"{{"object": {{"mass_kg": 1, "radius_mm": 8, "height_m": 0.2}}, {LIMITS}}}"#),
    );
    let out = waiter(&["plan", "--config", s(&cfg)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("radius_mm"));
    let good = experiment(&dir, 0.5);
    assert_eq!(
        waiter(&["plan", "--config", s(&good), "--dt", "-1"]).status.code(),
        Some(1)
    );
    assert_eq!(waiter(&["plan"]).status.code(), Some(1));
    assert_eq!(
        waiter(&["sweep", "--config", s(&good), "--grid", "1:2"]).status.code(),
        Some(1)
    );
}

#[test]
fn validate_round_trip_and_failures() {
    let dir = TempDir::new().unwrap();
    let cfg = experiment(&dir, 0.5);
    let csv = dir.path().join("t.csv");
    assert_eq!(
        waiter(&["plan", "--config", s(&cfg), "--out", s(&csv)]).status.code(),
        Some(0)
    );
    let out = waiter(&["validate", "--config", s(&cfg), "--trajectory", s(&csv)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("FAIL"));

    // Triple the acceleration column over the first half of the file.
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    let half = rows.len() / 2;
    let tampered: Vec<String> = rows
        .iter()
        .enumerate()
        .map(|(i, line)| {
            if i == 0 || i > half {
                return line.to_string();
            }
            let mut f: Vec<String> = line.split(',').map(str::to_string).collect();
            f[5] = format!("{}", 3.0 * f[5].parse::<f64>().unwrap());
            f.join(",")
        })
        .collect();
    let bad = dir.path().join("tampered.csv");
    std::fs::write(&bad, tampered.join("\n") + "\n").unwrap();
    let out = waiter(&["validate", "--config", s(&cfg), "--trajectory", s(&bad)]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("stability at t="), "{err}");

    let cut = dir.path().join("truncated.csv");
    std::fs::write(&cut, rows[..half].join("\n") + "\n").unwrap();
    let out = waiter(&["validate", "--config", s(&cfg), "--trajectory", s(&cut)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("endpoint terminal_velocity"));
}

#[test]
fn baseline_plan_validates() {
    let dir = TempDir::new().unwrap();
    let cfg = experiment(&dir, 0.5);
    let csv = dir.path().join("b.csv");
    let out = waiter(&["baseline", "--config", s(&cfg), "--out", s(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["phi_rm"].as_f64(), Some(0.0));
    let out = waiter(&["validate", "--config", s(&cfg), "--trajectory", s(&csv)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn compare_reports_both_times() {
    let dir = TempDir::new().unwrap();
    let cfg = experiment(&dir, 0.5);
    let out = waiter(&["compare", "--config", s(&cfg)]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let with = report["t_with_rotation"].as_f64().unwrap();
    let without = report["t_without_rotation"].as_f64().unwrap();
    let improvement = report["improvement"].as_f64().unwrap();
    assert!((improvement - (1.0 - with / without)).abs() < 1e-12);
    assert!((0.37..=0.57).contains(&improvement), "{improvement}");
    assert_eq!(report["radius_without_rotation"].as_f64(), Some(0.003));
}

#[test]
fn compare_short_move_without_tilt_is_neutral() {
    // With a_max below the level limit the fit returns no tilt and both
    // planners coincide.
    let dir = TempDir::new().unwrap();
    let cfg = config(
        &dir,
        "slow.json",
        r#"{
  "object": {"mass_kg": 1.0, "radius_m": 0.008, "height_m": 0.2},
  "limits": {"j_max": 6500, "a_max": 0.5, "v_max": 0.6, "j_rm": 6000, "alpha_rm": 9, "omega_rm": 2.61},
  "target": {"x_m": 0.01, "y_m": 0.0, "z_m": 0.0}
}"#,
    );
    let report = stdout_json(&waiter(&["compare", "--config", s(&cfg)]));
    assert_eq!(report["improvement"].as_f64(), Some(0.0));
    assert_eq!(report["accel_tilt"].as_f64(), Some(0.0));
}

#[test]
fn sweep_emits_one_row_per_grid_point() {
    let dir = TempDir::new().unwrap();
    let cfg = experiment(&dir, 0.5);
    let csv = dir.path().join("sweep.csv");
    let out = waiter(&[
        "sweep",
        "--config",
        s(&cfg),
        "--grid",
        "0:0.4:2,0:0.3:2",
        "--out",
        s(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,y,t_rot,t_norot,improvement,note");
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[1], "0,0,,,,origin");
    assert!(lines[2].starts_with("0,0.3,"));
    assert!(lines[3].starts_with("0.4,0,"));
    let summary = stdout_json(&out);
    assert_eq!(summary["points"].as_u64(), Some(4));
    assert_eq!(summary["evaluated"].as_u64(), Some(3));

    let seq = dir.path().join("seq.csv");
    let args = [
        "sweep",
        "--config",
        s(&cfg),
        "--grid",
        "0:0.4:2,0:0.3:2",
        "--sequential",
        "--out",
        s(&seq),
    ];
    assert_eq!(waiter(&args).status.code(), Some(0));
    assert_eq!(std::fs::read(&csv).unwrap(), std::fs::read(&seq).unwrap());
}
