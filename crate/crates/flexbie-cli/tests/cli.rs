use flexbie_cli::{run, CliError, RunConfig, Scenario};
use serde_json::Value;
use std::path::Path;
use std::process::Command;

const DROPLET: &str = r#"{
  "geometry": [{ "type": "droplet" }],
  "k": 3.0,
  "nu": 0.3333333333333333,
  "discretization": { "n_panels": 4, "order": 16 },
  "analytic": { "source": [1.35, 0.0], "sweep": [4, 8] }
}"#;

fn with(base: &str, patch: &str) -> String {
    let mut v: Value = serde_json::from_str(base).unwrap();
    let p: Value = serde_json::from_str(patch).unwrap();
    for (k, x) in p.as_object().unwrap() {
        v[k] = x.clone();
    }
    v.to_string()
}

fn flexbie(args: &[&str], config: &str, dir: &Path) -> std::process::Output {
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_flexbie"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .env_remove("FLEXBIE_THREADS")
        .output()
        .unwrap()
}

fn config_err(text: &str) -> String {
    match RunConfig::from_json(text) {
        Err(CliError::Config(m)) => m,
        other => panic!("expected a config error, got {other:?}"),
    }
}

#[test]
fn config_errors() {
    assert!(config_err(&with(DROPLET, r#"{"colour": 1}"#)).contains("unknown field"));
    assert!(config_err(&with(DROPLET, r#"{"geometry": [{"type": "droplet", "params": {"x": 1}}]}"#)).contains("unknown field"));
    assert!(config_err(&with(DROPLET, r#"{"geometry": [{"type": "hexagon"}]}"#)).contains("hexagon"));
    assert!(config_err(&with(DROPLET, r#"{"geometry": []}"#)).contains("at least one"));
    assert!(config_err(&with(DROPLET, r#"{"k": -1.0}"#)).contains("positive"));
    assert!(config_err(&with(DROPLET, r#"{"bc": "hinged"}"#)).contains("hinged"));
    assert!(config_err(&with(DROPLET, r#"{"discretization": {"n_panels": 0}}"#)).contains("at least 1"));
    assert!(config_err(&with(DROPLET, r#"{"grid": {"x": [0, 1], "y": [0, 1], "nx": 0, "ny": 3}}"#)).contains("nx"));
    assert!(config_err(r#"{"geometry": [{"type": "droplet"}], "k": 3.0}"#).contains("nu"));
    let c = RunConfig::from_json(DROPLET).unwrap();
    assert_eq!(c.bcs(), ["clamped", "supported", "free"]);
    assert_eq!(c.discretization.order, 16);
}

#[test]
fn array_expands_row_by_row() {
    let c = RunConfig::from_json(&with(
        DROPLET,
        r#"{"geometry": [{"type": "starfish_array", "params": {"count": 7, "columns": 3, "spacing": [2.0, 3.0], "amplitude": 0.3, "arms": 3, "scale": 0.5}}]}"#,
    ))
    .unwrap();
    let curves = c.curves().unwrap();
    assert_eq!(curves.len(), 7);
    assert_eq!(curves[4].transform.translate, flexbie::geometry::Vec2::new(2.0, 3.0));
    assert_eq!(curves.iter().map(|c| c.component_id).collect::<Vec<_>>(), (0..7).collect::<Vec<_>>());
}

#[test]
fn default_measurement_points_rescale_the_curve() {
    let c = RunConfig::from_json(DROPLET).unwrap();
    let p = c.measurement_points().unwrap();
    assert_eq!(p.len(), 12);
    assert!((p[0] - flexbie::geometry::Vec2::new(3.0, -0.6)).norm() < 1e-15);
}

#[test]
fn source_outside_the_scatterer_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = flexbie(&["analytic-test"], &with(DROPLET, r#"{"analytic": {"source": [3.0, 0.0]}}"#), dir.path());
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("boundary data"));
}

#[test]
fn scenario_mismatch_and_bad_thread_env() {
    let dir = tempfile::tempdir().unwrap();
    let out = flexbie(&["scatter"], &with(DROPLET, r#"{"scenario": "analytic-test"}"#), dir.path());
    assert_eq!(out.status.code(), Some(2));
    let cfg = dir.path().join("config.json");
    let out = Command::new(env!("CARGO_BIN_EXE_flexbie"))
        .args(["analytic-test", "--config"])
        .arg(&cfg)
        .env("FLEXBIE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = flexbie(&["analytic-test"], "{", dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solver_failure_on_finest_level_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = with(DROPLET, r#"{"k": 8.0, "bc": "supported", "analytic": {"source": [1.35, 0.0], "sweep": [2]}}"#);
    let out = flexbie(&["analytic-test"], &cfg, dir.path());
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let table = std::fs::read_to_string(dir.path().join("out/analytic_test.csv")).unwrap();
    assert!(table.contains("singular"));
}

#[test]
fn failing_checks_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = with(DROPLET, r#"{"checks": {"radii": [1.0], "nus": [0.0], "limit_tol": 1e-30}}"#);
    let out = flexbie(&["kernel-check"], &cfg, dir.path());
    assert_eq!(out.status.code(), Some(4));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/checks.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], false);
    assert!(report["checks"].as_array().unwrap().iter().any(|c| c["passed"] == false));
}

#[test]
fn analytic_run_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = with(DROPLET, r#"{"bc": "free"}"#);
    let mut runs = Vec::new();
    for threads in ["1", "2"] {
        let out = flexbie(&["analytic-test", "--threads", threads], &cfg, dir.path());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let csv = std::fs::read(dir.path().join("out/analytic_test.csv")).unwrap();
        let mut meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/analytic_test.json")).unwrap()).unwrap();
        meta.as_object_mut().unwrap().remove("timings");
        runs.push((csv, meta));
    }
    assert_eq!(runs[0], runs[1]);
    let table = String::from_utf8(runs[0].0.clone()).unwrap();
    assert!(table.starts_with("bc,n_panels,nodes,error,l1_norm,condition_1norm,residual,status\n"));
    assert_eq!(table.lines().count(), 3);
}

#[test]
fn scatter_grid_columns_and_mask() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = with(
        DROPLET,
        r#"{"bc": "clamped", "incident": {"type": "plane_wave", "angle": 0.5}, "grid": {"x": [-3.0, 3.0], "y": [0.0, 0.0], "nx": 7, "ny": 1}}"#,
    );
    let c = RunConfig::from_json(&cfg).unwrap();
    let outcome = run(Scenario::Scatter, &c, dir.path()).unwrap();
    assert!(outcome.warnings.is_empty());
    let mut rd = csv::Reader::from_path(dir.path().join("field.csv")).unwrap();
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), ["x", "y", "Re u", "Im u", "|u|", "mask"]);
    let masks: Vec<String> = rd.records().map(|r| r.unwrap()[5].to_string()).collect();
    // the droplet crosses y = 0 near x = ±1.8
    assert_eq!(masks, ["0", "0", "1", "1", "1", "0", "0"]);
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("field.json")).unwrap()).unwrap();
    assert_eq!(meta["nodes"], 64);
    assert!(meta["solve"]["residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn empty_grid_warns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = with(
        DROPLET,
        r#"{"bc": "free", "incident": {"type": "plane_wave", "angle": 0.0}, "grid": {"x": [-0.5, 0.5], "y": [0.0, 0.0], "nx": 3, "ny": 1}}"#,
    );
    let outcome = run(Scenario::Scatter, &RunConfig::from_json(&cfg).unwrap(), dir.path()).unwrap();
    assert_eq!(outcome.warnings.len(), 1);
}

#[test]
fn far_field_and_multi_scatter() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = with(
        DROPLET,
        r#"{"bc": "free", "incident": {"type": "plane_wave", "angle": 0.0},
            "geometry": [{"type": "circle", "params": {"radius": 0.5}, "transform": {"translate": [-1.0, 0.0]}},
                         {"type": "starfish", "params": {"amplitude": 0.2, "arms": 3}, "transform": {"translate": [1.0, 0.0], "scale": 0.5}}],
            "far_field": {"n_theta": 16, "radius": 1000.0, "compare_radius": 500.0}}"#,
    );
    let c = RunConfig::from_json(&cfg).unwrap();
    run(Scenario::MultiScatter, &c, dir.path()).unwrap();
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("multi_scatter.json")).unwrap()).unwrap();
    assert_eq!(meta["components"], 2);
    assert_eq!(meta["solve"]["method"], "gmres");
    assert_eq!(meta["hilbert_off_block_max"], 0.0);
    assert!(meta["radius_stability"]["max_magnitude_difference_relative"].as_f64().unwrap() < 1e-2);
    let rows = csv::Reader::from_path(dir.path().join("far_field.csv")).unwrap().records().count();
    assert_eq!(rows, 16);
    // an interior problem has no far field
    let interior = RunConfig::from_json(&with(&cfg, r#"{"side": "interior"}"#)).unwrap();
    assert!(matches!(run(Scenario::FarField, &interior, dir.path()), Err(CliError::Config(_))));
}
