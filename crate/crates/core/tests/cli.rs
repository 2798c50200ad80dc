use std::path::Path;
use std::process::{Command, Output};

use landau::eigen::{self, Family};
use landau::grid::{self, GridField};
use landau::units::PhysicalParams;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_landau"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn eigencheck_passes_with_defaults() {
    let out = run(&["eigencheck"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["suite"], "eigencheck");
    assert_eq!(r["all_passed"], true);
    assert_eq!(r["checks"].as_array().unwrap().len(), 4 * 11 * 4 * 2);
    let text = String::from_utf8(out.stdout).unwrap();
    let order: Vec<usize> = ["\"suite\"", "\"params\"", "\"checks\"", "\"all_passed\""]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
    assert!(order.windows(2).all(|w| w[0] < w[1]));
    assert!(String::from_utf8(out.stderr).unwrap().contains("352/352"));
}

#[test]
fn phase_at_one_flux_quantum() {
    let dir = tempfile::tempdir().unwrap();
    let root = std::f64::consts::TAU.sqrt();
    let cfg = write(
        dir.path(),
        "phase.json",
        &format!(r#"{{"suite": "phase", "lam1": {root}, "lam2": {root}}}"#),
    );
    let out = run(&["phase", "--config", &cfg]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    for check in r["checks"].as_array().unwrap() {
        assert_eq!(check["pass"], true);
        let detail = check["detail"].as_str().unwrap_or("");
        if check["name"].as_str().unwrap().starts_with("phase:") {
            assert!(
                detail.starts_with("phase=(1e0, ") && detail.ends_with("k=1"),
                "{detail}"
            );
        }
    }
}

#[test]
fn unknown_key_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", r#"{"nodes": 64, "colour": "blue"}"#);
    let out_dir = dir.path().join("out");
    let out = run(&[
        "grid-export",
        "--config",
        &cfg,
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
    assert!(!out_dir.exists());
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let wrong_suite = write(dir.path(), "s.json", r#"{"suite": "ladder"}"#);
    let bad_params = write(dir.path(), "p.json", r#"{"m": 0}"#);
    let not_json = write(dir.path(), "n.json", "{");
    for args in [
        vec!["flux", "--config", &wrong_suite],
        vec!["flux", "--params", &bad_params],
        vec!["flux", "--config", &not_json],
        vec!["flux", "--config", "/nonexistent/config.json"],
        vec!["flux", "--tol", "hall_relative=1e-3"],
        vec!["flux", "--tol", "nonsense=1e-20"],
        vec!["flux", "--tol", "hall_relative"],
        vec!["no-such-suite"],
        vec![],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn failing_check_exits_1() {
    let out = run(&["eigencheck", "--tol", "eigen_residual=1e-300"]);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["all_passed"], false);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let params = write(
        dir.path(),
        "p.json",
        r#"{"m": 1.3, "q": -0.7, "B": 2.1, "c": 1.1, "hbar": 0.9}"#,
    );
    let out_dir = dir.path().join("reports");
    let a = run(&[
        "classical",
        "--params",
        &params,
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    let b = run(&["classical", "--params", &params]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        std::fs::read(out_dir.join("classical.json")).unwrap(),
        a.stdout
    );
    assert_eq!(report(&a)["params"]["hbar"], 0.9);
}

#[test]
fn grid_export_reloads_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "g.json",
        r#"{"family": "symmetric-second", "n": 2, "lam": 1.5, "nodes": 48, "file": "field.csv"}"#,
    );
    let out = run(&[
        "grid-export",
        "--config",
        &cfg,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read(dir.path().join("field.csv")).unwrap();
    assert!(text.starts_with(b"x,y,re,im\n"));
    let field = GridField::read_csv(text.as_slice()).unwrap();
    let p = PhysicalParams::natural();
    let g = grid::verification_grid(Family::SYMMETRIC_SECOND, 1.5, &p, 48).unwrap();
    let direct = grid::sample(
        &eigen::eigenfunction(Family::SYMMETRIC_SECOND, 2, 1.5, &p).unwrap(),
        &g,
    )
    .unwrap();
    assert_eq!(field.grid(), direct.grid());
    assert_eq!(field.values(), direct.values());
    assert!(dir.path().join("grid-export.json").exists());
}

#[test]
fn classical_export_writes_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"gauge": "symmetric", "steps_per_period": 1000, "periods": 2}"#,
    );
    let out = run(&[
        "classical-export",
        "--config",
        &cfg,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(dir.path().join("trajectory_symmetric.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x,y,px,py,c1,c2,H"));
    assert_eq!(lines.count(), 2001);
}

#[test]
fn help_exits_0() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("gauge-compare"));
}
