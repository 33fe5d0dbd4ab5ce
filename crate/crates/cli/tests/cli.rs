use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn relspin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relspin")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("relspin-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.json");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn sweep_to_stdout() {
    let dir = scratch("stdout");
    let cfg = write_config(&dir, r#"{"packet": {"family": "gaussian", "mass": 1, "sigma_p": 0.05}, "rapidities": [0, 1]}"#);
    let out = relspin(&["sweep", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "beta,mu_x,mu_y,mu_z,mu_norm,purity,entropy_bits,converged");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("inf,"));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn sweep_to_files_with_config_echo() {
    let dir = scratch("files");
    let cfg = write_config(
        &dir,
        r#"{"packet": {"family": "gaussian", "mass": 1, "sigma_p": 0.1}, "boost_axis": [1, 0, 0], "rapidities": [0.5]}"#,
    );
    let csv = dir.join("out.csv");
    let out = relspin(&["sweep", "--config", &cfg, "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(fs::read_to_string(&csv).unwrap().starts_with("beta,"));
    let echo = fs::read_to_string(dir.join("out.csv.config.json")).unwrap();
    assert!(echo.contains("\"experiment\": \"sweep\"") && echo.contains("\"quadrature\""));

    let json = dir.join("out.json");
    let out = relspin(&["sweep", "--config", &cfg, "--out", json.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = relspin::experiments::read_report(&json).unwrap();
    assert_eq!(report.records().unwrap().len(), 1);
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn config_errors_exit_with_2() {
    let dir = scratch("config");
    for text in [
        r#"{"packet": {"family": "gaussian", "mass": 1, "sigma_p": 0.1}, "rapidities": [1, 0]}"#,
        r#"{"packet": {"family": "gaussian", "mass": 1, "sigma_p": 0.1}, "rapidites": [0]}"#,
        r#"{"packet": {"family": "gaussian", "mass": -1, "sigma_p": 0.1}, "rapidities": [0]}"#,
        "not json",
    ] {
        let cfg = write_config(&dir, text);
        let out = relspin(&["sweep", "--config", &cfg]);
        assert_eq!(out.status.code(), Some(2), "{text}");
        assert!(!out.stderr.is_empty());
    }
    let cfg = write_config(&dir, r#"{"packet": {"family": "gaussian", "mass": 1, "sigma_p": 0.2}}"#);
    let out = relspin(&["bound-check", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("packet.sigma_p"));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn unreachable_target_exits_with_3() {
    let dir = scratch("target");
    let cfg = write_config(
        &dir,
        r#"{"packet": {"family": "ring", "mass": 1, "radius": 0.5, "radial_width": 0.05, "longitudinal_width": 0.05}}"#,
    );
    let out = relspin(&["depolarize", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("false"));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn non_convergence_flags_the_row_and_exits_with_4() {
    let dir = scratch("converge");
    // panels too coarse for the azimuthal structure of a perpendicular boost
    let cfg = write_config(
        &dir,
        r#"{"packet": {"family": "ring", "mass": 1, "radius": 10, "radial_width": 2, "longitudinal_width": 2},
            "boost_axis": [1, 0, 0], "rapidities": [0, 4], "quadrature": {"panel_widths": 12}}"#,
    );
    let out = relspin(&["sweep", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2, "the run continues past the flagged row");
    assert!(rows[1].starts_with("4,") && rows[1].ends_with(",false"));

    let cfg = write_config(
        &dir,
        r#"{"packet": {"family": "gaussian", "mass": 1, "sigma_p": 0.1}, "rapidities": [1],
            "quadrature": {"panel_widths": 40, "truncation_widths": 12, "tolerance": 1e-14}}"#,
    );
    let out = relspin(&["sweep", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("normalization"));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn unreadable_config_is_reported() {
    let out = relspin(&["certify", "--config", "/nonexistent/relspin.json"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/relspin.json"));
}

#[test]
fn shipped_configs_are_valid() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = relspin::experiments::ExperimentConfig::load(&path).unwrap();
        let kind = cfg.experiment.expect("shipped configs name their experiment");
        cfg.resolve(kind).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        seen += 1;
    }
    assert!(seen >= 4);
}
