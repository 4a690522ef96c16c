//! End-to-end tests of the `mzsim` binary: exit codes, CSV shape, and
//! byte-level determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mzsim"))
}

fn config_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/sodium.ini")
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("mzsim-test-{}-{name}", std::process::id()))
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn usage_error_exits_with_2() {
    let output = binary().arg("no-such-command").output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unknown_config_key_is_rejected() {
    let path = temp_path("unknown-key.ini");
    std::fs::write(&path, "unknown_key = 1\n").unwrap();
    let out_path = temp_path("unknown-key.csv");
    let output = binary()
        .args(["fringe-scan", "--config"])
        .arg(&path)
        .arg("--out")
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("unknown key `unknown_key`"));
}

#[test]
fn inconsistent_geometry_is_rejected() {
    let out_path = temp_path("bad-delta.csv");
    let output = binary()
        .args(["fringe-scan", "--config"])
        .arg(config_path())
        .args(["--set", "delta_m=3e-7", "--out"])
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("exceeds grating period"));
}

#[test]
fn field_profile_echoes_the_derived_wave_number() {
    let out_path = temp_path("profile.csv");
    let output = binary()
        .args(["field-profile", "--config"])
        .arg(config_path())
        .args(["--plane", "g2", "--out"])
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.contains("# derived_k_per_m = 5.09066999"));
    assert!(text.lines().any(|l| l == "x_m,intensity"));
    let data_lines = text.lines().filter(|l| !l.starts_with('#')).count();
    assert!(data_lines > 1000);
}

#[test]
fn fringe_scan_reports_the_fit() {
    let out_path = temp_path("scan.csv");
    let output = binary()
        .args(["fringe-scan", "--config"])
        .arg(config_path())
        .arg("--out")
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.contains("# mode = laser-off"));
    assert!(text.lines().any(|l| l == "dx3_m,T,T_fit"));
    assert!(text.contains("# fit_a = "));
    assert!(text.contains("# fit_b = "));
    assert!(text.contains("# fit_phi_rad = "));
    assert!(text.contains("# fit_residual_rms = "));
    // 32 data rows: 16 samples per period over two periods.
    let data_lines = text
        .lines()
        .filter(|l| !l.starts_with('#') && l.contains(','))
        .count();
    assert_eq!(data_lines, 33); // header + 32 rows
}

#[test]
fn single_kick_and_averaged_modes_are_selected_by_keys() {
    let out_path = temp_path("kick.csv");
    let output = binary()
        .args(["fringe-scan", "--config"])
        .arg(config_path())
        .args([
            "--set",
            "kick_y12prime_m=5.96517e-3",
            "--set",
            "kick_dkx_per_m=1.06675e7",
            "--out",
        ])
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    assert!(std::fs::read_to_string(&out_path)
        .unwrap()
        .contains("# mode = single-kick"));

    let output = binary()
        .args(["fringe-scan", "--config"])
        .arg(config_path())
        .args([
            "--set",
            "kick_y12prime_m=5.96517e-3",
            "--nodes",
            "16",
            "--out",
        ])
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    assert!(std::fs::read_to_string(&out_path)
        .unwrap()
        .contains("# mode = kick-averaged (16 nodes)"));
}

#[test]
fn contrast_curve_emits_requested_ratios() {
    let out_path = temp_path("curve.csv");
    let output = binary()
        .args(["contrast-curve", "--config"])
        .arg(config_path())
        .args([
            "--r-min", "0.3", "--r-max", "0.5", "--r-step", "0.1", "--nodes", "16", "--out",
        ])
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text
        .lines()
        .any(|l| l == "dp_over_lambda_i,B_numeric_abs,B_analytic_abs,phase_shift_rad"));
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && l.starts_with(|c: char| c.is_ascii_digit()))
        .collect();
    assert_eq!(rows.len(), 3);
    // First column round-trips to the requested ratios.
    let r0: f64 = rows[0].split(',').next().unwrap().parse().unwrap();
    assert!((r0 - 0.3).abs() < 1e-15);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let out_a = temp_path("det-a.csv");
    let out_b = temp_path("det-b.csv");
    for out in [&out_a, &out_b] {
        let output = binary()
            .args(["fringe-scan", "--config"])
            .arg(config_path())
            .args(["--set", "kick_y12prime_m=3.0e-3", "--nodes", "8", "--out"])
            .arg(out)
            .output()
            .unwrap();
        assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert_eq!(a, b, "outputs differ between identical runs");
}

#[test]
fn validate_passes_on_the_reference_configuration() {
    let output = binary()
        .args(["validate", "--config"])
        .arg(config_path())
        .output()
        .unwrap();
    let text = stdout(&output);
    assert_eq!(output.status.code(), Some(0), "{text}");
    assert!(text.contains("PASS: transfer distribution normalization"));
    assert!(text.contains("PASS: propagator representation equivalence"));
    assert!(text.contains("all checks passed"));
    assert!(!text.contains("FAIL"));
}
