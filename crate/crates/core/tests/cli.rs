use std::process::{Command, Output};

use spherical_perceptron::capacity_solver::CapacityRecord;
use spherical_perceptron::cli::round_sig10;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spherical-perceptron"));
    cmd.env_remove("SPHERICAL_PERCEPTRON_OUT_DIR");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn error_kind(out: &Output) -> String {
    let line = String::from_utf8_lossy(&out.stderr);
    let rec: serde_json::Value = serde_json::from_str(line.lines().last().unwrap_or_default()).expect("json error record");
    rec["error"]["kind"].as_str().unwrap_or_default().to_string()
}

#[test]
fn capacity_at_zero_margin_is_two() {
    let out = run(&["capacity", "--kappa", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "kappa,alpha_u,alpha_u_low,c3_opt,gamma_opt,residual\n0.0,2.0,2.0,0.0,0.5,0.0\n");
}

#[test]
fn negative_margin_row_matches_reference() {
    let out = run(&["capacity", "--kappa", "-0.7"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    let expected = [-0.7, 7.0448, 7.0313, 0.2555, 0.4402];
    for (got, want) in row.iter().zip(expected) {
        assert!((got - want).abs() < 5e-3, "{row:?}");
    }
}

#[test]
fn identical_configs_give_identical_bytes() {
    for args in [
        &["sweep", "--kappa-grid", "-0.9:0.1:0.1", "--format", "json"][..],
        &["empirical", "--kappa", "0", "--alpha", "1.5,2.5", "--n", "40", "--trials", "4", "--seed", "3"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
        assert!(a.stdout.ends_with(b"\n"));
    }
}

#[test]
fn json_round_trip_at_ten_digits() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("caps.json");
    let out = run(&["capacity", "--kappa-grid", "-0.8,-0.3,0.4", "--format", "json", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let parsed: Vec<CapacityRecord> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let direct: Vec<CapacityRecord> = [-0.8, -0.3, 0.4]
        .iter()
        .map(|&k| spherical_perceptron::capacity_solver::alpha_c_lowered(k, 1e-6).unwrap())
        .collect();
    for (p, d) in parsed.iter().zip(&direct) {
        for (a, b) in [
            (p.kappa, d.kappa),
            (p.alpha_u, d.alpha_u),
            (p.alpha_u_low, d.alpha_u_low),
            (p.c3_opt, d.c3_opt),
            (p.gamma_opt, d.gamma_opt),
            (p.residual, d.residual),
        ] {
            assert_eq!(a, round_sig10(b));
        }
    }
}

#[test]
fn empty_grid_is_a_usage_error_and_touches_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("never.csv");
    let out = run(&["sweep", "--kappa-grid", "0.5:0.1:0", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "usage");
    assert!(!path.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn bad_flags_exit_with_usage_status() {
    for args in [
        &["capacity"][..],
        &["capacity", "--kappa", "abc"][..],
        &["bound-eval", "--kappa", "-0.7", "--alpha", "0"][..],
        &["empirical", "--kappa", "0", "--alpha", "2", "--n", "10", "--trials", "0"][..],
        &["frobnicate"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(error_kind(&out), "usage");
    }
}

#[test]
fn unwritable_output_reports_the_path() {
    let out = run(&["capacity", "--kappa", "0", "--output", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "io");
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent-dir/x.csv"));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .env("SPHERICAL_PERCEPTRON_OUT_DIR", dir.path())
        .args(["bound-eval", "--kappa", "-0.7", "--alpha", "7.05", "--format", "text"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("bound-eval.txt")).unwrap();
    let lb: f64 = text
        .lines()
        .find(|l| l.starts_with("lower_bound"))
        .and_then(|l| l.split_whitespace().nth(1))
        .unwrap()
        .parse()
        .unwrap();
    assert!(lb > 0.0, "7.05 lies above the lowered capacity");
}

#[test]
fn tables_text_has_kappa_columns() {
    let out = run(&["tables", "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split_whitespace().collect();
    assert_eq!(header.len(), 11);
    assert_eq!(header[1], "-0.5");
    assert_eq!(text.lines().count(), 9);
}
