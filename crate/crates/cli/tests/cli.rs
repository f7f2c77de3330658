use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use uncertainty_core::bounds::BoundReport;

fn uncert(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uncert"))
        .args(args)
        .current_dir(cwd)
        .env_remove("UNCERT_SEED")
        .output()
        .expect("binary runs")
}

fn spin1() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/spin1.json").display().to_string()
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(text.trim().lines().count(), 1, "{text}");
    serde_json::from_str(text.trim()).unwrap()
}

#[test]
fn optimal_perp_saturates_sum_on_spin_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = spin1();
    let out = uncert(
        &["bounds", "--problem", &p, "--a", "jx", "--b", "jy", "--state", "phi0", "--perp-strategy", "optimal"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let report: BoundReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!((report.sum_of_variances - 1.0).abs() < 1e-12);
    assert!((report.eq3.unwrap() - 1.0).abs() < 1e-12);
    // ⟨[J_x, J_y]⟩ = i⟨J_z⟩ = i on |+⟩
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["sign"], "-");
}

#[test]
fn joint_eigenstate_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let p = spin1();
    let out = uncert(
        &["bounds", "--problem", &p, "--a", "jz", "--b", "jz2", "--state", "plus", "--perp-strategy", "optimal"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"], "JointEigenstate");
}

#[test]
fn explicit_sign_and_perp() {
    let dir = tempfile::tempdir().unwrap();
    let p = spin1();
    let out = uncert(
        &["bounds", "--problem", &p, "--a", "jx", "--b", "jy", "--state", "plus", "--perp", "zero", "--sign", "plus"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["sign"], "+");

    // |+⟩ is not orthogonal to itself
    let out =
        uncert(&["bounds", "--problem", &p, "--a", "jx", "--b", "jy", "--state", "plus", "--perp", "plus"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "NotOrthogonal");
}

#[test]
fn csv_and_mixed_output() {
    let dir = tempfile::tempdir().unwrap();
    let p = spin1();
    let out = uncert(
        &["bounds", "--problem", &p, "--a", "jx", "--b", "jy", "--state", "phi_pi8", "--format", "csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("var_a,var_b,sum_of_variances"));
    assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());

    let out = uncert(&["bounds", "--problem", &p, "--a", "jx", "--b", "jy", "--mixed", "mixed_pm"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["residual"].as_f64().unwrap() >= -1e-9);
}

#[test]
fn malformed_problem_files_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"dim": 2, "operators": {}, "states": {}, "bogus": 1}"#, "ParseError"),
        (r#"{"dim": 2, "operators": {"a": [[[1, 0], [0, 1]], [[0, 0], [1, 0]]]}, "states": {}}"#, "NotHermitian"),
        (r#"{"dim": 2, "operators": {}, "states": {"s": [[1, 0], [1, 0]]}}"#, "NotNormalized"),
        (r#"{"dim": 2, "operators": {}, "states": {"s": [[1, 0]]}}"#, "DimensionMismatch"),
        (
            r#"{"dim": 2, "operators": {}, "states": {"s": [[1, 0], [0, 0]]}, "density_matrices": {"r": [[[2, 0], [0, 0]], [[0, 0], [0, 0]]]}}"#,
            "BadTrace",
        ),
        ("not json", "ParseError"),
    ];
    for (text, kind) in cases {
        let path = dir.path().join("p.json");
        std::fs::write(&path, text).unwrap();
        let out = uncert(
            &["bounds", "--problem", path.to_str().unwrap(), "--a", "a", "--b", "a", "--state", "s"],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(2), "{text}");
        assert_eq!(stderr_json(&out)["error"], kind, "{text}");
        assert!(out.stdout.is_empty());
    }
    let out = uncert(&["bounds", "--problem", "missing.json", "--a", "a", "--b", "b", "--state", "s"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = uncert(&["bounds", "--problem", &spin1(), "--a", "jx", "--b", "nope", "--state", "plus"], dir.path());
    assert_eq!(stderr_json(&out)["error"], "UnknownName");
}

#[test]
fn figure1_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["a", "b"] {
        let out = uncert(&["figure1", "--out-dir", sub], dir.path());
        assert_eq!(out.status.code(), Some(0));
    }
    for name in ["curves.csv", "eq3_samples.csv", "plot.gp"] {
        let a = std::fs::read(dir.path().join("a").join(name)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name}");
    }
    let curves = std::fs::read_to_string(dir.path().join("a/curves.csv")).unwrap();
    assert_eq!(curves.lines().count(), 201);
    let samples = std::fs::read_to_string(dir.path().join("a/eq3_samples.csv")).unwrap();
    assert_eq!(samples.lines().count(), 4001);
}

#[test]
fn figure1_two_steps_hits_both_ends() {
    let dir = tempfile::tempdir().unwrap();
    let out = uncert(&["figure1", "--phi-steps", "2", "--perp-samples", "1", "--out-dir", "."], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let curves = std::fs::read_to_string(dir.path().join("curves.csv")).unwrap();
    let phis: Vec<f64> = curves.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(phis, vec![0.0, std::f64::consts::PI]);
    let out = uncert(&["figure1", "--phi-steps", "1", "--out-dir", "."], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seed_from_environment_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let run = |env: Option<&str>, extra: &[&str], sub: &str| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_uncert"));
        cmd.args(["figure1", "--phi-steps", "4", "--perp-samples", "2", "--out-dir", sub])
            .args(extra)
            .current_dir(dir.path());
        match env {
            Some(v) => cmd.env("UNCERT_SEED", v),
            None => cmd.env_remove("UNCERT_SEED"),
        };
        assert!(cmd.status().unwrap().success());
        std::fs::read_to_string(dir.path().join(sub).join("eq3_samples.csv")).unwrap()
    };
    let default = run(None, &[], "d");
    let explicit = run(None, &["--seed", "42"], "e");
    let from_env = run(Some("5"), &[], "v");
    let flag_wins = run(Some("5"), &["--seed", "42"], "f");
    assert_eq!(default, explicit);
    assert_ne!(default, from_env);
    assert_eq!(flag_wins, explicit);
}

#[test]
fn verify_exit_codes_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = uncert(&["verify", "--dims", "2,3", "--trials", "50"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["total_violations"], 0);
    assert_eq!(report["eq3.trials"], 100);
    assert!(report.as_object().unwrap().values().all(|v| !v.is_object()));

    let out =
        uncert(&["verify", "--dims", "2,3", "--trials", "50", "--tol", "1e-30", "--out", "tight.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "ContractViolation");

    let out = uncert(&["verify", "--trials", "0", "--out", "empty.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let empty: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("empty.json")).unwrap()).unwrap();
    assert!(empty.get("eq3.trials").is_none());

    let out = uncert(&["verify", "--dims", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_serial_matches_parallel() {
    let dir = tempfile::tempdir().unwrap();
    uncert(&["verify", "--dims", "2,4", "--trials", "30", "--out", "p.json"], dir.path());
    uncert(&["verify", "--dims", "2,4", "--trials", "30", "--out", "s.json", "--serial"], dir.path());
    let p = std::fs::read(dir.path().join("p.json")).unwrap();
    let s = std::fs::read(dir.path().join("s.json")).unwrap();
    assert_eq!(p, s);
}

#[test]
fn saturate_reports_small_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let out = uncert(&["saturate", "--dims", "2", "--trials", "100", "--out", "sat.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    for name in ["eq3_saturation", "eq6_saturation"] {
        assert!(summary["checks"][name]["max_violation"].as_f64().unwrap() < 1e-9);
    }
    let again = uncert(&["saturate", "--dims", "2", "--trials", "100", "--out", "sat2.json"], dir.path());
    assert_eq!(out.stdout, again.stdout);
}
