use std::process::{Command, Output};

fn qpb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpb"))
        .args(args)
        .output()
        .expect("qpb binary runs")
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let a = qpb(&["verify", "all", "--seed", "7", "--format", "json"]);
    let b = qpb(&["verify", "all", "--seed", "7", "--format", "json"]);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stdout)
    );
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_rows_have_the_report_fields() {
    let out = qpb(&["verify", "weyl", "--format", "json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for field in [
        "\"check_id\"",
        "\"paper_ref\"",
        "\"residual\"",
        "\"tolerance\"",
        "\"pass\"",
        "\"context\"",
    ] {
        assert!(text.contains(field), "missing {field}");
    }
    let first = text.find("\"check_id\"").unwrap();
    assert!(first < text.find("\"paper_ref\"").unwrap());
    assert!(text.find("\"tolerance\"").unwrap() < text.find("\"pass\"").unwrap());
}

#[test]
fn passing_suite_exits_zero() {
    assert_eq!(qpb(&["verify", "ladder"]).status.code(), Some(0));
}

#[test]
fn tightened_tolerance_exits_one() {
    let out = qpb(&["verify", "poisson", "--tolerance", "poisson_residual=1e-15"]);
    assert_eq!(out.status.code(), Some(1));
    let table = String::from_utf8(out.stdout).unwrap();
    let line = table
        .lines()
        .find(|l| l.starts_with("poisson_residual "))
        .unwrap();
    assert!(line.contains("FAIL"));
}

#[test]
fn usage_and_configuration_errors_exit_two() {
    for args in [
        &["verify", "nonsense"][..],
        &["verify", "all", "--n-points", "100"],
        &["verify", "all", "--tolerance", "no_such_check=1"],
        &["verify", "all", "--tolerance", "poisson_residual"],
        &["verify", "all", "--hbar", "-1"],
        &["verify", "ladder", "--n-trunc", "2"],
        &["verify"],
        &["frobnicate"],
    ] {
        assert_eq!(qpb(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let written = qpb(&[
        "verify",
        "kk",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(written.status.code(), Some(0));
    assert!(written.stdout.is_empty());
    let printed = qpb(&["verify", "kk", "--format", "json"]);
    assert_eq!(std::fs::read(&path).unwrap(), printed.stdout);
}
