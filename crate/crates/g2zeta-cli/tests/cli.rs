use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2zeta")).args(args).env_remove("G2ZETA_WORKERS").output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

const PASSING: &[&[&str]] = &[
    &["verify-conjecture", "--pmin", "5", "--pmax", "17"],
    &["count", "--p", "5", "--b", "1", "--c", "2", "--k", "2"],
    &["psi1", "--p", "11", "--k", "2"],
    &["eval-case", "--case", "11", "--p", "5", "--s", "1.5"],
    &["eval-case", "--case", "6", "--p", "5", "--s", "1.5"],
    &["verify-theorem", "--p", "5,11"],
    &["classify-orbit", "--sigma", "1,0,1,2", "--p", "5"],
    &["verify-identities", "--trials", "10"],
];

#[test]
fn known_good_runs_exit_zero() {
    for args in PASSING {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn injected_wrong_expectation_exits_one() {
    for args in PASSING {
        let mut a = vec!["--inject-wrong-expected"];
        a.extend_from_slice(args);
        assert_eq!(code(&a), 1, "{args:?}");
    }
}

#[test]
fn invalid_configurations_exit_two() {
    let bad: &[&[&str]] = &[
        &["count", "--p", "4", "--b", "1", "--c", "2"],
        &["verify-conjecture", "--pmin", "5", "--pmax", "3x"],
        &["eval-case", "--case", "17", "--p", "5"],
        &["eval-case", "--case", "1", "--p", "5", "--s", "0.5"],
        &["verify-theorem", "--p", "5", "--b", "1"],
        &["classify-orbit", "--sigma", "1,0,1", "--p", "5"],
        &["--workers", "0", "verify-identities"],
        &["no-such-command"],
    ];
    for args in bad {
        assert_eq!(code(args), 2, "{args:?}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    for fmt in ["json", "csv", "text"] {
        let args = ["--output", fmt, "verify-theorem", "--p", "5,11"];
        let (a, b) = (run(&args), run(&args));
        assert_eq!(a.stdout, b.stdout, "{fmt}");
    }
    let args = ["verify-identities", "--seed", "7", "--trials", "10"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn json_output_has_the_documented_shape() {
    let out = run(&["verify-theorem", "--p", "5"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "verify-theorem");
    assert_eq!(v["passed"], true);
    let results = v["results"].as_array().unwrap();
    assert!(!results.is_empty());
    assert!(results.iter().all(|r| r["passed"] == true && r.get("elapsed_ms").is_none()));
}

#[test]
fn csv_output_starts_with_config_then_header() {
    let out = run(&["--output", "csv", "psi1", "--p", "5", "--k", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# psi1 {"));
    let header = lines.next().unwrap();
    assert!(header.contains(','));
    assert_eq!(lines.count(), 4);
}

#[test]
fn classify_orbit_expectation_mismatch_fails() {
    let ok = ["classify-orbit", "--sigma", "1,0,1,2", "--p", "5"];
    let out = run(&ok);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let kind = v["results"][0]["kind"].as_str().unwrap().to_string();
    let other = if kind == "irreducibleCubic" { "three-distinct-linear" } else { "irreducible-cubic" };
    let mut args = ok.to_vec();
    args.extend_from_slice(&["--expect", other]);
    assert_eq!(code(&args), 1);
}
