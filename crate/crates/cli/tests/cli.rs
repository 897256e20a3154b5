use std::process::{Command, Output};

use asdk_core::Report;

fn asdk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asdk")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn passing_suite_exits_zero_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = asdk(&["case-ii", "--json", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("(lambda^2 - 5/2*sigma^2)^2 + 23/4 (sigma^2)^2"));
    let r = Report::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.suite, "case-ii");
    assert!(r.passed());
}

#[test]
fn identical_seeds_give_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let p = dir.path().join(name);
        let o = asdk(&["numeric", "--seed", seed, "--points", "20", "--json", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        std::fs::read(p).unwrap()
    };
    let a = run("a.json", "11");
    assert_eq!(a, run("b.json", "11"));
    assert_ne!(a, run("c.json", "12"));
}

#[test]
fn timings_are_opt_in() {
    let o = asdk(&["structure", "--timings"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().contains(" ms)"));
    let o = asdk(&["structure"]);
    assert!(!String::from_utf8(o.stdout).unwrap().contains(" ms)"));
}

#[test]
fn failing_check_exits_one() {
    // The printed d2 is not in the derived set.
    let o = asdk(&["equations36"]);
    assert_eq!(code(&o), 1);
    let stdout = String::from_utf8(o.stdout).unwrap();
    let failed: Vec<&str> = stdout.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failed.len(), 2, "{stdout}");
    assert!(failed.iter().all(|l| l.contains("d2")));
}

#[test]
fn impossible_tolerance_fails_numeric() {
    let o = asdk(&["numeric", "--points", "5", "--tol", "1e-30"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&asdk(&[])), 2);
    assert_eq!(code(&asdk(&["bogus"])), 2);
    assert_eq!(code(&asdk(&["structure", "--frobnicate"])), 2);
    assert_eq!(code(&asdk(&["numeric", "--seed", "x"])), 2);
    assert_eq!(code(&asdk(&["numeric", "--tol", "-1"])), 2);
    assert_eq!(code(&asdk(&["structure", "--eds", "/nonexistent/file.eds"])), 2);
    assert_eq!(code(&asdk(&["--help"])), 0);
}

#[test]
fn parse_errors_exit_three_with_location() {
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/fixtures/malformed/dangling_wedge.eds");
    let o = asdk(&["structure", "--eds", fixture]);
    assert_eq!(code(&o), 3);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("dangling_wedge.eds:"), "{err}");
    assert!(err.contains("line "), "{err}");
}

#[test]
fn custom_eds_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("copy.eds");
    std::fs::write(&path, asdk_core::structure::SHIPPED_EDS).unwrap();
    let o = asdk(&["structure", "--eds", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
}
