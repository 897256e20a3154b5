use asdk_core::suites::{self, Options, SUITES};
use asdk_core::StructureSystem;

#[test]
fn all_merges_every_suite_and_is_reproducible() {
    let sys = StructureSystem::shipped();
    let opts = Options { points: 10, ..Options::default() };
    let a = suites::run("all", &sys, &opts).unwrap();
    for s in SUITES {
        assert!(a.checks.iter().any(|c| c.id.starts_with(&format!("{s}/"))), "{s}");
    }
    let failed: Vec<&str> = a.failed().iter().map(|c| c.id.as_str()).collect();
    assert_eq!(failed, ["equations36/d2", "equations36/variant/d2"]);
    assert_eq!(a.to_json(), suites::run("all", &sys, &opts).unwrap().to_json());
}

#[test]
fn seeds_change_only_seeded_values() {
    let a = suites::numeric_sweep(&Options { seed: 1, points: 10, ..Options::default() });
    let b = suites::numeric_sweep(&Options { seed: 2, points: 10, ..Options::default() });
    assert!(a.passed() && b.passed());
    assert_ne!(a.to_json(), b.to_json());
    let ids = |r: &asdk_core::Report| r.checks.iter().map(|c| c.id.clone()).collect::<Vec<_>>();
    assert_eq!(ids(&a), ids(&b));
}

#[test]
fn modified_system_fails_structure() {
    // Dropping the C ^ F term from dA breaks torsion-freeness.
    let text = asdk_core::structure::SHIPPED_EDS.to_string();
    let line = text.lines().find(|l| l.trim_start().starts_with("d A")).expect("rule for dA").to_string();
    let broken = text.replace(&line, &line.replace(" + C^F", ""));
    assert_ne!(broken, text, "{line}");
    let sys = asdk_core::structure::parse_eds(&broken).unwrap();
    let r = suites::structure(&sys, &Options::default());
    assert_eq!(r.check("torsion").unwrap().status, asdk_core::Status::Fail);
    assert!(!r.passed());
}
