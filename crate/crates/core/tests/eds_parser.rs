use asdk_core::expr::{ParseErrorKind, Pos};
use asdk_core::structure::{parse_eds, parse_eds_file, token_kinds, StructureSystem, SHIPPED_EDS};

fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/malformed/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn shipped_file_round_trips() {
    let file = parse_eds_file(SHIPPED_EDS).unwrap();
    let text = file.serialize();
    assert_eq!(token_kinds(&text).unwrap(), token_kinds(SHIPPED_EDS).unwrap());
    assert_eq!(parse_eds_file(&text).unwrap().serialize(), text);
}

#[test]
fn shipped_file_has_eight_rules() {
    let s = StructureSystem::shipped();
    assert_eq!(s.frame, ["A", "B", "C", "D"]);
    assert_eq!(s.oneforms, ["F", "G", "L", "S"]);
    for k in 0..8 {
        assert_eq!(s.rules.rule(k).unwrap().degree(), 2);
    }
    assert_eq!(s.atoms.iter().count(), 4);
}

#[test]
fn nonzero_line_registers_atoms() {
    let text = SHIPPED_EDS.replace("nonzero lambda sigma mu+ mu-", "nonzero lambda sigma mu+ mu- lambda3");
    let s = parse_eds(&text).unwrap();
    let names: Vec<String> = s.atoms.iter().map(|a| a.name()).collect();
    assert!(names.contains(&"lambda3".to_string()));
    assert_eq!(names.len(), 5);
}

fn at(line: usize, col: usize) -> Pos {
    Pos { line, col }
}

#[test]
fn malformed_fixtures_report_locations() {
    use ParseErrorKind::*;
    let cases: [(&str, Pos, fn(&ParseErrorKind) -> bool); 10] = [
        ("dangling_wedge.eds", at(7, 8), |k| matches!(k, Syntax(_))),
        ("unknown_symbol.eds", at(7, 9), |k| matches!(k, UnknownSymbol(s) if s == "Q")),
        ("mixed_degrees.eds", at(7, 11), |k| {
            matches!(k, DegreeMismatch { expected: 1, found: 2 })
        }),
        ("rule_not_two_form.eds", at(7, 7), |k| {
            matches!(k, DegreeMismatch { expected: 2, found: 1 })
        }),
        ("unknown_directive.eds", at(1, 1), |k| matches!(k, Syntax(_))),
        ("duplicate_rule.eds", at(8, 3), |k| matches!(k, Duplicate(_))),
        ("unbalanced_paren.eds", at(7, 19), |k| matches!(k, Syntax(_))),
        ("unknown_atom.eds", at(3, 16), |k| matches!(k, UnknownSymbol(s) if s == "tau")),
        ("non_unit_divisor.eds", at(5, 20), |k| matches!(k, NonUnitDivisor(_))),
        ("short_frame.eds", at(1, 7), |k| matches!(k, Syntax(_))),
    ];
    for (name, pos, kind) in cases {
        let err = parse_eds(&fixture(name)).expect_err(name);
        assert_eq!(err.pos, pos, "{name}: {err}");
        assert!(kind(&err.kind), "{name}: {err}");
    }
}
