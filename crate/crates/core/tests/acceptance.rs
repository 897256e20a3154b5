//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the verdicts are always printed.
//!
//! A criterion listed in `KNOWN_FAILURES` is still evaluated and printed as
//! FAIL; the run only succeeds if it fails for exactly the recorded reason.

use std::time::{Duration, Instant};

use asdk_core::algebra::{atoms, ratio, Poly};
use asdk_core::cases::{self, parse_scalar, sos_certificate, PipelineReport};
use asdk_core::derive::connection::{derive_nel, solve_sol, SolReport};
use asdk_core::derive::second_order::{derive_36, match_all, match_corrected, dependence_relations};
use asdk_core::derive::symmetry::preserves_curvature_table;
use asdk_core::derive::{rotation_invariance, symmetry_group, SymmetryElement};
use asdk_core::jets::{jf, JetContext};
use asdk_core::numeric;
use asdk_core::structure::{parse_eds, parse_eds_file, token_kinds, SHIPPED_EDS};
use asdk_core::suites::{self, Options};
use asdk_core::{LocFrac, StructureSystem};

/// Floating-point gate for every numeric comparison.
const NUMERIC_TOL: f64 = 1e-12;
/// Seed and size of the numeric sweep.
const SWEEP_SEED: u64 = 7;
const SWEEP_POINTS: usize = 100;
const ROTATION_ANGLES: usize = 16;

const STRUCTURE_BUDGET: Duration = Duration::from_secs(5);
const EQUATIONS_BUDGET: Duration = Duration::from_secs(60);
const NUMERIC_BUDGET: Duration = Duration::from_secs(2);

/// Criteria that cannot pass as stated, with the exact observed outcome
/// that the harness requires instead. See the decisions ledger.
const KNOWN_FAILURES: [(&str, &str); 1] = [(
    "equations36",
    "d2: residual 64*lambda^2*sigma*lambda4*sigma4; d2_corrected matches",
)];

struct Verdict {
    id: &'static str,
    ok: bool,
    detail: String,
}

fn p(name: &str) -> Poly {
    Poly::named(name)
}

fn lf(name: &str) -> LocFrac {
    LocFrac::named(name)
}

fn structure_suite(sys: &StructureSystem) -> Verdict {
    let start = Instant::now();
    let r = suites::structure(sys, &Options::default());
    let t = start.elapsed();
    let ids = ["torsion", "curvature", "nabla_zeta", "nabla_eta", "nabla_theta"];
    let present = ids.iter().all(|id| r.check(id).is_some_and(|c| c.status.is_pass()));
    Verdict {
        id: "structure",
        ok: r.passed() && present && t < STRUCTURE_BUDGET,
        detail: format!("{} checks, {:.2} s", r.checks.len(), t.as_secs_f64()),
    }
}

fn nel_sol(sys: &StructureSystem) -> Verdict {
    let nel_report = suites::nel(sys, &Options::default());
    let rows = nel_report.checks.iter().filter(|c| c.id.starts_with("nel_")).count();
    let ctx = sys.ctx();
    let nel = derive_nel(sys).unwrap();
    let sol = solve_sol(&nel, ctx).unwrap();
    let rep = SolReport::check(sol, &nel, ctx).unwrap();
    // 8λσ(G₁+F₂) = −4σλ₄ and 8λσ(G₂−F₁) = 4σλ₃, recomputed from the solution.
    let ls8 = &LocFrac::int(8) * &(&lf("lambda") * &lf("sigma"));
    let g1f2 = &ls8 * &(&rep.value("G", 1) + &rep.value("F", 2));
    let g2f1 = &ls8 * &(&rep.value("G", 2) - &rep.value("F", 1));
    let want1 = &LocFrac::int(-4) * &(&lf("sigma") * &jf("lambda", &[4]));
    let want2 = &LocFrac::int(4) * &(&lf("sigma") * &jf("lambda", &[3]));
    let inp = g1f2 == want1 && g2f1 == want2;
    Verdict {
        id: "nel_sol",
        ok: nel_report.passed() && rows == 12 && rep.passed() && inp,
        detail: format!(
            "{rows} rows matched, {} back-substitutions zero, inp identities {}",
            rep.back_substitution.len(),
            if inp { "exact" } else { "wrong" }
        ),
    }
}

/// Magnitude of the multiplier for each label family, read off the
/// displays independently of the engine.
fn multiplier_magnitude(label: &str) -> &'static str {
    match &label[..1] {
        "a" | "b" => "4 sigma",
        "c" | "d" | "e" => "256 lambda^2 sigma^3",
        "h" | "i" => "512 lambda^2 sigma^4",
        _ => "32 lambda sigma^2",
    }
}

fn equations36(sys: &StructureSystem) -> Verdict {
    let start = Instant::now();
    let nel = derive_nel(sys).unwrap();
    let sol = solve_sol(&nel, sys.ctx()).unwrap();
    let set = derive_36(sys, &sol).unwrap();
    let ms = match_all(&set).unwrap();
    let t = start.elapsed();
    let mut failed = Vec::new();
    let mut wrong_multiplier = Vec::new();
    for m in &ms {
        if !m.matched() {
            failed.push(format!("{}: residual {}", m.label, m.residual));
            continue;
        }
        let u = m.multiplier.as_ref().map(|u| u.to_string()).unwrap_or_default();
        if u.trim_start_matches('-') != multiplier_magnitude(&m.label) {
            wrong_multiplier.push(m.label.clone());
        }
    }
    let corrected = match_corrected(&set).unwrap().iter().all(|m| m.matched());
    let ok = set.equations.len() == 36 && failed.is_empty() && wrong_multiplier.is_empty() && t < EQUATIONS_BUDGET;
    let mut detail = format!(
        "{} of {} transcriptions members, {:.2} s",
        ms.len() - failed.len(),
        ms.len(),
        t.as_secs_f64()
    );
    if !wrong_multiplier.is_empty() {
        detail += &format!("; unexpected multipliers: {}", wrong_multiplier.join(" "));
    }
    if !failed.is_empty() {
        detail = format!(
            "{}; d2_corrected {}",
            failed.join("; "),
            if corrected { "matches" } else { "fails" }
        );
    }
    Verdict {
        id: "equations36",
        ok,
        detail,
    }
}

fn combinations(sys: &StructureSystem) -> Verdict {
    let cs = dependence_relations(sys.ctx()).unwrap();
    let names: Vec<&str> = cs.iter().map(|c| c.name.as_str()).collect();
    let want = ["e3", "e1", "i1", "i3", "intro_a", "intro_b"];
    let ok = names == want && cs.iter().all(|c| c.passed());
    Verdict {
        id: "combinations",
        ok,
        detail: format!("{} of 6 residuals zero", cs.iter().filter(|c| c.passed()).count()),
    }
}

fn final_value(rep: &PipelineReport, ctx: &JetContext) -> LocFrac {
    let step = rep.step("final").expect("final step");
    parse_scalar(&step.values[0], ctx).unwrap()
}

fn pipelines() -> Verdict {
    let cl = cases::const_lambda().run();
    let sigma_zero = cl.step("sigma").is_some_and(|s| s.passed && s.values == ["sigma"]);

    let ii = cases::case_ii().run();
    let mut ctx = JetContext::standard();
    ctx.add_atom(atoms::lambda3());
    let (l2, s2) = (&p("lambda") * &p("lambda"), &p("sigma") * &p("sigma"));
    let quartic = &(&(&l2 * &l2) - &(&l2 * &s2).scale(&ratio(5, 1))) + &(&s2 * &s2).scale(&ratio(12, 1));
    let got = final_value(&ii, &ctx);
    let q = LocFrac::from_poly(quartic.clone());
    let ii_final = got == q || got == -q;
    let cert = sos_certificate(&quartic).unwrap();
    let cert_ok = cert.terms == vec![(ratio(1, 1), &l2 - &s2.scale(&ratio(5, 2))), (ratio(23, 4), s2.clone())]
        && cert.expand() == quartic
        && ii.certificate.as_ref() == Some(&cert);

    let iii = cases::case_iii().run();
    let squares = ["lambda1", "lambda2", "lambda3"]
        .iter()
        .fold(Poly::zero(), |acc, n| &acc + &(&p(n) * &p(n)));
    let target = LocFrac::from_poly((&(&l2 * &p("sigma")) * &squares).scale(&ratio(8, 1)));
    let got = final_value(&iii, &ctx);
    let iii_final = got == target || got == -target;

    let displays = [
        (&ii, &["suc_1", "suc_2", "suc_3", "suc_4", "lts_1", "lts_2", "els_i", "els_ii"][..]),
        (&iii, &["fsq", "fsq_ii", "iii_d", "iii_d1", "iii_d2", "iii_d3", "iii_h", "iii_h4"][..]),
    ];
    let mut missing = Vec::new();
    for (rep, ids) in displays {
        for id in ids {
            if !rep.step(id).is_some_and(|s| s.passed) {
                missing.push(*id);
            }
        }
    }
    let all_steps = cl.passed && ii.passed && iii.passed;
    Verdict {
        id: "pipelines",
        ok: sigma_zero && ii_final && cert_ok && iii_final && missing.is_empty() && all_steps,
        detail: format!(
            "const-lambda sigma = 0: {sigma_zero}; case ii quartic: {ii_final}, certificate {cert}; \
             case iii: {iii_final}; unmatched displays: {}",
            if missing.is_empty() { "none".into() } else { missing.join(" ") }
        ),
    }
}

fn numeric_sweep() -> Verdict {
    let start = Instant::now();
    let r = numeric::sweep(SWEEP_SEED, SWEEP_POINTS, NUMERIC_TOL);
    let t = start.elapsed();
    let exact_s = numeric::exact_scalar_curvature() == (0, 0);
    let worst = r.checks.iter().fold(0.0f64, |m, c| m.max(c.max_residual));
    Verdict {
        id: "numeric",
        ok: r.passed && r.points == SWEEP_POINTS && exact_s && t < NUMERIC_BUDGET,
        detail: format!(
            "{} points, worst residual {worst:.3e}, exact s = 0: {exact_s}, {:.2} s",
            r.points,
            t.as_secs_f64()
        ),
    }
}

fn symmetry(sys: &StructureSystem) -> Verdict {
    let g = symmetry_group();
    let closed = g.iter().all(|x| g.iter().all(|y| g.contains(&x.then(y))));
    let r = SymmetryElement::rep;
    let identities = r(4).then(&r(1)).then(&r(4)) == r(2)
        && r(1).then(&r(2)) == r(3)
        && r(1).then(&r(4)) == SymmetryElement::rpl(5);
    let rot = rotation_invariance();
    let cs = &(&p("c") * &p("c")) + &(&p("s") * &p("s"));
    let rce = rot.rce == &(&cs * &cs) * &p("sigma");
    let rules = g.iter().all(|x| x.preserves_rules(sys).unwrap());
    let table = g.iter().all(preserves_curvature_table);
    // Independent numeric pass: random angles at a few points.
    let mut worst = 0.0f64;
    let angles: Vec<f64> = (0..ROTATION_ANGLES).map(|k| 0.37 + 0.41 * k as f64).collect();
    for (l, s) in [(1.0, 1.0), (-1.3, 0.4), (0.2, -1.9), (1.7, -0.6)] {
        worst = worst.max(numeric::symmetry_orbit_check(&numeric::build_curvature(l, s), &angles));
    }
    Verdict {
        id: "symmetry",
        ok: g.len() == 32 && closed && identities && rce && rot.passed() && rules && table && worst < NUMERIC_TOL,
        detail: format!("order {}, rce = {}, orbit residual {worst:.3e}", g.len(), rot.rce),
    }
}

fn parser() -> Verdict {
    let file = parse_eds_file(SHIPPED_EDS).unwrap();
    let text = file.serialize();
    let round = parse_eds_file(&text).unwrap().serialize() == text
        && token_kinds(&text).unwrap() == token_kinds(SHIPPED_EDS).unwrap();
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/malformed");
    let mut located = 0;
    let mut total = 0;
    let mut entries: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    entries.sort();
    for path in entries {
        total += 1;
        let text = std::fs::read_to_string(&path).unwrap();
        if let Err(e) = parse_eds(&text) {
            let lines = text.lines().count();
            if e.pos.line >= 1 && e.pos.line <= lines && e.pos.col >= 1 {
                located += 1;
            }
        }
    }
    Verdict {
        id: "parser",
        ok: round && total == 10 && located == 10,
        detail: format!("round trip {round}, {located} of {total} malformed files located"),
    }
}

fn main() {
    let sys = StructureSystem::shipped();
    let verdicts = [
        structure_suite(&sys),
        nel_sol(&sys),
        equations36(&sys),
        combinations(&sys),
        pipelines(),
        numeric_sweep(),
        symmetry(&sys),
        parser(),
    ];
    let mut unexpected = Vec::new();
    for v in &verdicts {
        println!("{} {}: {}", if v.ok { "PASS" } else { "FAIL" }, v.id, v.detail);
        match KNOWN_FAILURES.iter().find(|k| k.0 == v.id) {
            Some((_, reason)) => {
                if v.ok || v.detail != *reason {
                    unexpected.push(format!("{} no longer fails as recorded", v.id));
                } else {
                    println!("     known failure, recorded in the decisions ledger");
                }
            }
            None if !v.ok => unexpected.push(format!("{} failed", v.id)),
            None => {}
        }
    }
    if !unexpected.is_empty() {
        eprintln!("acceptance: {}", unexpected.join("; "));
        std::process::exit(1);
    }
}
