//! Verification suites. Each runs a fixed list of checks against a
//! structure system and collects them into a [`Report`].

use std::collections::HashMap;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{LocFrac, Var};
use crate::cases::{self, PipelineReport};
use crate::derive::second_order::{frame_closure, match_corrected, dependence_relations, variant_checks};
use crate::derive::symmetry::{matches_rpl_row, matches_sweep_row, preserves_curvature_table, SWEEP_TABLE};
use crate::derive::{
    derive_36, derive_nel, integrability_criterion, match_all, rank_report, render_residual, rotation_invariance,
    solve_sol, symmetry_group, DeriveError, DerivedSet, SolReport, SymmetryElement,
};
use crate::derive::connection::match_nel;
use crate::forms::DForm;
use crate::numeric;
use crate::report::{Check, Report, Status};
use crate::structure::{
    parallel_solution_space, parse_eds_file, verify_parallel_g_j, token_kinds, zeta_eta_theta, kahler_form, FormTensor,
    StructureSystem,
};

/// Suite names in the order `all` runs them.
pub const SUITES: [&str; 10] = [
    "structure",
    "nel",
    "sol",
    "equations36",
    "combos",
    "symmetry",
    "case-const-lambda",
    "case-ii",
    "case-iii",
    "numeric",
];

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub seed: u64,
    pub points: usize,
    pub tol: f64,
    pub timings: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 7,
            points: 100,
            tol: numeric::TOLERANCE,
            timings: false,
        }
    }
}

type Outcome = Result<(bool, String), DeriveError>;

struct Checks {
    out: Vec<Check>,
    timings: bool,
}

impl Checks {
    fn new(opts: &Options) -> Self {
        Checks {
            out: Vec::new(),
            timings: opts.timings,
        }
    }

    fn run(&mut self, id: impl Into<String>, reference: impl Into<String>, f: impl FnOnce() -> Outcome) -> bool {
        let start = Instant::now();
        let res = f();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        let (ok, value) = res.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.out.push(Check {
            id: id.into(),
            reference: reference.into(),
            status: Status::from_bool(ok),
            value,
            runtime_ms: self.timings.then_some((ms * 1e3).round() / 1e3),
        });
        ok
    }

    fn finish(self, suite: &str) -> Report {
        Report::new(suite, self.out)
    }
}

/// Runs the named suite, or `None` for an unknown name. `all` runs every
/// suite and merges the reports.
pub fn run(name: &str, sys: &StructureSystem, opts: &Options) -> Option<Report> {
    let r = match name {
        "structure" => structure(sys, opts),
        "nel" => nel(sys, opts),
        "sol" => sol(sys, opts),
        "equations36" => equations36(sys, opts),
        "combos" => combos(sys, opts),
        "symmetry" => symmetry(sys, opts),
        "case-const-lambda" => pipeline("case-const-lambda", cases::const_lambda().run(), opts),
        "case-ii" => pipeline("case-ii", cases::case_ii().run(), opts),
        "case-iii" => pipeline("case-iii", cases::case_iii().run(), opts),
        "numeric" => numeric_sweep(opts),
        "all" => Report::merge("all", SUITES.iter().filter_map(|s| run(s, sys, opts)).collect()),
        _ => return None,
    };
    Some(r)
}

fn count_nonzero<'a>(it: impl IntoIterator<Item = &'a LocFrac>) -> usize {
    it.into_iter().filter(|x| !x.is_zero()).count()
}

fn zero_value(nonzero: usize, total: usize) -> (bool, String) {
    (nonzero == 0, format!("{nonzero} of {total} residuals nonzero"))
}

pub fn structure(sys: &StructureSystem, opts: &Options) -> Report {
    let mut c = Checks::new(opts);
    c.run("torsion", "dA, dB, dC, dD = e^i ^ G_i^k", || {
        let r = sys.torsion_residuals()?;
        Ok(zero_value(r.iter().filter(|f| !f.is_zero()).count(), 4))
    });
    c.run("curvature", "R_k^l = -dG_k^l + G_k^p ^ G_p^l", || {
        let got = sys.curvature()?;
        let want = sys.expected_curvature();
        let n = got.iter().flatten().zip(want.iter().flatten()).filter(|(a, b)| a != b).count();
        Ok((n == 0, format!("{n} of 16 entries differ")))
    });
    c.run("connection", "metric and J-parallel", || {
        let r = verify_parallel_g_j(&sys.connection()?, &sys.generator_names());
        let v = r.skew_violations.len() + r.j_violations.len();
        Ok((r.passed(), format!("{v} violations")))
    });
    c.run("parallel_space", "u(2)-valued pattern", || {
        let (dim, ok) = parallel_solution_space();
        Ok((dim == 4 && ok, format!("dimension {dim}")))
    });
    let two = |x: &DForm| x.scale(&LocFrac::int(2));
    let [z, e, t] = zeta_eta_theta();
    let form = |n: &str| sys.form(n);
    c.run("nabla_zeta", "nabla zeta = 2G (x) eta - 2F (x) theta", || {
        let want = FormTensor::tensor(&two(&form("G")?), &e).sub(&FormTensor::tensor(&two(&form("F")?), &t));
        Ok((sys.nabla_form(&z)? == want, "exact".into()))
    });
    c.run("nabla_eta", "nabla eta = -2G (x) zeta + L (x) theta", || {
        let want = FormTensor::tensor(&two(&form("G")?), &z)
            .neg()
            .add(&FormTensor::tensor(&form("L")?, &t));
        Ok((sys.nabla_form(&e)? == want, "exact".into()))
    });
    c.run("nabla_theta", "nabla theta = 2F (x) zeta - L (x) eta", || {
        let want = FormTensor::tensor(&two(&form("F")?), &z).sub(&FormTensor::tensor(&form("L")?, &e));
        Ok((sys.nabla_form(&t)? == want, "exact".into()))
    });
    c.run("kahler_closed", "d omega = 0", || {
        Ok((sys.rules.ext_d(&kahler_form())?.is_zero(), "exact".into()))
    });
    c.run("eds_round_trip", "serialise then parse", || {
        let text = sys.source.serialize();
        let again = parse_eds_file(&text)?;
        let same = again.serialize() == text && token_kinds(&text)? == token_kinds(&parse_eds_file(&text)?.serialize())?;
        Ok((same, format!("{} directives", again.directives.len())))
    });
    c.finish("structure")
}

pub fn nel(sys: &StructureSystem, opts: &Options) -> Report {
    let mut c = Checks::new(opts);
    let mut derived = Vec::new();
    c.run("derive", "twelve coefficient relations", || {
        derived = derive_nel(sys)?;
        Ok((derived.len() == 12, format!("{} relations", derived.len())))
    });
    match match_nel(&derived, sys.ctx()) {
        Ok(rows) => {
            for m in rows {
                c.run(m.label.clone(), m.source.clone(), || Ok((true, m.factor.to_string())));
            }
        }
        Err(e) => {
            c.run("rows", "nel_i .. nel_xii", || Err(e));
        }
    }
    c.finish("nel")
}

fn solution(sys: &StructureSystem) -> Result<(Vec<crate::derive::Equation>, HashMap<Var, LocFrac>), DeriveError> {
    let nel = derive_nel(sys)?;
    let sol = solve_sol(&nel, sys.ctx())?;
    Ok((nel, sol))
}

pub fn sol(sys: &StructureSystem, opts: &Options) -> Report {
    let mut c = Checks::new(opts);
    let mut rep = None;
    c.run("solve", "connection components", || {
        let (nel, sol) = solution(sys)?;
        let n = sol.len();
        rep = Some(SolReport::check(sol, &nel, sys.ctx())?);
        Ok((n == crate::derive::connection::connection_unknowns().len(), format!("{n} components")))
    });
    let Some(rep) = rep else { return c.finish("sol") };
    c.run("back_substitution", "twelve relations", || {
        Ok(zero_value(count_nonzero(rep.back_substitution.iter().map(|x| &x.1)), rep.back_substitution.len()))
    });
    for (label, r) in &rep.transcribed {
        c.run(label.clone(), "transcription", || Ok((r.is_zero(), render_residual(r))));
    }
    c.run("integrability", "span(e1,e2) iff l3 = l4 = 0; span(e3,e4) iff l1 = l2 = 0", || {
        let r = integrability_criterion(sys, &rep.solution)?;
        let show = |x: &Option<(usize, crate::derive::UnitFactor)>| match x {
            Some((i, f)) => format!("{f} lambda{i}"),
            None => "-".into(),
        };
        let v = [&r.e12_controls[0], &r.e12_controls[1], &r.e34_controls[0], &r.e34_controls[1]]
            .map(show)
            .join(", ");
        Ok((r.passed(), v))
    });
    c.finish("sol")
}

fn derived_set(sys: &StructureSystem) -> Result<(HashMap<Var, LocFrac>, DerivedSet), DeriveError> {
    let (_, sol) = solution(sys)?;
    let set = derive_36(sys, &sol)?;
    Ok((sol, set))
}

pub fn equations36(sys: &StructureSystem, opts: &Options) -> Report {
    let mut c = Checks::new(opts);
    let mut found = None;
    c.run("derive", "coefficients of dF, dG, dL, dS, d^2 lambda, d^2 sigma", || {
        let (sol, set) = derived_set(sys)?;
        let n = set.equations.len();
        found = Some((sol, set));
        Ok((n == 36, format!("{n} equations")))
    });
    let Some((sol, set)) = found else { return c.finish("equations36") };
    match match_all(&set) {
        Ok(ms) => {
            for m in ms {
                let sources = m.sources.iter().map(|s| s.0.as_str()).collect::<Vec<_>>().join(" + ");
                c.run(m.label.clone(), sources, || {
                    let v = match (&m.multiplier, m.matched()) {
                        (Some(u), true) => format!("multiplier {u}"),
                        (None, true) => "combination".into(),
                        _ => format!("residual {}", render_residual(&m.residual)),
                    };
                    Ok((m.matched(), v))
                });
            }
        }
        Err(e) => {
            c.run("membership", "transcriptions", || Err(e));
        }
    }
    c.run("d2_corrected", "d2 with the sign of lambda4 sigma4 reversed", || {
        let ms = match_corrected(&set)?;
        let ok = ms.iter().all(|m| m.matched());
        Ok((ok, ms.iter().map(|m| m.label.clone()).collect::<Vec<_>>().join(" ")))
    });
    match variant_checks(&set.ctx) {
        Ok(vs) => {
            for v in vs {
                let reference = format!("replacement {} of {}", v.case, v.base);
                c.run(format!("variant/{}", v.label), reference, || {
                    Ok(match &v.factor {
                        Some(f) => (true, format!("factor {f}")),
                        None => (false, "not a unit multiple of the image".into()),
                    })
                });
            }
        }
        Err(e) => {
            c.run("variants", "subscripted transcriptions", || Err(e));
        }
    }
    c.run("frame_closure", "d(de^k) in the span of the derived set", || {
        let ms = frame_closure(sys, &sol, &set)?;
        let ok = ms.iter().filter(|m| m.matched()).count();
        Ok((ok == ms.len(), format!("{ok} of {} coefficients", ms.len())))
    });
    c.run("rank", "linear system with lambda4 = 0", || {
        let r = rank_report(&set, opts.seed, 2)?;
        let full = r.ranks.iter().all(|&(a, b)| a == r.unknowns && b == r.unknowns);
        let shown = r.ranks.iter().map(|(a, b)| format!("{a}/{b}")).collect::<Vec<_>>().join(" ");
        Ok((full, format!("{} equations, {} unknowns, ranks {shown}", r.equations, r.unknowns)))
    });
    c.finish("equations36")
}

pub fn combos(sys: &StructureSystem, opts: &Options) -> Report {
    let mut c = Checks::new(opts);
    match dependence_relations(sys.ctx()) {
        Ok(cs) => {
            for k in cs {
                c.run(k.name.clone(), "linear combination", || Ok((k.passed(), render_residual(&k.residual))));
            }
        }
        Err(e) => {
            c.run("combinations", "dependence relations", || Err(e));
        }
    }
    c.finish("combos")
}

pub fn symmetry(sys: &StructureSystem, opts: &Options) -> Report {
    let mut c = Checks::new(opts);
    let group = symmetry_group();
    c.run("order", "group generated by the replacements", || {
        let closed = group.iter().all(|x| group.iter().all(|y| group.contains(&x.then(y))));
        Ok((group.len() == 32 && closed, format!("{} elements", group.len())))
    });
    let r = SymmetryElement::rep;
    let identities = [
        ("conjugation", "rep(iv) rep(i) rep(iv) = rep(ii)", r(4).then(&r(1)).then(&r(4)) == r(2)),
        ("composition_12", "rep(i) rep(ii) = rep(iii)", r(1).then(&r(2)) == r(3)),
        ("composition_14", "rep(i) rep(iv) = rpl(v)", r(1).then(&r(4)) == SymmetryElement::rpl(5)),
    ];
    for (id, reference, ok) in identities {
        c.run(id, reference, || Ok((ok, String::new())));
    }
    for (row, entry) in SWEEP_TABLE.iter().enumerate() {
        c.run(format!("sweep/{}", entry.0), entry.1, || Ok((matches_sweep_row(sys, row)?, entry.2.into())));
    }
    for k in 1..=5 {
        c.run(format!("rpl/{k}"), "images of E, H, S", || Ok((matches_rpl_row(k), String::new())));
    }
    c.run("rules", "structure equations invariant", || {
        let mut bad = 0;
        for g in &group {
            if !g.preserves_rules(sys)? {
                bad += 1;
            }
        }
        Ok((bad == 0, format!("{} of 32 preserve", 32 - bad)))
    });
    c.run("curvature_table", "nonzero curvature components", || {
        let n = group.iter().filter(|g| preserves_curvature_table(g)).count();
        Ok((n == 32, format!("{n} of 32 preserve")))
    });
    c.run("rotation", "R(ce1+se2, ce3+se4, ce1+se2, ce3+se4) = (c^2+s^2)^2 sigma", || {
        let rot = rotation_invariance();
        Ok((rot.passed(), rot.rce.to_string()))
    });
    c.run("permutes_derived", "group acts on the derived set", || {
        let (_, set) = derived_set(sys)?;
        let mut bad = 0;
        for g in &group {
            if g.permutes(&set)?.is_none() {
                bad += 1;
            }
        }
        Ok((bad == 0, format!("{} of 32 permute", 32 - bad)))
    });
    c.run("numeric_orbit", "32 elements and 16 rotations on sampled points", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let pt = numeric::build_curvature(rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0));
            let angles: Vec<f64> = (0..16).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
            worst = worst.max(numeric::symmetry_orbit_check(&pt, &angles));
        }
        Ok((worst < opts.tol, format!("max {worst:.3e}")))
    });
    c.finish("symmetry")
}

pub fn pipeline(suite: &str, rep: PipelineReport, opts: &Options) -> Report {
    let mut c = Checks::new(opts);
    for s in &rep.steps {
        c.run(s.id.clone(), s.expected.clone(), || {
            let v = match (&s.residual, &s.factor) {
                (Some(r), _) => r.clone(),
                (None, Some(f)) => format!("factor {f}; {}", s.values.join(", ")),
                (None, None) => s.values.join(", "),
            };
            Ok((s.passed, v))
        });
    }
    c.run("conclusion", rep.assumptions.join("; "), || {
        let mut v = rep.conclusion.clone();
        if let Some(cert) = &rep.certificate {
            v = format!("{v}; certificate {cert}");
        }
        Ok((rep.passed, v))
    });
    c.finish(suite)
}

pub fn numeric_sweep(opts: &Options) -> Report {
    let mut c = Checks::new(opts);
    let start = Instant::now();
    let rep = numeric::sweep(opts.seed, opts.points, opts.tol);
    let ms = start.elapsed().as_secs_f64() * 1e3;
    c.run("points", "lambda, sigma uniform in [-2, 2]", || {
        Ok((rep.points == opts.points && rep.points > 0, format!("{} points, seed {}", rep.points, rep.seed)))
    });
    for k in &rep.checks {
        c.run(k.name.clone(), describe(&k.name), || Ok((k.passed, format!("max {:.3e}", k.max_residual))));
    }
    c.run("scalar_curvature_exact", "s = 0 from the integer component table", || {
        let s = numeric::exact_scalar_curvature();
        Ok((s == (0, 0), format!("{} lambda + {} sigma", s.0, s.1)))
    });
    if let Some(first) = c.out.first_mut() {
        first.runtime_ms = opts.timings.then_some((ms * 1e3).round() / 1e3);
    }
    c.finish("numeric")
}

fn describe(id: &str) -> &'static str {
    match id {
        "curvature_symmetries" => "skew, pair exchange, Bianchi, J-invariance",
        "ricci_spectrum" => "Ricci = diag(-l, -l, l, l)",
        "scalar_curvature" => "s = 0",
        "weyl_table" => "W equals the table at lambda = 0",
        "ricci_form" => "rho = -lambda (A^B - C^D)",
        "weakly_einstein" => "R o R = (|R|^2 / 4) g",
        "squared_norm" => "|R|^2 = 8 l^2 + 32 s^2",
        "weyl_eigenvalues" => "W on (zeta, eta, theta) = (0, 2s, -2s)",
        "w_rho" => "W rho = 0",
        "w_plus" => "W+ = 0",
        "orientation" => "omega self-dual, zeta, eta, theta anti-self-dual",
        "symmetry_orbit" => "32 elements and 17 rotation angles",
        _ => "",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(run("nope", &StructureSystem::shipped(), &Options::default()).is_none());
    }

    #[test]
    fn structure_passes_and_is_deterministic() {
        let sys = StructureSystem::shipped();
        let a = structure(&sys, &Options::default());
        assert!(a.passed(), "{a}");
        assert_eq!(a.to_json(), structure(&sys, &Options::default()).to_json());
        let t = structure(&sys, &Options { timings: true, ..Options::default() });
        assert!(t.checks.iter().all(|c| c.runtime_ms.is_some()));
    }

    #[test]
    fn numeric_ids_are_slugs() {
        let r = numeric_sweep(&Options { points: 3, ..Options::default() });
        assert!(r.passed(), "{r}");
        assert!(r.checks.iter().all(|c| c.id.chars().all(|ch| ch.is_ascii_lowercase() || ch == '_')));
        assert!(r.checks.iter().all(|c| !c.reference.is_empty()));
    }

    #[test]
    fn failing_step_fails_the_suite() {
        let mut p = cases::const_lambda();
        p.steps[0].expect = cases::Expect::Values(vec!["1"]);
        let r = pipeline("x", p.run(), &Options::default());
        assert!(!r.passed());
        assert_eq!(r.failed()[0].id, p.steps[0].id);
    }
}
