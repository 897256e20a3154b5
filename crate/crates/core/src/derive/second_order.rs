//! The thirty-six second-order equations: derivation from `d² = 0` and the
//! component identities of the extra 1-forms, membership of each
//! transcription, symmetry variants and linear dependence relations.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::symmetry::SymmetryElement;
use super::{linear_parts, render_residual, transcribed, unit_ratio, DeriveError, Equation, UnitFactor};
use crate::algebra::{atoms, rank, ratio, solve_unit_pivot, AtomSet, LocFrac, Rational, Var};
use crate::forms::{DForm, PAIRS};
use crate::jets::{jet, JetContext};
use crate::structure::StructureSystem;

/// Labels of the transcribed second-order equations, in display order.
pub const LABELS_36: [&str; 36] = [
    "a", "a4", "b", "b1", "b2", "b3", "c", "c1", "c4", "c5", "d", "d1", "d2", "d3", "e", "e1", "e2", "e3", "f",
    "f4", "g", "g1", "g2", "g3", "h", "h4", "i", "i1", "i2", "i3", "j", "j4", "k", "k1", "k2", "k3",
];

/// Engine-derived equations, each affine-linear in `symbols`.
#[derive(Clone, Debug)]
pub struct DerivedSet {
    pub equations: Vec<Equation>,
    pub symbols: Vec<Var>,
    pub ctx: JetContext,
}

impl DerivedSet {
    pub fn get(&self, label: &str) -> Option<&Equation> {
        self.equations.iter().find(|e| e.label == label)
    }

    pub fn atoms(&self) -> &AtomSet {
        self.ctx.atoms()
    }
}

fn pair_name(names: &[&str], p: (usize, usize)) -> String {
    format!("{}{}", names[p.0], names[p.1])
}

/// Six coefficients each of `d(dλ)`, `d(dσ)` and `dZ − (rule for dZ)` for
/// `Z = F, G, L, S`, all with the connection solution substituted.
pub fn derive_36(sys: &StructureSystem, sol: &HashMap<Var, LocFrac>) -> Result<DerivedSet, DeriveError> {
    let images = sys.images_with(sol)?;
    let frame = sys.frame_rules(&images)?;
    let names = sys.generator_names();
    let mut forms: Vec<(String, DForm)> = Vec::new();
    for s in &sys.scalars {
        let ddf = frame.ext_d(&frame.d_scalar(&LocFrac::named(s))?)?;
        forms.push((format!("dd{s}"), ddf));
    }
    for z in ["F", "G", "L", "S"] {
        let g = names
            .iter()
            .position(|n| *n == z)
            .ok_or_else(|| DeriveError::Mismatch(format!("no generator {z}")))?;
        let lhs = frame.ext_d(&images[g])?;
        let rhs = sys.rules.rule(g)?.substitute_generators(&images);
        forms.push((format!("d{z}"), lhs.sub(&rhs)));
    }
    let mut equations = Vec::new();
    for (tag, f) in forms {
        for (p, c) in PAIRS.iter().zip(f.coeff6()?) {
            equations.push(Equation::new(format!("{tag}.{}", pair_name(&names[..4], *p)), c));
        }
    }
    Ok(DerivedSet {
        equations,
        symbols: sys.ctx().second_order_symbols(),
        ctx: sys.ctx().clone(),
    })
}

/// Outcome of testing one equation for membership in a [`DerivedSet`].
#[derive(Clone, Debug)]
pub struct Match {
    pub label: String,
    /// Derived equations used, with their coefficients.
    pub sources: Vec<(String, LocFrac)>,
    /// `transcribed = multiplier · source` when a single source suffices.
    pub multiplier: Option<UnitFactor>,
    /// `transcribed − Σ coefficient · source`.
    pub residual: LocFrac,
}

impl Match {
    pub fn matched(&self) -> bool {
        self.residual.is_zero() && !self.sources.is_empty()
    }
}

/// One record of the derivation trace.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct TraceEntry {
    pub source: String,
    pub multiplier: Option<String>,
    pub matched: bool,
    pub residual: String,
}

impl From<&Match> for TraceEntry {
    fn from(m: &Match) -> Self {
        let source = m
            .sources
            .iter()
            .map(|(l, _)| l.as_str())
            .collect::<Vec<_>>()
            .join(" + ");
        TraceEntry {
            source,
            multiplier: m.multiplier.as_ref().map(|u| u.to_string()),
            matched: m.matched(),
            residual: if m.residual.is_zero() {
                "0".into()
            } else {
                render_residual(&m.residual)
            },
        }
    }
}

/// Tests `target` against the set: first as a unit multiple of a single
/// derived equation, then as a combination found by matching coefficients
/// of the second-order symbols.
///
/// On failure the residual is the certificate: if some derived equation has
/// a second-order part proportional to the target's, the leftover
/// first-order difference; otherwise the best combination's remainder.
pub fn membership(target: &Equation, set: &DerivedSet) -> Match {
    let atoms = set.atoms();
    for d in &set.equations {
        if let Some(m) = unit_ratio(&target.value, &d.value, atoms) {
            return Match {
                label: target.label.clone(),
                sources: vec![(d.label.clone(), m.to_frac())],
                multiplier: Some(m),
                residual: LocFrac::zero(),
            };
        }
    }
    let parts: Vec<(Vec<LocFrac>, LocFrac)> =
        set.equations.iter().map(|d| linear_parts(&d.value, &set.symbols)).collect();
    let (tc, _) = linear_parts(&target.value, &set.symbols);

    let mut certificate: Option<Match> = None;
    for (d, (dc, _)) in set.equations.iter().zip(&parts) {
        if let Some(m) = proportional(&tc, dc, atoms) {
            let f = m.to_frac();
            certificate = Some(Match {
                label: target.label.clone(),
                sources: vec![(d.label.clone(), f.clone())],
                multiplier: Some(m),
                residual: &target.value - &(&f * &d.value),
            });
            break;
        }
    }

    let matrix: Vec<Vec<LocFrac>> = (0..set.symbols.len())
        .map(|r| parts.iter().map(|p| p.0[r].clone()).collect())
        .collect();
    let combined = solve_unit_pivot(&matrix, &tc, atoms).ok().map(|x| {
        let mut residual = target.value.clone();
        let mut sources = Vec::new();
        for (d, c) in set.equations.iter().zip(x) {
            if !c.is_zero() {
                residual = &residual - &(&c * &d.value);
                sources.push((d.label.clone(), c));
            }
        }
        Match {
            label: target.label.clone(),
            sources,
            multiplier: None,
            residual,
        }
    });
    match (combined, certificate) {
        (Some(m), _) if m.matched() => m,
        (_, Some(c)) => c,
        (Some(m), None) => m,
        (None, None) => Match {
            label: target.label.clone(),
            sources: Vec::new(),
            multiplier: None,
            residual: target.value.clone(),
        },
    }
}

/// `m` with `a = m·b` entrywise, for a unit `m`.
fn proportional(a: &[LocFrac], b: &[LocFrac], atoms: &AtomSet) -> Option<UnitFactor> {
    let k = b.iter().position(|x| !x.is_zero())?;
    let m = unit_ratio(&a[k], &b[k], atoms)?;
    let f = m.to_frac();
    a.iter().zip(b).all(|(x, y)| *x == &f * y).then_some(m)
}

/// Membership for every transcription in [`LABELS_36`].
pub fn match_all(set: &DerivedSet) -> Result<Vec<Match>, DeriveError> {
    LABELS_36
        .iter()
        .map(|l| Ok(membership(&transcribed(l, &set.ctx)?, set)))
        .collect()
}

/// Transcriptions whose printed form fails membership, paired with the
/// label of a corrected reading kept alongside them.
pub const CORRECTED_READINGS: [(&str, &str); 1] = [("d2", "d2_corrected")];

/// Membership of each corrected reading.
pub fn match_corrected(set: &DerivedSet) -> Result<Vec<Match>, DeriveError> {
    CORRECTED_READINGS
        .iter()
        .map(|(_, c)| Ok(membership(&transcribed(c, &set.ctx)?, set)))
        .collect()
}

/// Derivation trace keyed by label.
pub fn trace(matches: &[Match]) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = matches
        .iter()
        .map(|m| (m.label.clone(), serde_json::to_value(TraceEntry::from(m)).expect("plain data")))
        .collect();
    serde_json::Value::Object(map)
}

/// A subscripted transcription compared with the image of its base under
/// the corresponding replacement.
#[derive(Clone, Debug)]
pub struct VariantCheck {
    pub label: String,
    pub base: String,
    pub case: usize,
    /// `variant = factor · image(base)`.
    pub factor: Option<UnitFactor>,
}

/// Which base equation and replacement case produce each subscripted label.
pub fn variant_table() -> Vec<(&'static str, &'static str, usize)> {
    LABELS_36
        .iter()
        .filter_map(|l| {
            let (base, digit) = l.split_at(1);
            digit.parse::<usize>().ok().map(|k| (*l, &base[..], k))
        })
        .map(|(l, b, k)| {
            let base: &'static str = LABELS_36.iter().find(|x| **x == b).expect("base label");
            (l, base, k)
        })
        .collect()
}

pub fn variant_checks(ctx: &JetContext) -> Result<Vec<VariantCheck>, DeriveError> {
    let mut out = Vec::new();
    for (label, base, case) in variant_table() {
        let g = SymmetryElement::rpl(case);
        let image = g.act_on_scalar(&transcribed(base, ctx)?.value, ctx)?;
        let target = transcribed(label, ctx)?.value;
        out.push(VariantCheck {
            label: label.to_string(),
            base: base.to_string(),
            case,
            factor: unit_ratio(&target, &image, ctx.atoms()),
        });
    }
    Ok(out)
}

/// `Σ cᵢ·sourceᵢ − scale·target`.
#[derive(Clone, Debug)]
pub struct CombinationCheck {
    pub name: String,
    pub residual: LocFrac,
}

impl CombinationCheck {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn check_combination(
    name: &str,
    target: &Equation,
    scale: &LocFrac,
    sources: &[(&Equation, LocFrac)],
) -> CombinationCheck {
    let mut r = -(scale * &target.value);
    for (e, c) in sources {
        r = &r + &(c * &e.value);
    }
    CombinationCheck {
        name: name.to_string(),
        residual: r,
    }
}

/// The four dependence relations among the transcriptions and the two
/// combinations giving the first-order constraints.
pub fn dependence_relations(ctx: &JetContext) -> Result<Vec<CombinationCheck>, DeriveError> {
    let t = |l: &str| transcribed(l, ctx);
    let ls = &LocFrac::int(8) * &(&LocFrac::named("lambda") * &LocFrac::named("sigma"));
    let mp = atoms::mu_plus_frac();
    let mm = atoms::mu_minus_frac();
    let ms = atoms::mu_star_frac();
    let one = LocFrac::one();
    let specs: Vec<(&str, &str, LocFrac, Vec<(&str, LocFrac)>)> = vec![
        ("e3", "e3", one.clone(), vec![("a", &ls * &mp), ("a4", -(&ls * &mm)), ("e", one.clone())]),
        ("e1", "e1", one.clone(), vec![("a", &ls * &mm), ("a4", -(&ls * &mp)), ("e2", one.clone())]),
        (
            "i1",
            "i1",
            one.clone(),
            vec![("c1", mm.clone()), ("c5", -mp.clone()), ("g", ls.clone()), ("g3", -ls.clone()), ("i2", one.clone())],
        ),
        (
            "i3",
            "i3",
            one.clone(),
            vec![("c", mp.clone()), ("c4", -mm.clone()), ("g2", ls.clone()), ("g1", -ls.clone()), ("i", one.clone())],
        ),
        (
            "intro_a",
            "intro_a",
            &LocFrac::int(4) * &ls,
            vec![("b2", &ls * &ms), ("b1", -(&ls * &ms)), ("c", -mp.clone()), ("c4", mm.clone())],
        ),
        (
            "intro_b",
            "intro_b",
            &LocFrac::int(4) * &ls,
            vec![("b", &ls * &ms), ("b3", &ls * &ms), ("c1", mm.clone()), ("c5", -mp.clone())],
        ),
    ];
    let mut out = Vec::new();
    for (name, target, scale, srcs) in specs {
        let target = t(target)?;
        let mut eqs = Vec::new();
        for (l, c) in srcs {
            eqs.push((t(l)?, c));
        }
        let refs: Vec<(&Equation, LocFrac)> = eqs.iter().map(|(e, c)| (e, c.clone())).collect();
        out.push(check_combination(name, &target, &scale, &refs));
    }
    Ok(out)
}

/// `d(deᵏ)` under the connection solution, coefficient by coefficient.
///
/// Frame `d` and abstract `d` differ only on the extra 1-forms, where the
/// difference is the derived 2-form `dZ − (rule for dZ)`. Inserting
/// placeholders for its six coefficients gives an explicit combination of
/// derived equations for every coefficient of `d(deᵏ)`; the residual of
/// that combination must vanish.
pub fn frame_closure(
    sys: &StructureSystem,
    sol: &HashMap<Var, LocFrac>,
    set: &DerivedSet,
) -> Result<Vec<Match>, DeriveError> {
    let images = sys.images_with(sol)?;
    let frame = sys.frame_rules(&images)?;
    let names = sys.generator_names();
    let holder = |label: &str| Var::named(&format!("[{label}]"));
    let mut deltas: Vec<Option<DForm>> = vec![None; names.len()];
    for (g, slot) in deltas.iter_mut().enumerate().skip(4) {
        let mut f = DForm::zero(2);
        for p in PAIRS {
            let label = format!("d{}.{}", names[g], pair_name(&names[..4], p));
            f = f.add(&DForm::basis(LocFrac::var(holder(&label)), &[p.0, p.1]));
        }
        *slot = Some(f);
    }
    let values: HashMap<Var, LocFrac> =
        set.equations.iter().map(|e| (holder(&e.label), e.value.clone())).collect();
    let holders: Vec<Var> = set.equations.iter().map(|e| holder(&e.label)).collect();

    let mut out = Vec::new();
    for k in 0..4 {
        let rule = sys.rules.rule(k)?;
        let mut combo = sys.rules.ext_d(rule)?.substitute_generators(&images);
        for (b, c) in rule.terms() {
            let gens: Vec<usize> = (0..16).filter(|i| b & (1 << i) != 0).collect();
            for (m, &g) in gens.iter().enumerate() {
                let Some(delta) = &deltas[g] else { continue };
                let mut piece = DForm::scalar(c.clone());
                for &h in &gens[..m] {
                    piece = piece.wedge(&images[h]);
                }
                piece = piece.wedge(delta);
                for &h in &gens[m + 1..] {
                    piece = piece.wedge(&images[h]);
                }
                combo = if m % 2 == 1 { combo.sub(&piece) } else { combo.add(&piece) };
            }
        }
        let dd = frame.ext_d(frame.rule(k)?)?;
        for ((t, c), w) in crate::forms::TRIPLES.iter().zip(dd.coeff4()?).zip(combo.coeff4()?) {
            let label = format!("dd{}.{}{}{}", names[k], names[t[0]], names[t[1]], names[t[2]]);
            let (coeffs, _) = linear_parts(&w, &holders);
            let expanded = w.substitute(&values, set.atoms())?;
            let sources = set
                .equations
                .iter()
                .zip(coeffs)
                .filter(|(_, x)| !x.is_zero())
                .map(|(e, x)| (e.label.clone(), x))
                .collect::<Vec<_>>();
            let identically_zero = c.is_zero();
            out.push(Match {
                label,
                sources: if identically_zero && sources.is_empty() {
                    vec![("0".into(), LocFrac::zero())]
                } else {
                    sources
                },
                multiplier: None,
                residual: &c - &expanded,
            });
        }
    }
    Ok(out)
}

/// Rank of the linear system in `Sᵢ, λᵢⱼ, σᵢⱼ` once `λ₄ = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub equations: usize,
    pub unknowns: usize,
    /// `(coefficient rank, augmented rank)` at each sample point.
    pub ranks: Vec<(usize, usize)>,
}

/// The thirty equations without `Sᵢⱼ`, plus the four directional
/// derivatives of each first-order constraint, evaluated with `λ₄ = 0` at
/// random rational points where both constraints hold (solved for σ₁, σ₂).
pub fn rank_report(set: &DerivedSet, seed: u64, points: usize) -> Result<RankReport, DeriveError> {
    let ctx = &set.ctx;
    let mut eqs: Vec<LocFrac> = set
        .equations
        .iter()
        .filter(|e| !e.label.starts_with("dS."))
        .map(|e| e.value.clone())
        .collect();
    let intro = [transcribed("intro_a", ctx)?, transcribed("intro_b", ctx)?];
    for e in &intro {
        for j in 1..=4 {
            eqs.push(ctx.derive(&e.value, j)?);
        }
    }
    let mut zero: HashMap<Var, LocFrac> = HashMap::new();
    zero.insert(jet("lambda", &[4]), LocFrac::zero());
    for j in 1..=4 {
        zero.insert(jet("lambda", &[4, j]), LocFrac::zero());
    }
    let eqs: Vec<LocFrac> = eqs.iter().map(|e| ctx.apply_map(e, &zero)).collect::<Result<_, _>>()?;
    let mut unknowns: Vec<Var> = (1..=4).map(|i| jet("S", &[i])).collect();
    for f in ["lambda", "sigma"] {
        for i in 1..=4 {
            for j in 1..=4 {
                if !(f == "lambda" && i == 4) {
                    unknowns.push(jet(f, &[i, j]));
                }
            }
        }
    }
    let parts: Vec<(Vec<LocFrac>, LocFrac)> = eqs.iter().map(|e| linear_parts(e, &unknowns)).collect();

    // σ₁ and σ₂ solved from the constraints (λ₄ = 0), which are linear in them.
    let constraint = |e: &Equation| ctx.apply_map(&e.value, &zero);
    let ca = constraint(&intro[0])?;
    let cb = constraint(&intro[1])?;
    let s12 = [jet("sigma", &[1]), jet("sigma", &[2])];
    let (la, ka) = linear_parts(&ca, &s12);
    let (lb, kb) = linear_parts(&cb, &s12);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ranks = Vec::new();
    let mut attempts = 0;
    while ranks.len() < points && attempts < 50 * points.max(1) {
        attempts += 1;
        let mut pt: HashMap<Var, Rational> = HashMap::new();
        let draw = |rng: &mut ChaCha8Rng| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        for name in ["lambda", "sigma"] {
            pt.insert(Var::named(name), draw(&mut rng));
        }
        for i in 1..=3 {
            pt.insert(jet("lambda", &[i]), draw(&mut rng));
        }
        for i in 3..=4 {
            pt.insert(jet("sigma", &[i]), draw(&mut rng));
        }
        pt.insert(jet("lambda", &[4]), ratio(0, 1));
        let ev = |f: &LocFrac, pt: &HashMap<Var, Rational>| f.eval(pt);
        let m = [
            [ev(&la[0], &pt), ev(&la[1], &pt)],
            [ev(&lb[0], &pt), ev(&lb[1], &pt)],
        ];
        let k = [ev(&ka, &pt), ev(&kb, &pt)];
        let (Some(a), Some(b), Some(c), Some(d), Some(ka), Some(kb)) =
            (m[0][0].clone(), m[0][1].clone(), m[1][0].clone(), m[1][1].clone(), k[0].clone(), k[1].clone())
        else {
            continue;
        };
        let det = &a * &d - &b * &c;
        if det == ratio(0, 1) {
            continue;
        }
        pt.insert(s12[0], (-(&d * &ka) + &b * &kb) / &det);
        pt.insert(s12[1], (&c * &ka - &a * &kb) / &det);
        let mut rows = Vec::new();
        let mut aug = Vec::new();
        let mut ok = true;
        for (c, k) in &parts {
            let mut row = Vec::new();
            for x in c {
                match x.eval(&pt) {
                    Some(v) => row.push(v),
                    None => ok = false,
                }
            }
            let mut arow = row.clone();
            match k.eval(&pt) {
                Some(v) => arow.push(v),
                None => ok = false,
            }
            rows.push(row);
            aug.push(arow);
        }
        if !ok {
            continue;
        }
        ranks.push((rank(&rows), rank(&aug)));
    }
    Ok(RankReport {
        equations: eqs.len(),
        unknowns: unknowns.len(),
        ranks,
    })
}

/// The derived equation `d(dλ)` along `e₁∧e₂`, used for a quick smoke check.
pub fn ddlambda_ab(set: &DerivedSet) -> Option<&Equation> {
    set.get("ddlambda.AB")
}

#[cfg(test)]
mod tests {
    use super::super::connection::{derive_nel, solve_sol};
    use super::*;
    use once_cell::sync::Lazy;

    static SET: Lazy<(StructureSystem, HashMap<Var, LocFrac>, DerivedSet)> = Lazy::new(|| {
        let sys = StructureSystem::shipped();
        let sol = solve_sol(&derive_nel(&sys).unwrap(), sys.ctx()).unwrap();
        let set = derive_36(&sys, &sol).unwrap();
        (sys, sol, set)
    });

    #[test]
    fn thirty_six_derived() {
        let set = &SET.2;
        assert_eq!(set.equations.len(), 36);
        let ab = ddlambda_ab(set).unwrap();
        let (c, _) = linear_parts(&ab.value, &[jet("lambda", &[2, 1]), jet("lambda", &[1, 2])]);
        assert_eq!(c[0], LocFrac::one());
        assert_eq!(c[1], -LocFrac::one());
    }

    /// Magnitude of the multiplier expected for each family of labels.
    pub(crate) fn expected_multiplier(label: &str) -> &'static str {
        match &label[..1] {
            "a" | "b" => "4 sigma",
            "c" | "d" | "e" => "256 lambda^2 sigma^3",
            "f" | "g" => "32 lambda sigma^2",
            "h" | "i" => "512 lambda^2 sigma^4",
            _ => "32 lambda sigma^2",
        }
    }

    #[test]
    fn transcriptions_are_members_except_printed_d2() {
        let ms = match_all(&SET.2).unwrap();
        for m in &ms {
            if m.label == "d2" {
                continue;
            }
            assert!(m.matched(), "{}: {}", m.label, render_residual(&m.residual));
            let u = m.multiplier.as_ref().expect("single source").to_string();
            assert_eq!(u.trim_start_matches('-'), expected_multiplier(&m.label), "{}", m.label);
        }
        let d2 = ms.iter().find(|m| m.label == "d2").unwrap();
        assert!(!d2.matched());
        assert_eq!(d2.sources[0].0, "dG.AD");
        let want = (&LocFrac::int(64) * &LocFrac::named("lambda").pow(2))
            .mul_poly(&crate::algebra::Poly::named("sigma"))
            .mul_poly(&(&crate::algebra::Poly::named("lambda4") * &crate::algebra::Poly::named("sigma4")));
        assert_eq!(d2.residual, want);
        let fixed = match_corrected(&SET.2).unwrap();
        assert!(fixed[0].matched());
        assert_eq!(fixed[0].sources[0].0, "dG.AD");
    }

    #[test]
    fn variants_follow_replacements() {
        let ctx = &SET.2.ctx;
        let vs = variant_checks(ctx).unwrap();
        assert_eq!(vs.len(), 25);
        for v in &vs {
            assert_eq!(v.factor.is_some(), v.label != "d2", "{} from {} via case {}", v.label, v.base, v.case);
        }
        let image = SymmetryElement::rpl(2).act_on_scalar(&transcribed("d", ctx).unwrap().value, ctx).unwrap();
        let fixed = transcribed("d2_corrected", ctx).unwrap().value;
        assert!(unit_ratio(&fixed, &image, ctx.atoms()).is_some());
    }

    #[test]
    fn dependence_relations_hold() {
        for c in dependence_relations(&SET.2.ctx).unwrap() {
            assert!(c.passed(), "{}: {}", c.name, render_residual(&c.residual));
        }
    }

    #[test]
    fn frame_closure_in_span() {
        let (sys, sol, set) = &*SET;
        for m in frame_closure(sys, sol, set).unwrap() {
            assert!(m.matched(), "{}: {}", m.label, render_residual(&m.residual));
        }
    }

    #[test]
    fn rank_report_is_seeded() {
        let a = rank_report(&SET.2, 3, 2).unwrap();
        let b = rank_report(&SET.2, 3, 2).unwrap();
        assert_eq!(a.ranks, b.ranks);
        assert_eq!(a.unknowns, 32);
        assert_eq!(a.equations, 38);
        eprintln!("{a:?}");
    }
}
