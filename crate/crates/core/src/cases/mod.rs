//! Step-verified elimination arguments.
//!
//! A [`Pipeline`] is data: initial facts, then a list of steps, each an
//! operation on transcribed equations or earlier results together with the
//! value it must reproduce. The engine keeps a fact map `symbol → value`
//! that is applied to everything it reads. Facts about functions that hold
//! on an open set are differentiated along the frame when asked to, so
//! `λ₁ ≡ 0` also yields `λ₁ⱼ = 0`.

mod pipelines;
mod sos;

pub use pipelines::{case_ii, case_iii, const_lambda};
pub use sos::{sos_certificate, Inconclusive, SosCertificate};

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::{Atom, AtomSet, LocFrac, Poly, Var};
use crate::derive::{derive_nel, linear_parts, resolver, solve_sol, transcribed, unit_ratio, DeriveError};
use crate::expr::parse_equation_file;
use crate::jets::{JetContext, JetError};
use crate::structure::StructureSystem;

/// Where an operand comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Src {
    /// A transcribed equation, `lhs − rhs`.
    Eq(&'static str),
    /// The first value produced by an earlier step.
    Step(&'static str),
}

impl Src {
    fn describe(&self) -> String {
        match self {
            Src::Eq(l) => format!("({l})"),
            Src::Step(s) => format!("step {s}"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Op {
    /// Reads the operand under the current facts.
    Substitute(Src),
    /// Evaluates expressions under the facts; `{i}` and `{j}` range over
    /// `1..=4`.
    Evaluate(Vec<&'static str>),
    /// The rule for `d` of a generator with every 1-form written in
    /// components; yields the six 2-form coefficients.
    Rule(&'static str),
    /// One entry of an earlier step's values.
    Entry(&'static str, usize),
    /// Solves the operand for `symbol`, whose coefficient must be a unit,
    /// and records the result as a fact. With `propagate`, the frame
    /// derivatives of the fact are recorded as well.
    Solve {
        from: Src,
        symbol: &'static str,
        propagate: bool,
    },
    /// `Σ coeffᵢ · operandᵢ` with coefficients given as expressions.
    Combine(Vec<(Src, &'static str)>),
    /// Cancels `symbol^power` between two operands.
    Eliminate {
        first: Src,
        second: Src,
        symbol: &'static str,
        power: u32,
    },
    /// Replaces `symbol^power` in `target` by its value from `relation`.
    Rewrite {
        target: Src,
        symbol: &'static str,
        power: u32,
        relation: Src,
    },
    /// Division by a unit.
    AtomDivide(Src, &'static str),
    /// Exact division by a polynomial known to be nonzero.
    Cofactor(Src, &'static str),
    /// `d/dλ` of the raw operand, with σ, σ′ functions of λ.
    LambdaDerivative(Src),
    /// Rational sum-of-squares certificate for the operand with its unit
    /// factors removed.
    Certificate(Src),
}

impl Op {
    /// The kind of step: `substitute`, `combine`, `atom_divide`,
    /// `derive-new-fact` or `certificate`.
    pub fn kind(&self) -> &'static str {
        match self {
            Op::Substitute(_) | Op::Evaluate(_) | Op::Rule(_) | Op::Entry(..) | Op::LambdaDerivative(_) => {
                "substitute"
            }
            Op::Combine(_) | Op::Eliminate { .. } | Op::Rewrite { .. } => "combine",
            Op::AtomDivide(..) | Op::Cofactor(..) => "atom_divide",
            Op::Solve { .. } => "derive-new-fact",
            Op::Certificate(_) => "certificate",
        }
    }

    fn describe(&self) -> String {
        match self {
            Op::Substitute(s) => format!("substitute into {}", s.describe()),
            Op::Evaluate(e) => format!("evaluate {}", e.join("; ")),
            Op::Rule(g) => format!("d{g} rule in components"),
            Op::Entry(s, i) => format!("entry {i} of step {s}"),
            Op::Solve { from, symbol, .. } => format!("solve {} for {symbol}", from.describe()),
            Op::Combine(t) => t
                .iter()
                .map(|(s, c)| format!("({c}) {}", s.describe()))
                .collect::<Vec<_>>()
                .join(" + "),
            Op::Eliminate {
                first,
                second,
                symbol,
                power,
            } => format!("eliminate {symbol}^{power} between {} and {}", first.describe(), second.describe()),
            Op::Rewrite {
                target,
                symbol,
                power,
                relation,
            } => format!("replace {symbol}^{power} in {} via {}", target.describe(), relation.describe()),
            Op::AtomDivide(s, by) => format!("divide {} by {by}", s.describe()),
            Op::Cofactor(s, by) => format!("cancel {by} from {}", s.describe()),
            Op::LambdaDerivative(s) => format!("d/dlambda of {}", s.describe()),
            Op::Certificate(s) => format!("sum of squares for {}", s.describe()),
        }
    }
}

/// What a step must reproduce.
#[derive(Clone, Debug)]
pub enum Expect {
    /// Every value vanishes.
    Zero,
    /// A unit multiple of the operand under the facts.
    Multiple(Src),
    /// The operand itself, up to sign.
    Exact(Src),
    /// Each value equals the listed expression.
    Values(Vec<&'static str>),
    /// A nonzero unit, which contradicts its vanishing.
    Unit,
    /// No value mentions any of the symbols.
    FreeOf(Vec<&'static str>),
    /// A certificate was found.
    Certified,
}

impl Expect {
    fn describe(&self) -> String {
        match self {
            Expect::Zero => "0".into(),
            Expect::Multiple(s) => format!("unit multiple of {}", s.describe()),
            Expect::Exact(s) => format!("{} up to sign", s.describe()),
            Expect::Values(v) => v.join(", "),
            Expect::Unit => "nonzero unit".into(),
            Expect::FreeOf(v) => format!("free of {}", v.join(", ")),
            Expect::Certified => "certificate".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Step {
    pub id: &'static str,
    pub op: Op,
    pub expect: Expect,
    pub justification: &'static str,
}

/// A fact imposed before the steps run. Templates may use `{i}`, `{j}`.
#[derive(Clone, Debug)]
pub struct InitialFact {
    pub symbol: &'static str,
    pub value: &'static str,
    pub propagate: bool,
}

#[derive(Clone, Debug)]
pub struct Pipeline {
    pub name: &'static str,
    pub assumptions: Vec<&'static str>,
    /// Atoms added to the standard ones.
    pub extra_atoms: Vec<Atom>,
    /// Start from the solved connection components.
    pub connection: bool,
    pub facts: Vec<InitialFact>,
    pub steps: Vec<Step>,
    pub conclusion: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub id: String,
    pub kind: String,
    pub operation: String,
    pub justification: String,
    pub expected: String,
    pub passed: bool,
    pub values: Vec<String>,
    /// Why the step failed: the residual or the engine error.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub name: String,
    pub assumptions: Vec<String>,
    pub atoms: Vec<String>,
    pub steps: Vec<StepReport>,
    pub conclusion: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<SosCertificate>,
    pub passed: bool,
}

impl PipelineReport {
    pub fn step(&self, id: &str) -> Option<&StepReport> {
        self.steps.iter().find(|s| s.id == id)
    }

    pub fn failed(&self) -> Vec<&StepReport> {
        self.steps.iter().filter(|s| !s.passed).collect()
    }
}

/// Expands `{i}` and `{j}` over `1..=4`.
fn expand(template: &str) -> Vec<String> {
    let mut out = vec![template.to_string()];
    for key in ["{i}", "{j}"] {
        if !template.contains(key) {
            continue;
        }
        out = out
            .iter()
            .flat_map(|t| (1..=4).map(move |k| t.replace(key, &k.to_string())))
            .collect();
    }
    out
}

/// Parses one scalar expression against the jet context.
pub fn parse_scalar(text: &str, ctx: &JetContext) -> Result<LocFrac, DeriveError> {
    let raws = parse_equation_file(&format!("expr: {text} = 0"))?;
    Ok(raws[0].value(&resolver(ctx), ctx.atoms())?)
}

struct State {
    ctx: JetContext,
    sys: Option<StructureSystem>,
    facts: HashMap<Var, LocFrac>,
    results: HashMap<&'static str, Vec<LocFrac>>,
}

impl State {
    fn atoms(&self) -> &AtomSet {
        self.ctx.atoms()
    }

    fn apply(&self, f: &LocFrac) -> Result<LocFrac, DeriveError> {
        let mut cur = f.clone();
        for _ in 0..16 {
            if !cur.num().vars().iter().any(|v| self.facts.contains_key(v)) {
                return Ok(cur);
            }
            cur = self.ctx.apply_map(&cur, &self.facts)?;
        }
        Err(DeriveError::Mismatch("facts do not reach a fixed point".into()))
    }

    fn add_fact(&mut self, v: Var, value: &LocFrac, propagate: bool) -> Result<(), DeriveError> {
        let value = self.apply(value)?;
        if value.num().contains_var(v) {
            return Err(DeriveError::Mismatch(format!("fact for {} refers to itself", v.name())));
        }
        let one: HashMap<Var, LocFrac> = [(v, value.clone())].into_iter().collect();
        for w in self.facts.values_mut() {
            if w.num().contains_var(v) {
                *w = self.ctx.apply_map(w, &one)?;
            }
        }
        self.facts.insert(v, value.clone());
        if propagate && self.ctx.order(v).is_some_and(|o| o <= 1) {
            for dir in 1..=4 {
                let dv = self.ctx.derive(&LocFrac::var(v), dir)?;
                let Some(&dvar) = dv.num().vars().iter().next() else {
                    continue;
                };
                if self.facts.contains_key(&dvar) {
                    continue;
                }
                match self.ctx.derive(&value, dir) {
                    Ok(dval) => self.add_fact(dvar, &dval, false)?,
                    Err(JetError::JetOrderExceeded { .. }) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
        Ok(())
    }

    fn raw(&self, s: Src) -> Result<LocFrac, DeriveError> {
        match s {
            Src::Eq(l) => Ok(transcribed(l, &self.ctx)?.value),
            Src::Step(id) => self
                .results
                .get(id)
                .and_then(|v| v.first().cloned())
                .ok_or_else(|| DeriveError::Missing(format!("step {id}"))),
        }
    }

    fn current(&self, s: Src) -> Result<LocFrac, DeriveError> {
        self.apply(&self.raw(s)?)
    }

    fn scalar(&self, text: &str) -> Result<LocFrac, DeriveError> {
        self.apply(&parse_scalar(text, &self.ctx)?)
    }

    fn run(&mut self, op: &Op) -> Result<Vec<LocFrac>, DeriveError> {
        let atoms = self.atoms().clone();
        match op {
            Op::Substitute(s) => Ok(vec![self.current(*s)?]),
            Op::Evaluate(exprs) => {
                let mut out = Vec::new();
                for e in exprs {
                    for t in expand(e) {
                        out.push(self.scalar(&t)?);
                    }
                }
                Ok(out)
            }
            Op::Rule(g) => {
                let sys = self
                    .sys
                    .as_ref()
                    .ok_or_else(|| DeriveError::Missing("structure system".into()))?;
                let k = sys
                    .generator_names()
                    .iter()
                    .position(|n| n == g)
                    .ok_or_else(|| DeriveError::Missing(format!("generator {g}")))?;
                let images = sys.images_with(&self.facts)?;
                let form = sys.rules.rule(k)?.substitute_generators(&images);
                let c = form.coeff6()?;
                c.iter().map(|x| self.apply(x)).collect()
            }
            Op::Entry(id, i) => {
                let v = self
                    .results
                    .get(id)
                    .and_then(|v| v.get(*i).cloned())
                    .ok_or_else(|| DeriveError::Missing(format!("entry {i} of step {id}")))?;
                Ok(vec![self.apply(&v)?])
            }
            Op::Solve {
                from,
                symbol,
                propagate,
            } => {
                let f = self.current(*from)?;
                let v = Var::named(symbol);
                let (c, rest) = linear_parts(&f, &[v]);
                if rest.num().contains_var(v) || c[0].num().contains_var(v) {
                    return Err(DeriveError::Mismatch(format!("{} is not linear in {symbol}", from.describe())));
                }
                let value = (-rest).div(&c[0], &atoms)?;
                self.add_fact(v, &value, *propagate)?;
                Ok(vec![f, value])
            }
            Op::Combine(terms) => {
                let mut acc = LocFrac::zero();
                for (s, c) in terms {
                    acc = &acc + &(&self.scalar(c)? * &self.current(*s)?);
                }
                Ok(vec![acc])
            }
            Op::Eliminate {
                first,
                second,
                symbol,
                power,
            } => {
                let a = self.current(*first)?;
                let b = self.current(*second)?;
                let v = Var::named(symbol);
                let ca = coefficient(&a, v, *power);
                let cb = coefficient(&b, v, *power);
                Ok(vec![&(&cb * &a) - &(&ca * &b)])
            }
            Op::Rewrite {
                target,
                symbol,
                power,
                relation,
            } => {
                let v = Var::named(symbol);
                let r = self.current(*relation)?;
                let cs = r.num().coefficients_in(v);
                let p = *power as usize;
                if cs.len() != p + 1 || cs[1..p].iter().any(|x| !x.is_zero()) {
                    return Err(DeriveError::Mismatch(format!(
                        "{} is not of the form c {symbol}^{power} + r",
                        relation.describe()
                    )));
                }
                let value = LocFrac::from_poly(-&cs[0]).div(&LocFrac::from_poly(cs[p].clone()), &atoms)?;
                let t = self.current(*target)?;
                let mut acc = LocFrac::zero();
                for (k, tk) in t.num().coefficients_in(v).into_iter().enumerate() {
                    let term = &(&LocFrac::from_poly(tk) * &LocFrac::var(v).pow((k % p) as u32)) * &value.pow((k / p) as u32);
                    acc = &acc + &term;
                }
                let den = LocFrac::new(Poly::one(), t.den().clone());
                Ok(vec![self.apply(&(&acc * &den))?])
            }
            Op::AtomDivide(s, by) => {
                let d = self.scalar(by)?;
                atoms.factor_unit(d.num())?;
                Ok(vec![self.current(*s)?.div(&d, &atoms)?])
            }
            Op::Cofactor(s, by) => {
                let t = self.current(*s)?;
                let d = self.scalar(by)?;
                let q = t
                    .num()
                    .div_exact(d.num())
                    .ok_or_else(|| DeriveError::Mismatch(format!("{by} does not divide {}", s.describe())))?;
                Ok(vec![LocFrac::new(q, t.den().clone()).div(&LocFrac::new(Poly::one(), d.den().clone()), &atoms)?])
            }
            Op::LambdaDerivative(s) => {
                let f = self.raw(*s)?;
                if !f.den().is_empty() {
                    return Err(DeriveError::Mismatch("d/dlambda needs a polynomial operand".into()));
                }
                let chain = [("lambda", None), ("sigma", Some("sigma'")), ("sigma'", Some("sigma''"))];
                let mut out = Poly::zero();
                for (name, next) in chain {
                    let d = f.num().partial(Var::named(name));
                    out += &match next {
                        None => d,
                        Some(n) => &d * &Poly::named(n),
                    };
                }
                Ok(vec![self.apply(&LocFrac::from_poly(out))?])
            }
            Op::Certificate(s) => Ok(vec![self.current(*s)?]),
        }
    }
}

/// Coefficient of `v^power` in `f`, as a fraction over `f`'s denominator.
fn coefficient(f: &LocFrac, v: Var, power: u32) -> LocFrac {
    let c = f.num().coefficients_in(v).get(power as usize).cloned().unwrap_or_else(Poly::zero);
    LocFrac::new(c, f.den().clone())
}

/// Checks values against the expectation; returns the residual on failure
/// and the unit factor on success where one applies.
fn check(state: &State, expect: &Expect, values: &[LocFrac]) -> Result<(bool, Option<String>, Option<String>), DeriveError> {
    let atoms = state.atoms();
    let single = || values.first().cloned().unwrap_or_else(LocFrac::zero);
    Ok(match expect {
        Expect::Zero => match values.iter().find(|v| !v.is_zero()) {
            None => (true, None, None),
            Some(r) => (false, Some(r.to_string()), None),
        },
        Expect::Multiple(s) | Expect::Exact(s) => {
            let want = state.current(*s)?;
            let got = single();
            if got.is_zero() && want.is_zero() {
                return Ok((true, None, None));
            }
            match unit_ratio(&got, &want, atoms) {
                Some(f) => {
                    let exact = f.atoms.is_empty() && (f.coeff == crate::algebra::rat(1) || f.coeff == crate::algebra::rat(-1));
                    let ok = matches!(expect, Expect::Multiple(_)) || exact;
                    (ok, (!ok).then(|| format!("factor {f} is not a sign")), Some(f.to_string()))
                }
                None => (false, Some((&got - &want).to_string()), None),
            }
        }
        Expect::Values(exprs) => {
            let mut bad = None;
            if exprs.len() != values.len() {
                bad = Some(format!("{} values, {} expected", values.len(), exprs.len()));
            }
            for (e, v) in exprs.iter().zip(values) {
                let w = state.scalar(e)?;
                if bad.is_none() && w != *v {
                    bad = Some(format!("{v} differs from {e}"));
                }
            }
            (bad.is_none(), bad, None)
        }
        Expect::Unit => {
            let v = single();
            let ok = !v.is_zero() && atoms.factor_unit(v.num()).is_ok();
            (ok, (!ok).then(|| v.to_string()), None)
        }
        Expect::FreeOf(syms) => {
            let hit = syms
                .iter()
                .find(|s| values.iter().any(|v| v.num().contains_var(Var::named(s))));
            (hit.is_none(), hit.map(|s| format!("{s} remains")), None)
        }
        Expect::Certified => (true, None, None),
    })
}

/// The primitive polynomial of `f` with unit factors stripped, and a
/// certificate for it or its negative.
fn certify(f: &LocFrac, atoms: &AtomSet) -> Result<SosCertificate, Inconclusive> {
    let (_, _, p) = f.normal_form(atoms);
    sos_certificate(&p).or_else(|_| sos_certificate(&-&p))
}

impl Pipeline {
    fn context(&self) -> JetContext {
        let mut ctx = JetContext::standard();
        for a in &self.extra_atoms {
            ctx.add_atom(*a);
        }
        ctx
    }

    /// Runs every step in order. A failing step is reported and the
    /// pipeline continues, so later steps show whether the failure matters.
    pub fn run(&self) -> PipelineReport {
        let ctx = self.context();
        let mut state = State {
            sys: self.connection.then(StructureSystem::shipped),
            ctx,
            facts: HashMap::new(),
            results: HashMap::new(),
        };
        let mut steps = Vec::new();
        let mut certificate = None;
        let setup = self.setup(&mut state);
        if let Err(e) = &setup {
            steps.push(StepReport {
                id: "setup".into(),
                kind: "substitute".into(),
                operation: "impose initial facts".into(),
                justification: self.assumptions.join("; "),
                expected: "consistent facts".into(),
                passed: false,
                values: Vec::new(),
                residual: Some(e.to_string()),
                factor: None,
            });
        }
        for step in &self.steps {
            // Expectations are read against the facts the step started from.
            let before = state.facts.clone();
            let outcome = state.run(&step.op).and_then(|vals| {
                let after = std::mem::replace(&mut state.facts, before);
                let checked = check(&state, &step.expect, &vals);
                state.facts = after;
                let (mut ok, mut residual, factor) = checked?;
                if let Op::Certificate(_) = step.op {
                    match certify(&vals[0], state.atoms()) {
                        Ok(c) => certificate = Some(c),
                        Err(e) => {
                            ok = false;
                            residual = Some(e.to_string());
                        }
                    }
                }
                Ok((vals, ok, residual, factor))
            });
            let report = match outcome {
                Ok((vals, ok, residual, factor)) => {
                    let shown = vals.iter().map(|v| v.to_string()).collect();
                    state.results.insert(step.id, vals);
                    StepReport {
                        id: step.id.into(),
                        kind: step.op.kind().into(),
                        operation: step.op.describe(),
                        justification: step.justification.into(),
                        expected: step.expect.describe(),
                        passed: ok,
                        values: shown,
                        residual,
                        factor,
                    }
                }
                Err(e) => StepReport {
                    id: step.id.into(),
                    kind: step.op.kind().into(),
                    operation: step.op.describe(),
                    justification: step.justification.into(),
                    expected: step.expect.describe(),
                    passed: false,
                    values: Vec::new(),
                    residual: Some(e.to_string()),
                    factor: None,
                },
            };
            steps.push(report);
        }
        let passed = steps.iter().all(|s| s.passed);
        PipelineReport {
            name: self.name.into(),
            assumptions: self.assumptions.iter().map(|s| s.to_string()).collect(),
            atoms: state.atoms().iter().map(|a| a.name()).collect(),
            steps,
            conclusion: self.conclusion.into(),
            certificate,
            passed,
        }
    }

    fn setup(&self, state: &mut State) -> Result<(), DeriveError> {
        if let Some(sys) = &state.sys {
            let nel = derive_nel(sys)?;
            let sol = solve_sol(&nel, sys.ctx())?;
            for (v, val) in sol {
                state.facts.insert(v, val);
            }
        }
        for f in &self.facts {
            for (sym, val) in expand_pair(f.symbol, f.value) {
                let value = parse_scalar(&val, &state.ctx)?;
                state.add_fact(Var::named(&sym), &value, f.propagate)?;
            }
        }
        Ok(())
    }
}

/// Expands a symbol/value template pair with shared indices.
fn expand_pair(symbol: &str, value: &str) -> Vec<(String, String)> {
    let mut out = vec![(symbol.to_string(), value.to_string())];
    for key in ["{i}", "{j}"] {
        if !symbol.contains(key) {
            continue;
        }
        out = out
            .iter()
            .flat_map(|(s, v)| (1..=4).map(move |k| (s.replace(key, &k.to_string()), v.replace(key, &k.to_string()))))
            .collect();
    }
    out
}
