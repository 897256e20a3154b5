//! Line-oriented text format for structure systems.
//!
//! ```text
//! frame A B C D                 # coframe, generators 0..3
//! scalars lambda sigma          # functions with jets
//! oneforms F G L S              # further generating 1-forms
//! nonzero lambda sigma mu+ mu-  # atoms allowed in denominators
//! define E = (S + L) / 2        # abbreviation, expanded in place
//! d A = B^E + C^F + D^G         # rewrite rule for d of a generator
//! ```
//!
//! `^`, `*` and juxtaposition all denote the wedge product (which is plain
//! multiplication on scalars), `**` raises a scalar to an integer power and
//! `/` divides by a nonzero scalar. `mu+`, `mu-`, `mu*` expand to
//! `2 sigma + lambda`, `2 sigma - lambda` and their product. Every line is
//! one directive; `#` starts a comment.

use std::collections::HashMap;

use crate::algebra::{Atom, AtomSet, LocFrac};
use crate::expr::{
    builtin_scalar, lex_line, Expr, Mode, MulOp, ParseError, ParseErrorKind, Parser, Pos, Tok,
    Token,
};
use crate::forms::{DForm, DRules};
use crate::jets::{parse_symbol, JetContext};

use super::StructureSystem;

#[derive(Debug, Clone, PartialEq)]
pub enum Directive {
    Frame(Vec<(String, Pos)>),
    Scalars(Vec<(String, Pos)>),
    OneForms(Vec<(String, Pos)>),
    Nonzero(Vec<(String, Pos)>),
    Define(String, Pos, Expr),
    D(String, Pos, Expr),
}

/// Parsed file, kept for faithful re-serialization.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EdsFile {
    pub directives: Vec<Directive>,
}

impl EdsFile {
    /// One directive per line in canonical spacing, without comments.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for d in &self.directives {
            let names = |kw: &str, xs: &[(String, Pos)]| {
                let v: Vec<&str> = xs.iter().map(|x| x.0.as_str()).collect();
                format!("{kw} {}", v.join(" "))
            };
            let line = match d {
                Directive::Frame(xs) => names("frame", xs),
                Directive::Scalars(xs) => names("scalars", xs),
                Directive::OneForms(xs) => names("oneforms", xs),
                Directive::Nonzero(xs) => names("nonzero", xs),
                Directive::Define(n, _, e) => format!("define {n} = {}", e.render(Mode::Eds)),
                Directive::D(n, _, e) => format!("d {n} = {}", e.render(Mode::Eds)),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Token kinds of a text, line by line, ignoring comments and blank lines.
pub fn token_kinds(text: &str) -> Result<Vec<Vec<Tok>>, ParseError> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let toks = lex_line(line, k + 1)?;
        if !toks.is_empty() {
            out.push(toks.into_iter().map(|t| t.tok).collect());
        }
    }
    Ok(out)
}

fn parse_directive(toks: &[Token], end: Pos) -> Result<Directive, ParseError> {
    let mut p = Parser::new(toks, Mode::Eds, end);
    let (kw, kw_pos) = p.ident()?;
    let names = |p: &mut Parser| -> Result<Vec<(String, Pos)>, ParseError> {
        let mut xs = Vec::new();
        while !p.at_end() {
            xs.push(p.ident()?);
        }
        if xs.is_empty() {
            return Err(ParseError::syntax(end, "expected at least one name"));
        }
        Ok(xs)
    };
    let d = match kw.as_str() {
        "frame" => Directive::Frame(names(&mut p)?),
        "scalars" => Directive::Scalars(names(&mut p)?),
        "oneforms" => Directive::OneForms(names(&mut p)?),
        "nonzero" => Directive::Nonzero(names(&mut p)?),
        "define" | "d" => {
            let (name, pos) = p.ident()?;
            p.expect(&Tok::Eq)?;
            if p.at_end() {
                return Err(ParseError::syntax(end, "missing right-hand side"));
            }
            let e = p.sum()?;
            if let Some(t) = p.peek() {
                return Err(ParseError::syntax(t.pos, format!("unexpected `{}`", t.tok)));
            }
            if kw == "d" {
                Directive::D(name, pos, e)
            } else {
                Directive::Define(name, pos, e)
            }
        }
        _ => {
            return Err(ParseError::syntax(
                kw_pos,
                format!("unknown directive `{kw}`"),
            ))
        }
    };
    Ok(d)
}

/// Parses text into directives without interpreting them.
pub fn parse_eds_file(text: &str) -> Result<EdsFile, ParseError> {
    let mut directives = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let toks = lex_line(line, k + 1)?;
        if toks.is_empty() {
            continue;
        }
        let end = Pos {
            line: k + 1,
            col: line.chars().count() + 1,
        };
        directives.push(parse_directive(&toks, end)?);
    }
    Ok(EdsFile { directives })
}

/// Symbol tables collected while interpreting directives.
struct Scope {
    frame: Vec<String>,
    oneforms: Vec<String>,
    scalars: Vec<String>,
    defines: Vec<(String, DForm)>,
    atoms: AtomSet,
}

impl Scope {
    fn generator(&self, name: &str) -> Option<usize> {
        self.frame
            .iter()
            .chain(&self.oneforms)
            .position(|n| n == name)
    }

    fn is_scalar_symbol(&self, name: &str) -> bool {
        if self.scalars.iter().any(|s| s == name) {
            return true;
        }
        let (fam, idx) = parse_symbol(name);
        !idx.is_empty() && self.scalars.iter().any(|s| s == fam)
    }

    fn value(&self, name: &str, pos: Pos) -> Result<DForm, ParseError> {
        if let Some(g) = self.generator(name) {
            return Ok(DForm::generator(g));
        }
        if let Some((_, f)) = self.defines.iter().find(|(n, _)| n == name) {
            return Ok(f.clone());
        }
        if let Some(v) = builtin_scalar(name) {
            return Ok(DForm::scalar(v));
        }
        if self.scalars.iter().any(|s| s == name) {
            return Ok(DForm::scalar(LocFrac::named(name)));
        }
        Err(ParseError {
            pos,
            kind: ParseErrorKind::UnknownSymbol(name.to_string()),
        })
    }

    fn eval(&self, e: &Expr) -> Result<DForm, ParseError> {
        Ok(match e {
            Expr::Num(n, _) => DForm::scalar(LocFrac::constant(crate::algebra::Rational::from_integer(n.clone()))),
            Expr::Sym(s, p) => self.value(s, *p)?,
            Expr::Group(x, _) => self.eval(x)?,
            Expr::Neg(x) => self.eval(x)?.neg(),
            Expr::Sum(ts) => {
                let mut acc: Option<DForm> = None;
                for (sign, t) in ts {
                    let mut v = self.eval(t)?;
                    if *sign == Some(false) {
                        v = v.neg();
                    }
                    acc = Some(match acc {
                        None => v,
                        Some(a) => {
                            if a.degree() != v.degree() {
                                return Err(ParseError {
                                    pos: t.pos(),
                                    kind: ParseErrorKind::DegreeMismatch {
                                        expected: a.degree(),
                                        found: v.degree(),
                                    },
                                });
                            }
                            a.add(&v)
                        }
                    });
                }
                acc.unwrap_or_else(|| DForm::zero(0))
            }
            Expr::Product(h, rest) => {
                let mut acc = self.eval(h)?;
                for (op, pos, f) in rest {
                    let v = self.eval(f)?;
                    acc = match op {
                        MulOp::Slash => {
                            if v.degree() != 0 {
                                return Err(ParseError {
                                    pos: *pos,
                                    kind: ParseErrorKind::DegreeMismatch {
                                        expected: 0,
                                        found: v.degree(),
                                    },
                                });
                            }
                            let s = v.coeff(0);
                            let inv = s.recip(&self.atoms).map_err(|_| ParseError {
                                pos: *pos,
                                kind: ParseErrorKind::NonUnitDivisor(f.render(Mode::Eds)),
                            })?;
                            acc.scale(&inv)
                        }
                        _ => acc.wedge(&v),
                    };
                }
                acc
            }
            Expr::Pow(b, k, pos) => {
                let v = self.eval(b)?;
                if v.degree() != 0 {
                    return Err(ParseError {
                        pos: *pos,
                        kind: ParseErrorKind::DegreeMismatch {
                            expected: 0,
                            found: v.degree(),
                        },
                    });
                }
                DForm::scalar(v.coeff(0).pow(*k))
            }
        })
    }
}

fn check_fresh(scope: &Scope, name: &str, pos: Pos) -> Result<(), ParseError> {
    let taken = scope.generator(name).is_some()
        || scope.scalars.iter().any(|s| s == name)
        || scope.defines.iter().any(|(n, _)| n == name);
    if taken {
        return Err(ParseError {
            pos,
            kind: ParseErrorKind::Duplicate(name.to_string()),
        });
    }
    Ok(())
}

/// Parses and interprets an EDS text.
pub fn parse_eds(text: &str) -> Result<StructureSystem, ParseError> {
    let file = parse_eds_file(text)?;
    let mut scope = Scope {
        frame: Vec::new(),
        oneforms: Vec::new(),
        scalars: Vec::new(),
        defines: Vec::new(),
        atoms: AtomSet::default(),
    };
    let mut rules: HashMap<usize, DForm> = HashMap::new();
    let mut rule_pos: HashMap<usize, Pos> = HashMap::new();
    for d in &file.directives {
        match d {
            Directive::Frame(xs) => {
                if !scope.frame.is_empty() {
                    return Err(ParseError::syntax(xs[0].1, "frame declared twice"));
                }
                if xs.len() != 4 {
                    return Err(ParseError::syntax(
                        xs[0].1,
                        format!("a frame has four 1-forms, found {}", xs.len()),
                    ));
                }
                for (n, p) in xs {
                    check_fresh(&scope, n, *p)?;
                    scope.frame.push(n.clone());
                }
            }
            Directive::Scalars(xs) => {
                for (n, p) in xs {
                    check_fresh(&scope, n, *p)?;
                    scope.scalars.push(n.clone());
                }
            }
            Directive::OneForms(xs) => {
                if scope.frame.is_empty() {
                    return Err(ParseError::syntax(xs[0].1, "oneforms before frame"));
                }
                for (n, p) in xs {
                    check_fresh(&scope, n, *p)?;
                    if scope.frame.len() + scope.oneforms.len() >= 16 {
                        return Err(ParseError::syntax(*p, "at most sixteen generators"));
                    }
                    scope.oneforms.push(n.clone());
                }
            }
            Directive::Nonzero(xs) => {
                for (n, p) in xs {
                    let poly = match builtin_scalar(n) {
                        Some(v) if n != "mu*" => v.num().clone(),
                        _ if scope.is_scalar_symbol(n) => crate::algebra::Poly::named(n),
                        _ => {
                            return Err(ParseError {
                                pos: *p,
                                kind: ParseErrorKind::UnknownSymbol(n.clone()),
                            })
                        }
                    };
                    scope.atoms.insert(Atom::register(n, poly));
                }
            }
            Directive::Define(n, p, e) => {
                check_fresh(&scope, n, *p)?;
                let v = scope.eval(e)?;
                scope.defines.push((n.clone(), v));
            }
            Directive::D(n, p, e) => {
                let Some(g) = scope.generator(n) else {
                    return Err(ParseError {
                        pos: *p,
                        kind: ParseErrorKind::UnknownSymbol(n.clone()),
                    });
                };
                if rules.contains_key(&g) {
                    return Err(ParseError {
                        pos: *p,
                        kind: ParseErrorKind::Duplicate(format!("d {n}")),
                    });
                }
                let v = scope.eval(e)?;
                if v.degree() != 2 {
                    return Err(ParseError {
                        pos: e.pos(),
                        kind: ParseErrorKind::DegreeMismatch {
                            expected: 2,
                            found: v.degree(),
                        },
                    });
                }
                rules.insert(g, v);
                rule_pos.insert(g, *p);
            }
        }
    }
    if scope.frame.is_empty() {
        return Err(ParseError::syntax(Pos { line: 1, col: 1 }, "missing frame directive"));
    }
    let mut ctx = JetContext::standard();
    ctx.set_atoms(scope.atoms.clone());
    for s in &scope.scalars {
        if !ctx.has_family(s) {
            ctx.add_family(s, 0);
        }
    }
    for s in &scope.oneforms {
        if !ctx.has_family(s) {
            ctx.add_family(s, 1);
        }
    }
    let names: Vec<String> = scope.frame.iter().chain(&scope.oneforms).cloned().collect();
    let mut drules = DRules::new(ctx, names);
    for (g, r) in rules {
        drules.set(g, r);
    }
    Ok(StructureSystem {
        frame: scope.frame,
        oneforms: scope.oneforms,
        scalars: scope.scalars,
        atoms: scope.atoms,
        defines: scope.defines,
        rules: drules,
        source: file,
    })
}
