//! Lexer, parser and printer for the plain-text expression syntax shared by
//! equation files and EDS files.
//!
//! Products are written by juxtaposition or `*`; `/` divides by a unit.
//! In equation files `^` is a power. In EDS files `^` is the wedge product
//! and `**` is a power. `mu+`, `mu-` and `mu*` are single tokens when the
//! sign follows `mu` without a space. Square brackets group like
//! parentheses. `#` starts a comment.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::{atoms, AtomSet, LocFrac, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownSymbol(String),
    DegreeMismatch { expected: usize, found: usize },
    NonUnitDivisor(String),
    Duplicate(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {}, column {}: {}", .pos.line, .pos.col, describe(.kind))]
pub struct ParseError {
    pub pos: Pos,
    pub kind: ParseErrorKind,
}

fn describe(k: &ParseErrorKind) -> String {
    match k {
        ParseErrorKind::Syntax(s) => format!("syntax error: {s}"),
        ParseErrorKind::UnknownSymbol(s) => format!("unknown symbol `{s}`"),
        ParseErrorKind::DegreeMismatch { expected, found } => {
            format!("degree mismatch: expected a {expected}-form, found a {found}-form")
        }
        ParseErrorKind::NonUnitDivisor(s) => format!("cannot divide by non-unit `{s}`"),
        ParseErrorKind::Duplicate(s) => format!("duplicate definition of `{s}`"),
    }
}

impl ParseError {
    pub fn syntax(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError {
            pos,
            kind: ParseErrorKind::Syntax(msg.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    StarStar,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eq,
    Colon,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "{n}"),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Plus => write!(f, "+"),
            Tok::Minus => write!(f, "-"),
            Tok::Star => write!(f, "*"),
            Tok::StarStar => write!(f, "**"),
            Tok::Slash => write!(f, "/"),
            Tok::Caret => write!(f, "^"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::LBracket => write!(f, "["),
            Tok::RBracket => write!(f, "]"),
            Tok::Eq => write!(f, "="),
            Tok::Colon => write!(f, ":"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Tokenizes one physical line.
pub fn lex_line(text: &str, line: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col: i + 1 };
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Num(s.parse().expect("digits")),
                pos,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            let mut s: String = chars[start..i].iter().collect();
            if s == "mu" && i < chars.len() && matches!(chars[i], '+' | '-' | '*') {
                s.push(chars[i]);
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(s),
                pos,
            });
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' if chars.get(i + 1) == Some(&'*') => {
                i += 1;
                Tok::StarStar
            }
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '=' => Tok::Eq,
            ':' => Tok::Colon,
            other => {
                return Err(ParseError::syntax(pos, format!("unexpected character `{other}`")))
            }
        };
        out.push(Token { tok, pos });
        i += 1;
    }
    Ok(out)
}

/// Which meaning `^` has.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `^` is a power.
    Equation,
    /// `^` is the wedge product, `**` a power.
    Eds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MulOp {
    Juxt,
    Star,
    Slash,
    Wedge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt, Pos),
    Sym(String, Pos),
    /// Parenthesized (`false`) or bracketed (`true`) group.
    Group(Box<Expr>, bool),
    Neg(Box<Expr>),
    /// Terms with their signs; the first sign is `None` when absent.
    Sum(Vec<(Option<bool>, Expr)>),
    Product(Box<Expr>, Vec<(MulOp, Pos, Expr)>),
    Pow(Box<Expr>, u32, Pos),
}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Num(_, p) | Expr::Sym(_, p) | Expr::Pow(_, _, p) => *p,
            Expr::Group(e, _) | Expr::Neg(e) | Expr::Product(e, _) => e.pos(),
            Expr::Sum(ts) => ts.first().map(|t| t.1.pos()).unwrap_or_default(),
        }
    }

    /// Every symbol with its position, in source order.
    pub fn symbols(&self) -> Vec<(&str, Pos)> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols<'a>(&'a self, out: &mut Vec<(&'a str, Pos)>) {
        match self {
            Expr::Num(..) => {}
            Expr::Sym(s, p) => out.push((s, *p)),
            Expr::Group(e, _) | Expr::Neg(e) | Expr::Pow(e, _, _) => e.collect_symbols(out),
            Expr::Sum(ts) => ts.iter().for_each(|t| t.1.collect_symbols(out)),
            Expr::Product(h, rest) => {
                h.collect_symbols(out);
                rest.iter().for_each(|t| t.2.collect_symbols(out));
            }
        }
    }

    /// Canonical text; re-lexing it yields the original token sequence.
    pub fn render(&self, mode: Mode) -> String {
        let mut s = String::new();
        self.render_into(mode, &mut s);
        s
    }

    fn render_into(&self, mode: Mode, s: &mut String) {
        match self {
            Expr::Num(n, _) => s.push_str(&n.to_string()),
            Expr::Sym(n, _) => s.push_str(n),
            Expr::Group(e, br) => {
                s.push(if *br { '[' } else { '(' });
                e.render_into(mode, s);
                s.push(if *br { ']' } else { ')' });
            }
            Expr::Neg(e) => {
                s.push('-');
                e.render_into(mode, s);
            }
            Expr::Sum(ts) => {
                for (k, (sign, e)) in ts.iter().enumerate() {
                    match (k, sign) {
                        (0, None) => {}
                        (0, Some(true)) => s.push_str("+ "),
                        (0, Some(false)) => s.push_str("- "),
                        (_, Some(false)) => s.push_str(" - "),
                        _ => s.push_str(" + "),
                    }
                    e.render_into(mode, s);
                }
            }
            Expr::Product(h, rest) => {
                h.render_into(mode, s);
                for (op, _, e) in rest {
                    s.push_str(match op {
                        MulOp::Juxt => " ",
                        MulOp::Star => " * ",
                        MulOp::Slash => " / ",
                        MulOp::Wedge => "^",
                    });
                    e.render_into(mode, s);
                }
            }
            Expr::Pow(b, e, _) => {
                b.render_into(mode, s);
                s.push_str(if mode == Mode::Eds { "**" } else { "^" });
                s.push_str(&e.to_string());
            }
        }
    }
}

/// Recursive-descent parser over a token slice.
pub struct Parser<'a> {
    toks: &'a [Token],
    at: usize,
    mode: Mode,
    end: Pos,
}

impl<'a> Parser<'a> {
    /// `end` is reported for errors at end of input.
    pub fn new(toks: &'a [Token], mode: Mode, end: Pos) -> Self {
        Parser {
            toks,
            at: 0,
            mode,
            end,
        }
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.at)
    }

    pub fn next(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.at);
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    pub fn here(&self) -> Pos {
        self.peek().map(|t| t.pos).unwrap_or(self.end)
    }

    pub fn at_end(&self) -> bool {
        self.at >= self.toks.len()
    }

    pub fn expect(&mut self, want: &Tok) -> Result<Pos, ParseError> {
        match self.next() {
            Some(t) if t.tok == *want => Ok(t.pos),
            Some(t) => Err(ParseError::syntax(t.pos, format!("expected `{want}`, found `{}`", t.tok))),
            None => Err(ParseError::syntax(self.end, format!("expected `{want}` at end of line"))),
        }
    }

    pub fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.next() {
            Some(Token {
                tok: Tok::Ident(s),
                pos,
            }) => Ok((s.clone(), *pos)),
            Some(t) => Err(ParseError::syntax(t.pos, format!("expected a name, found `{}`", t.tok))),
            None => Err(ParseError::syntax(self.end, "expected a name at end of line")),
        }
    }

    pub fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let mut sign = match self.peek().map(|t| &t.tok) {
            Some(Tok::Plus) => {
                self.next();
                Some(true)
            }
            Some(Tok::Minus) => {
                self.next();
                Some(false)
            }
            _ => None,
        };
        loop {
            let op_pos = if self.at > 0 { self.toks[self.at - 1].pos } else { self.here() };
            let t = self.product(op_pos)?;
            terms.push((sign, t));
            sign = match self.peek().map(|t| &t.tok) {
                Some(Tok::Plus) => Some(true),
                Some(Tok::Minus) => Some(false),
                _ => break,
            };
            self.next();
        }
        if terms.len() == 1 && terms[0].0.is_none() {
            return Ok(terms.pop().unwrap().1);
        }
        Ok(Expr::Sum(terms))
    }

    fn starts_primary(&self) -> bool {
        matches!(
            self.peek().map(|t| &t.tok),
            Some(Tok::Num(_) | Tok::Ident(_) | Tok::LParen | Tok::LBracket)
        )
    }

    fn product(&mut self, lead: Pos) -> Result<Expr, ParseError> {
        let head = self.factor(lead)?;
        let mut rest = Vec::new();
        loop {
            let (op, pos) = match self.peek() {
                Some(Token { tok: Tok::Star, pos }) => (MulOp::Star, *pos),
                Some(Token { tok: Tok::Slash, pos }) => (MulOp::Slash, *pos),
                Some(Token { tok: Tok::Caret, pos }) if self.mode == Mode::Eds => {
                    (MulOp::Wedge, *pos)
                }
                Some(t) if self.starts_primary() => (MulOp::Juxt, t.pos),
                _ => break,
            };
            if op != MulOp::Juxt {
                self.next();
            }
            let f = self.factor(pos)?;
            rest.push((op, pos, f));
        }
        if rest.is_empty() {
            Ok(head)
        } else {
            Ok(Expr::Product(Box::new(head), rest))
        }
    }

    /// `lead` is the position of the operator that demanded this operand.
    fn factor(&mut self, lead: Pos) -> Result<Expr, ParseError> {
        let base = self.primary(lead)?;
        let pow_tok = match self.mode {
            Mode::Equation => Tok::Caret,
            Mode::Eds => Tok::StarStar,
        };
        if self.peek().map(|t| &t.tok) == Some(&pow_tok) {
            let op = self.next().unwrap().pos;
            match self.next() {
                Some(Token { tok: Tok::Num(n), .. }) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| ParseError::syntax(op, "exponent too large"))?;
                    return Ok(Expr::Pow(Box::new(base), e, op));
                }
                Some(t) => return Err(ParseError::syntax(t.pos, "exponent must be an integer")),
                None => return Err(ParseError::syntax(op, "dangling power operator")),
            }
        }
        Ok(base)
    }

    fn primary(&mut self, lead: Pos) -> Result<Expr, ParseError> {
        let Some(t) = self.next() else {
            return Err(ParseError::syntax(lead, "missing operand"));
        };
        match &t.tok {
            Tok::Num(n) => Ok(Expr::Num(n.clone(), t.pos)),
            Tok::Ident(s) => Ok(Expr::Sym(s.clone(), t.pos)),
            Tok::LParen | Tok::LBracket => {
                let br = t.tok == Tok::LBracket;
                let inner = self.sum()?;
                let close = if br { Tok::RBracket } else { Tok::RParen };
                match self.next() {
                    Some(c) if c.tok == close => Ok(Expr::Group(Box::new(inner), br)),
                    Some(c) => Err(ParseError::syntax(c.pos, format!("expected `{close}`"))),
                    None => Err(ParseError::syntax(t.pos, "unclosed group")),
                }
            }
            Tok::Minus => Ok(Expr::Neg(Box::new(self.factor(t.pos)?))),
            _ => Err(ParseError::syntax(
                if matches!(t.tok, Tok::Eq | Tok::RParen | Tok::RBracket) { lead } else { t.pos },
                format!("missing operand before `{}`", t.tok),
            )),
        }
    }
}

/// The value of a macro or plain symbol, for scalar evaluation.
pub fn builtin_scalar(name: &str) -> Option<LocFrac> {
    match name {
        "mu+" => Some(atoms::mu_plus_frac()),
        "mu-" => Some(atoms::mu_minus_frac()),
        "mu*" => Some(atoms::mu_star_frac()),
        _ => None,
    }
}

/// Evaluates a scalar expression. `lookup` resolves symbols; divisors must
/// be units over `atoms`.
pub fn eval_scalar(
    e: &Expr,
    lookup: &dyn Fn(&str, Pos) -> Result<LocFrac, ParseError>,
    atoms: &AtomSet,
) -> Result<LocFrac, ParseError> {
    Ok(match e {
        Expr::Num(n, _) => LocFrac::constant(Rational::from_integer(n.clone())),
        Expr::Sym(s, p) => lookup(s, *p)?,
        Expr::Group(x, _) => eval_scalar(x, lookup, atoms)?,
        Expr::Neg(x) => -eval_scalar(x, lookup, atoms)?,
        Expr::Sum(ts) => {
            let mut acc = LocFrac::zero();
            for (sign, t) in ts {
                let v = eval_scalar(t, lookup, atoms)?;
                acc = if *sign == Some(false) { &acc - &v } else { &acc + &v };
            }
            acc
        }
        Expr::Product(h, rest) => {
            let mut acc = eval_scalar(h, lookup, atoms)?;
            for (op, pos, f) in rest {
                let v = eval_scalar(f, lookup, atoms)?;
                acc = match op {
                    MulOp::Slash => acc.div(&v, atoms).map_err(|_| ParseError {
                        pos: *pos,
                        kind: ParseErrorKind::NonUnitDivisor(f.render(Mode::Equation)),
                    })?,
                    _ => &acc * &v,
                };
            }
            acc
        }
        Expr::Pow(b, k, _) => eval_scalar(b, lookup, atoms)?.pow(*k),
    })
}

/// A labelled equation `lhs = rhs` read from an equation file.
#[derive(Debug, Clone, PartialEq)]
pub struct RawEquation {
    pub label: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub pos: Pos,
}

impl RawEquation {
    /// `lhs − rhs` as a fraction.
    pub fn value(
        &self,
        lookup: &dyn Fn(&str, Pos) -> Result<LocFrac, ParseError>,
        atoms: &AtomSet,
    ) -> Result<LocFrac, ParseError> {
        let l = eval_scalar(&self.lhs, lookup, atoms)?;
        let r = eval_scalar(&self.rhs, lookup, atoms)?;
        Ok(&l - &r)
    }
}

/// Reads `label: lhs = rhs` records. Lines that start with whitespace
/// continue the previous record.
pub fn parse_equation_file(text: &str) -> Result<Vec<RawEquation>, ParseError> {
    let mut groups: Vec<Vec<Token>> = Vec::new();
    let mut ends: Vec<Pos> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let toks = lex_line(raw, line)?;
        if toks.is_empty() {
            continue;
        }
        let end = Pos {
            line,
            col: raw.chars().count() + 1,
        };
        if raw.starts_with(char::is_whitespace) {
            match groups.last_mut() {
                Some(g) => {
                    g.extend(toks);
                    *ends.last_mut().unwrap() = end;
                }
                None => return Err(ParseError::syntax(toks[0].pos, "continuation without a record")),
            }
        } else {
            groups.push(toks);
            ends.push(end);
        }
    }
    let mut out: Vec<RawEquation> = Vec::new();
    for (toks, end) in groups.iter().zip(ends) {
        let mut p = Parser::new(toks, Mode::Equation, end);
        let (label, pos) = p.ident()?;
        p.expect(&Tok::Colon)?;
        let lhs = p.sum()?;
        p.expect(&Tok::Eq)?;
        let rhs = p.sum()?;
        if let Some(t) = p.peek() {
            return Err(ParseError::syntax(t.pos, format!("unexpected `{}`", t.tok)));
        }
        if out.iter().any(|e| e.label == label) {
            return Err(ParseError {
                pos,
                kind: ParseErrorKind::Duplicate(label),
            });
        }
        out.push(RawEquation { label, lhs, rhs, pos });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Poly};

    fn parse(s: &str, mode: Mode) -> Result<Expr, ParseError> {
        let toks = lex_line(s, 1)?;
        let mut p = Parser::new(&toks, mode, Pos { line: 1, col: s.len() + 1 });
        let e = p.sum()?;
        if let Some(t) = p.peek() {
            return Err(ParseError::syntax(t.pos, "trailing"));
        }
        Ok(e)
    }

    fn kinds(s: &str) -> Vec<Tok> {
        lex_line(s, 1).unwrap().into_iter().map(|t| t.tok).collect()
    }

    fn plain(name: &str, _: Pos) -> Result<LocFrac, ParseError> {
        Ok(builtin_scalar(name).unwrap_or_else(|| LocFrac::named(name)))
    }

    #[test]
    fn mu_tokens() {
        assert_eq!(
            kinds("mu+ mu- mu* mu - x"),
            vec![
                Tok::Ident("mu+".into()),
                Tok::Ident("mu-".into()),
                Tok::Ident("mu*".into()),
                Tok::Ident("mu".into()),
                Tok::Minus,
                Tok::Ident("x".into()),
            ]
        );
    }

    #[test]
    fn scalar_value() {
        let e = parse("16 lambda sigma^2 mu- - 2 [x + 1]", Mode::Equation).unwrap();
        let v = eval_scalar(&e, &plain, &atoms::standard()).unwrap();
        let l = Poly::named("lambda");
        let s = Poly::named("sigma");
        let expect = &(&(&l * &(&s * &s)) * &atoms::mu_minus_poly()).scale(&rat(16))
            - &(&Poly::named("x") + &Poly::one()).scale(&rat(2));
        assert_eq!(v, LocFrac::from_poly(expect));
    }

    #[test]
    fn division_needs_unit() {
        let set = atoms::standard();
        let e = parse("lambda1 / (8 lambda sigma)", Mode::Equation).unwrap();
        let v = eval_scalar(&e, &plain, &set).unwrap();
        assert_eq!(v.den().len(), 2);
        let bad = parse("1 / (lambda + sigma)", Mode::Equation).unwrap();
        let err = eval_scalar(&bad, &plain, &set).unwrap_err();
        assert_eq!(err.pos.col, 3);
    }

    #[test]
    fn round_trip_tokens() {
        for (s, m) in [
            ("B^E + C^F + D^G", Mode::Eds),
            ("-4 F^G - lambda (A^B + C^D)", Mode::Eds),
            ("sigma**2 * x / 2", Mode::Eds),
            ("- 16 [2 (lambda12 - lambda21)] sigma^2 + mu+ x", Mode::Equation),
        ] {
            let e = parse(s, m).unwrap();
            assert_eq!(kinds(&e.render(m)), kinds(s), "{s}");
        }
    }

    #[test]
    fn dangling_operator_is_located() {
        let err = parse("B^", Mode::Eds).unwrap_err();
        assert_eq!(err.pos.col, 2);
        let err = parse("x + ", Mode::Equation).unwrap_err();
        assert_eq!(err.pos.col, 3);
    }

    #[test]
    fn equation_file_with_continuations() {
        let text = "# demo\nq: x^2\n  - 1 = (x - 1)(x + 1)\nr: 0 = 0\n";
        let eqs = parse_equation_file(text).unwrap();
        assert_eq!(eqs.len(), 2);
        let v = eqs[0].value(&plain, &atoms::standard()).unwrap();
        assert!(v.is_zero());
        assert!(parse_equation_file("q: 1 = 1\nq: 2 = 2\n").is_err());
    }
}
