//! Re-derivation of the connection components and the second-order
//! equations from a structure system, checked against the transcriptions in
//! `data/equations.txt`.
//!
//! Matching is exact. Two equations agree when one is a nonzero rational
//! times an atom monomial times the other; membership in the derived set is
//! linear algebra in the second-order jet symbols.

pub mod connection;
pub mod second_order;
pub mod symmetry;

use std::collections::HashMap;
use std::fmt;

use once_cell::sync::Lazy;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, Atom, AtomSet, LocFrac, Poly, Rational, Var};
use crate::expr::{builtin_scalar, parse_equation_file, ParseError, ParseErrorKind, Pos, RawEquation};
use crate::forms::FormError;
use crate::jets::{parse_symbol, JetContext, JetError};
use crate::structure::StructureError;

pub use connection::{derive_nel, integrability_criterion, solve_sol, IntegrabilityReport, NelMatch, SolReport};
pub use second_order::{
    check_combination, derive_36, match_all, rank_report, CombinationCheck, DerivedSet, Match, RankReport,
};
pub use symmetry::{rotation_invariance, symmetry_group, RotationReport, SymmetryElement};

/// The shipped transcriptions.
pub const TRANSCRIPTIONS: &str = include_str!("../../data/equations.txt");

static RAW: Lazy<Vec<RawEquation>> =
    Lazy::new(|| parse_equation_file(TRANSCRIPTIONS).expect("shipped transcriptions parse"));

/// Symbols outside the jet families that transcriptions may use.
pub const AUX_SYMBOLS: [&str; 2] = ["sigma'", "sigma''"];

#[derive(Debug, Error)]
pub enum DeriveError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("no transcription labelled `{0}`")]
    Missing(String),
    #[error("{0}")]
    Mismatch(String),
}

pub fn transcriptions() -> &'static [RawEquation] {
    &RAW
}

/// A labelled scalar equation `value = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub label: String,
    pub value: LocFrac,
}

impl Equation {
    pub fn new(label: impl Into<String>, value: LocFrac) -> Self {
        Equation {
            label: label.into(),
            value,
        }
    }

    /// Cleared-denominator form with content and atom factors removed.
    pub fn poly(&self, atoms: &AtomSet) -> Poly {
        self.value.normal_form(atoms).2
    }
}

/// Resolves transcription symbols: macros, jet symbols of registered
/// families up to order two, and [`AUX_SYMBOLS`].
pub fn resolver(ctx: &JetContext) -> impl Fn(&str, Pos) -> Result<LocFrac, ParseError> + '_ {
    move |name, pos| {
        if let Some(v) = builtin_scalar(name) {
            return Ok(v);
        }
        if AUX_SYMBOLS.contains(&name) {
            return Ok(LocFrac::named(name));
        }
        let (fam, idx) = parse_symbol(name);
        if ctx.has_family(fam) && idx.len() <= 2 && ctx.is_registered(Var::named(name)) {
            return Ok(LocFrac::named(name));
        }
        Err(ParseError {
            pos,
            kind: ParseErrorKind::UnknownSymbol(name.to_string()),
        })
    }
}

/// `lhs − rhs` of the transcription with the given label.
pub fn transcribed(label: &str, ctx: &JetContext) -> Result<Equation, DeriveError> {
    let raw = RAW
        .iter()
        .find(|r| r.label == label)
        .ok_or_else(|| DeriveError::Missing(label.to_string()))?;
    let value = raw.value(&resolver(ctx), ctx.atoms())?;
    Ok(Equation::new(label, value))
}

/// A nonzero factor `c · Π aᵏ` with integer exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitFactor {
    pub coeff: Rational,
    pub atoms: Vec<(Atom, i64)>,
}

impl UnitFactor {
    pub fn one() -> Self {
        UnitFactor {
            coeff: Rational::from_integer(1.into()),
            atoms: Vec::new(),
        }
    }

    pub fn to_frac(&self) -> LocFrac {
        let mut out = LocFrac::constant(self.coeff.clone());
        for &(a, e) in &self.atoms {
            if e > 0 {
                out = out.mul_poly(&a.poly().pow(e as u32));
            } else {
                out = out.div_atom(a, (-e) as u32);
            }
        }
        out
    }
}

impl fmt::Display for UnitFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        for &(a, e) in &self.atoms {
            if e == 1 {
                write!(f, " {}", a.name())?;
            } else {
                write!(f, " {}^{}", a.name(), e)?;
            }
        }
        Ok(())
    }
}

impl Serialize for UnitFactor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `m` with `target = m · source`, when both agree up to a unit factor.
pub fn unit_ratio(target: &LocFrac, source: &LocFrac, atoms: &AtomSet) -> Option<UnitFactor> {
    if target.is_zero() || source.is_zero() {
        return None;
    }
    let (ct, at, pt) = target.normal_form(atoms);
    let (cs, as_, ps) = source.normal_form(atoms);
    if pt != ps {
        return None;
    }
    let mut exps: Vec<(Atom, i64)> = at;
    for (a, e) in as_ {
        match exps.iter_mut().find(|x| x.0 == a) {
            Some(x) => x.1 -= e,
            None => exps.push((a, -e)),
        }
    }
    exps.retain(|x| x.1 != 0);
    exps.sort_by_key(|x| x.0);
    Some(UnitFactor {
        coeff: ct / cs,
        atoms: exps,
    })
}

/// Splits `f`, affine-linear in `vars`, into its coefficients and constant
/// part.
pub fn linear_parts(f: &LocFrac, vars: &[Var]) -> (Vec<LocFrac>, LocFrac) {
    let den = f.den().clone();
    let coeffs = vars
        .iter()
        .map(|v| LocFrac::new(f.num().partial(*v), den.clone()))
        .collect();
    let zero: HashMap<Var, Poly> = vars.iter().map(|v| (*v, Poly::zero())).collect();
    let constant = LocFrac::new(f.num().substitute(&zero), den);
    (coeffs, constant)
}

/// Human-readable rendering of a residual, truncated for reports.
pub fn render_residual(f: &LocFrac) -> String {
    const MAX: usize = 400;
    let s = f.to_string();
    if s.chars().count() > MAX {
        let cut: String = s.chars().take(MAX).collect();
        format!("{cut}...")
    } else {
        s
    }
}
