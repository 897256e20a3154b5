//! Exterior forms over a small set of generating 1-forms with fraction
//! coefficients.
//!
//! A blade is a bitmask over at most sixteen generators. The coframe
//! `A, B, C, D` occupies bits 0..3; larger algebras (the connection forms
//! treated as independent generators) use the remaining bits.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::LocFrac;
use crate::jets::{JetContext, JetError};

pub type Blade = u16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormError {
    #[error("expected a {expected}-form, got a {found}-form")]
    Degree { expected: usize, found: usize },
    #[error("no rewrite rule for d of generator {0}")]
    MissingRule(String),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// Sign of `a ∧ b` for disjoint blades relative to the sorted blade `a | b`.
pub fn wedge_sign(a: Blade, b: Blade) -> i64 {
    let mut swaps = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn blade_of(indices: &[usize]) -> (i64, Blade) {
    let mut blade: Blade = 0;
    let mut sign = 1;
    for &i in indices {
        let bit = 1 << i;
        if blade & bit != 0 {
            return (0, 0);
        }
        sign *= wedge_sign(blade, bit);
        blade |= bit;
    }
    (sign, blade)
}

/// Homogeneous form of a fixed degree.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct DForm {
    degree: usize,
    terms: BTreeMap<Blade, LocFrac>,
}

impl DForm {
    pub fn zero(degree: usize) -> Self {
        DForm {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(f: LocFrac) -> Self {
        DForm::term(f, 0)
    }

    pub fn generator(i: usize) -> Self {
        DForm::term(LocFrac::one(), 1 << i)
    }

    pub fn term(f: LocFrac, blade: Blade) -> Self {
        let mut terms = BTreeMap::new();
        let degree = blade.count_ones() as usize;
        if !f.is_zero() {
            terms.insert(blade, f);
        }
        DForm { degree, terms }
    }

    /// `coeff · e^{i₁}∧…∧e^{iₖ}` with indices in any order.
    pub fn basis(coeff: LocFrac, indices: &[usize]) -> Self {
        let (sign, blade) = blade_of(indices);
        let mut f = DForm::zero(indices.len());
        if sign != 0 {
            f.add_term(blade, coeff.scale(&crate::algebra::rat(sign)));
        }
        f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &LocFrac)> + '_ {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    pub fn coeff(&self, blade: Blade) -> LocFrac {
        self.terms.get(&blade).cloned().unwrap_or_default()
    }

    /// Coefficient of `e^{i₁}∧…∧e^{iₖ}` for indices in any order.
    pub fn coeff_of(&self, indices: &[usize]) -> LocFrac {
        let (sign, blade) = blade_of(indices);
        if sign == 0 {
            return LocFrac::zero();
        }
        self.coeff(blade).scale(&crate::algebra::rat(sign))
    }

    pub fn add_term(&mut self, blade: Blade, c: LocFrac) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(blade.count_ones() as usize, self.degree);
        let entry = self.terms.entry(blade).or_default();
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&blade);
        }
    }

    pub fn add(&self, other: &DForm) -> DForm {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DForm) -> DForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DForm {
        self.map(|c| -c)
    }

    pub fn scale(&self, f: &LocFrac) -> DForm {
        if f.is_zero() {
            return DForm::zero(self.degree);
        }
        let mut out = DForm::zero(self.degree);
        for (b, c) in &self.terms {
            out.add_term(*b, c * f);
        }
        out
    }

    pub fn map(&self, f: impl Fn(&LocFrac) -> LocFrac) -> DForm {
        let mut out = DForm::zero(self.degree);
        for (b, c) in &self.terms {
            out.add_term(*b, f(c));
        }
        out
    }

    pub fn try_map<E>(&self, f: impl Fn(&LocFrac) -> Result<LocFrac, E>) -> Result<DForm, E> {
        let mut out = DForm::zero(self.degree);
        for (b, c) in &self.terms {
            out.add_term(*b, f(c)?);
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &DForm) -> DForm {
        let mut out = DForm::zero(self.degree + other.degree);
        for (ba, ca) in &self.terms {
            for (bb, cb) in &other.terms {
                if ba & bb != 0 {
                    continue;
                }
                let prod = ca * cb;
                let prod = if wedge_sign(*ba, *bb) < 0 { -prod } else { prod };
                out.add_term(ba | bb, prod);
            }
        }
        out
    }

    /// Replaces each generator `i` by the 1-form `images[i]`.
    pub fn substitute_generators(&self, images: &[DForm]) -> DForm {
        let mut out = DForm::zero(self.degree);
        for (b, c) in &self.terms {
            let mut acc = DForm::scalar(c.clone());
            let mut bits = *b;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                acc = acc.wedge(&images[i]);
                bits &= bits - 1;
            }
            out = out.add(&acc);
        }
        out
    }

    /// Coefficients of a 2-form on the coframe in the order
    /// `AB, AC, AD, BC, BD, CD`.
    pub fn coeff6(&self) -> Result<[LocFrac; 6], FormError> {
        if self.degree != 2 && !self.is_zero() {
            return Err(FormError::Degree {
                expected: 2,
                found: self.degree,
            });
        }
        Ok(PAIRS.map(|(a, b)| self.coeff((1 << a) | (1 << b))))
    }

    /// Coefficients of a 3-form on the coframe in the order
    /// `ABC, ABD, ACD, BCD`.
    pub fn coeff4(&self) -> Result<[LocFrac; 4], FormError> {
        if self.degree != 3 && !self.is_zero() {
            return Err(FormError::Degree {
                expected: 3,
                found: self.degree,
            });
        }
        Ok(TRIPLES.map(|t| self.coeff(t.iter().fold(0, |b, i| b | (1 << i)))))
    }

    /// Renders the form with the given generator names.
    pub fn display<'a>(&'a self, names: &'a [&'a str]) -> impl fmt::Display + 'a {
        Display { form: self, names }
    }
}

/// Index pairs of the coframe 2-form basis.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
/// Index triples of the coframe 3-form basis.
pub const TRIPLES: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];

struct Display<'a> {
    form: &'a DForm,
    names: &'a [&'a str],
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.form.is_zero() {
            return write!(f, "0");
        }
        for (k, (b, c)) in self.form.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", c)?;
            let mut bits = *b;
            let mut first = true;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                write!(f, "{}{}", if first { " " } else { "^" }, self.names[i])?;
                first = false;
                bits &= bits - 1;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..16).map(|i| format!("e{}", i)).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let shown = write!(f, "{}", self.display(&refs));
        shown
    }
}

/// Rewrite rules for `d` of each generator, plus the jet context for `d` of
/// scalars. Scalars differentiate along the frame dual to generators
/// `0..4`.
#[derive(Clone, Debug)]
pub struct DRules {
    pub ctx: JetContext,
    pub names: Vec<String>,
    pub rules: Vec<Option<DForm>>,
}

impl DRules {
    pub fn new(ctx: JetContext, names: Vec<String>) -> Self {
        let n = names.len();
        DRules {
            ctx,
            names,
            rules: vec![None; n],
        }
    }

    pub fn set(&mut self, gen: usize, rule: DForm) {
        self.rules[gen] = Some(rule);
    }

    pub fn rule(&self, gen: usize) -> Result<&DForm, FormError> {
        self.rules[gen]
            .as_ref()
            .ok_or_else(|| FormError::MissingRule(self.names[gen].clone()))
    }

    /// `df = Σ dᵢf eⁱ`.
    pub fn d_scalar(&self, f: &LocFrac) -> Result<DForm, FormError> {
        let mut out = DForm::zero(1);
        for i in 0..4 {
            out.add_term(1 << i, self.ctx.derive(f, i + 1)?);
        }
        Ok(out)
    }

    /// Exterior derivative by the graded Leibniz rule.
    pub fn ext_d(&self, a: &DForm) -> Result<DForm, FormError> {
        let mut out = DForm::zero(a.degree + 1);
        for (b, c) in &a.terms {
            let mut gens = Vec::new();
            let mut bits = *b;
            while bits != 0 {
                gens.push(bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
            let rest = DForm::term(LocFrac::one(), *b);
            out = out.add(&self.d_scalar(c)?.wedge(&rest));
            for (m, &g) in gens.iter().enumerate() {
                let before = gens[..m].iter().fold(0, |x, i| x | (1 << i));
                let after = gens[m + 1..].iter().fold(0, |x, i| x | (1 << i));
                let mut piece = DForm::term(c.clone(), before).wedge(self.rule(g)?);
                piece = piece.wedge(&DForm::term(LocFrac::one(), after));
                if m % 2 == 1 {
                    piece = piece.neg();
                }
                out = out.add(&piece);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::jets::jf;
    use proptest::prelude::*;

    fn a() -> DForm {
        DForm::generator(0)
    }
    fn b() -> DForm {
        DForm::generator(1)
    }
    fn c() -> DForm {
        DForm::generator(2)
    }
    fn d() -> DForm {
        DForm::generator(3)
    }

    #[test]
    fn wedge_basics() {
        assert_eq!(a().wedge(&b()).coeff_of(&[0, 1]), LocFrac::one());
        assert_eq!(b().wedge(&a()), a().wedge(&b()).neg());
        let vol = a().wedge(&b()).wedge(&c().wedge(&d()));
        assert_eq!(vol.coeff(0b1111), LocFrac::one());
        assert!(a().wedge(&a()).is_zero());
    }

    #[test]
    fn coeff6_order() {
        let lam = jf("lambda", &[]);
        let ab = a().wedge(&b());
        let cd = c().wedge(&d());
        let rho = ab.sub(&cd).scale(&-&lam);
        let got = rho.coeff6().unwrap();
        assert_eq!(got[0], -&lam);
        assert_eq!(got[5], lam);
        assert!(got[1..5].iter().all(|x| x.is_zero()));
        let zeta = ab.neg().add(&cd).coeff6().unwrap();
        assert_eq!(zeta[0], LocFrac::int(-1));
        assert!(DForm::zero(2).coeff6().unwrap().iter().all(|x| x.is_zero()));
        assert!(a().coeff6().is_err());
    }

    #[test]
    fn d_of_function() {
        let rules = DRules::new(JetContext::standard(), vec!["A".into(), "B".into(), "C".into(), "D".into()]);
        let dl = rules.d_scalar(&jf("lambda", &[])).unwrap();
        for i in 0..4 {
            assert_eq!(dl.coeff(1 << i), jf("lambda", &[i + 1]));
        }
    }

    fn toy_rules() -> DRules {
        let mut r = DRules::new(JetContext::standard(), ["A", "B", "C", "D"].map(String::from).to_vec());
        let l = jf("lambda", &[]);
        let s = jf("sigma", &[]);
        r.set(0, b().wedge(&c()).scale(&l));
        r.set(1, a().wedge(&d()).scale(&s));
        r.set(2, c().wedge(&d()).scale(&LocFrac::int(3)));
        r.set(3, a().wedge(&b()).scale(&(&l * &s)));
        r
    }

    fn arb_form(deg: usize) -> impl Strategy<Value = DForm> {
        let names = ["lambda", "sigma", "lambda2", "S1"];
        prop::collection::vec((0usize..4, 0usize..4, 0usize..4, -3i64..=3), 1..4).prop_map(
            move |ts| {
                let mut f = DForm::zero(deg);
                for (x, y, z, k) in ts {
                    let idx: Vec<usize> = [x, y, z][..deg].to_vec();
                    let coeff = LocFrac::named(names[x]).scale(&rat(k));
                    f = f.add(&DForm::basis(coeff, &idx));
                }
                f
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn graded_anticommutativity(x in arb_form(1), y in arb_form(2)) {
            prop_assert_eq!(x.wedge(&y), y.wedge(&x));
            prop_assert_eq!(x.wedge(&x.clone()), DForm::zero(2));
        }

        #[test]
        fn leibniz(x in arb_form(1), y in arb_form(2)) {
            let r = toy_rules();
            let lhs = r.ext_d(&x.wedge(&y)).unwrap();
            let rhs = r.ext_d(&x).unwrap().wedge(&y).sub(&x.wedge(&r.ext_d(&y).unwrap()));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn wedge_associative(x in arb_form(1), y in arb_form(1), z in arb_form(1)) {
            prop_assert_eq!(x.wedge(&y).wedge(&z), x.wedge(&y.wedge(&z)));
        }
    }
}
