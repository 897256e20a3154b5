//! Fractions whose denominators are products of declared-nonzero atoms.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::poly::{Poly, Rational};
use super::registry::{Atom, Var};
use super::AlgebraError;

/// Exponents over atoms, sorted by atom id, all positive.
pub type AtomMono = SmallVec<[(Atom, u32); 4]>;

/// The atoms a computation is allowed to treat as invertible.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtomSet {
    atoms: Vec<Atom>,
}

impl AtomSet {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut s = AtomSet::default();
        for a in atoms {
            s.insert(a);
        }
        s
    }

    pub fn insert(&mut self, a: Atom) {
        if !self.atoms.contains(&a) {
            self.atoms.push(a);
        }
    }

    pub fn contains(&self, a: Atom) -> bool {
        self.atoms.contains(&a)
    }

    pub fn iter(&self) -> impl Iterator<Item = Atom> + '_ {
        self.atoms.iter().copied()
    }

    pub fn with(&self, a: Atom) -> AtomSet {
        let mut s = self.clone();
        s.insert(a);
        s
    }

    /// Writes `p = c · Π atoms^e`, or returns the cofactor left after
    /// removing every atom factor when `p` is not such a product.
    pub fn factor_unit(&self, p: &Poly) -> Result<(Rational, AtomMono), AlgebraError> {
        if p.is_zero() {
            return Err(AlgebraError::ZeroDivisor);
        }
        let mut rest = p.clone();
        let mut mono: Vec<(Atom, u32)> = Vec::new();
        for a in &self.atoms {
            let (k, r) = strip_atom(&rest, *a, u32::MAX);
            if k > 0 {
                mono.push((*a, k));
                rest = r;
            }
        }
        match rest.constant_value() {
            Some(c) if !c.is_zero() => {
                mono.sort_by_key(|x| x.0);
                Ok((c, mono.into_iter().collect()))
            }
            _ => Err(AlgebraError::NonUnit {
                factor: rest.primitive().1,
            }),
        }
    }
}

/// Divides `p` by `atom` as often as possible, up to `limit` times.
fn strip_atom(p: &Poly, atom: Atom, limit: u32) -> (u32, Poly) {
    if p.is_zero() || limit == 0 {
        return (0, p.clone());
    }
    if let Some(v) = atom.as_var() {
        let k = p
            .terms()
            .map(|(m, _)| m.exponent(v))
            .min()
            .unwrap_or(0)
            .min(limit);
        if k == 0 {
            return (0, p.clone());
        }
        let q = p
            .div_exact(&Poly::term(Rational::one(), super::Monomial::var_pow(v, k)))
            .expect("monomial division");
        return (k, q);
    }
    let ap = atom.poly();
    let mut k = 0;
    let mut cur = p.clone();
    while k < limit {
        match cur.div_exact(&ap) {
            Some(q) => {
                cur = q;
                k += 1;
            }
            None => break,
        }
    }
    (k, cur)
}

/// `num / Π den`, reduced so that no denominator atom divides `num`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LocFrac {
    num: Poly,
    den: AtomMono,
}

impl LocFrac {
    pub fn zero() -> Self {
        LocFrac::default()
    }

    pub fn one() -> Self {
        LocFrac::from_poly(Poly::one())
    }

    pub fn int(n: i64) -> Self {
        LocFrac::from_poly(Poly::int(n))
    }

    pub fn constant(c: Rational) -> Self {
        LocFrac::from_poly(Poly::constant(c))
    }

    pub fn var(v: Var) -> Self {
        LocFrac::from_poly(Poly::var(v))
    }

    pub fn named(name: &str) -> Self {
        LocFrac::from_poly(Poly::named(name))
    }

    pub fn from_poly(num: Poly) -> Self {
        LocFrac {
            num,
            den: AtomMono::new(),
        }
    }

    /// Builds and reduces `num / den`.
    pub fn new(num: Poly, den: AtomMono) -> Self {
        let mut f = LocFrac { num, den };
        f.reduce();
        f
    }

    pub fn atom(a: Atom) -> Self {
        LocFrac::from_poly((*a.poly()).clone())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &AtomMono {
        &self.den
    }

    pub fn den_poly(&self) -> Poly {
        mono_poly(&self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    /// The polynomial value when the denominator is trivial.
    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_empty() {
            self.num.constant_value()
        } else {
            None
        }
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let mut out = AtomMono::new();
        for &(a, e) in &self.den {
            let (k, q) = strip_atom(&self.num, a, e);
            if k > 0 {
                self.num = q;
            }
            if e > k {
                out.push((a, e - k));
            }
        }
        self.den = out;
    }

    pub fn scale(&self, c: &Rational) -> LocFrac {
        if c.is_zero() {
            return LocFrac::zero();
        }
        LocFrac {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> LocFrac {
        LocFrac::new(&self.num * p, self.den.clone())
    }

    /// `self / atom^k` without a registration check.
    pub fn div_atom(&self, a: Atom, k: u32) -> LocFrac {
        let mut den = self.den.clone();
        mono_mul_into(&mut den, &[(a, k)]);
        LocFrac::new(self.num.clone(), den)
    }

    /// Divides by a polynomial that must be a unit over `atoms`.
    pub fn div_poly(&self, p: &Poly, atoms: &AtomSet) -> Result<LocFrac, AlgebraError> {
        let (c, mono) = atoms.factor_unit(p)?;
        let mut den = self.den.clone();
        mono_mul_into(&mut den, &mono);
        Ok(LocFrac::new(self.num.scale(&c.recip()), den))
    }

    /// Divides by a fraction whose numerator must be a unit over `atoms`.
    pub fn div(&self, other: &LocFrac, atoms: &AtomSet) -> Result<LocFrac, AlgebraError> {
        let q = self.div_poly(&other.num, atoms)?;
        Ok(q.mul_poly(&mono_poly(&other.den)))
    }

    pub fn recip(&self, atoms: &AtomSet) -> Result<LocFrac, AlgebraError> {
        LocFrac::one().div(self, atoms)
    }

    pub fn pow(&self, e: u32) -> LocFrac {
        let den = self.den.iter().map(|&(a, k)| (a, k * e)).collect();
        LocFrac {
            num: self.num.pow(e),
            den,
        }
    }

    /// Overall factors `(c, atoms)` with `self = c · atoms · rest` and `rest`
    /// polynomial, primitive and free of the given atoms.
    pub fn normal_form(&self, atoms: &AtomSet) -> (Rational, Vec<(Atom, i64)>, Poly) {
        let (c, mut p) = self.num.primitive();
        let mut exps: Vec<(Atom, i64)> = self.den.iter().map(|&(a, e)| (a, -(e as i64))).collect();
        for a in atoms.iter() {
            let (k, q) = strip_atom(&p, a, u32::MAX);
            if k > 0 {
                p = q;
                match exps.iter_mut().find(|x| x.0 == a) {
                    Some(x) => x.1 += k as i64,
                    None => exps.push((a, k as i64)),
                }
            }
        }
        let (c2, p) = p.primitive();
        exps.retain(|x| x.1 != 0);
        exps.sort_by_key(|x| x.0);
        (c * c2, exps, p)
    }

    /// Simultaneous substitution of fractions for variables; substituted
    /// atoms in the denominator must remain units over `atoms`.
    pub fn substitute(
        &self,
        map: &HashMap<Var, LocFrac>,
        atoms: &AtomSet,
    ) -> Result<LocFrac, AlgebraError> {
        let num = substitute_poly(&self.num, map);
        let mut out = num;
        for &(a, e) in &self.den {
            let ap = a.poly();
            if !ap.vars().iter().any(|v| map.contains_key(v)) {
                out = out.div_atom(a, e);
                continue;
            }
            let img = substitute_poly(&ap, map);
            out = out.div(&img.pow(e), atoms).map_err(|err| match err {
                AlgebraError::NonUnit { factor } => AlgebraError::SubstitutedDenominator {
                    atom: a.name(),
                    factor,
                },
                other => other,
            })?;
        }
        Ok(out)
    }

    pub fn eval_f64(&self, point: &HashMap<Var, f64>) -> Option<f64> {
        let n = self.num.eval_f64(point)?;
        let d = mono_poly(&self.den).eval_f64(point)?;
        Some(n / d)
    }

    pub fn eval(&self, point: &HashMap<Var, Rational>) -> Option<Rational> {
        let n = self.num.eval(point)?;
        let d = mono_poly(&self.den).eval(point)?;
        if d.is_zero() {
            None
        } else {
            Some(n / d)
        }
    }
}

/// Evaluates a polynomial with fraction values for some of its variables.
pub fn substitute_poly(p: &Poly, map: &HashMap<Var, LocFrac>) -> LocFrac {
    if map.values().all(|v| v.den.is_empty()) {
        let pm: HashMap<Var, Poly> = map.iter().map(|(k, v)| (*k, v.num.clone())).collect();
        return LocFrac::from_poly(p.substitute(&pm));
    }
    // Group terms by the substituted part so each power product is built once.
    let mut groups: HashMap<super::Monomial, Poly> = HashMap::new();
    for (m, c) in p.terms() {
        let mut hit = Vec::new();
        let mut kept = Vec::new();
        for (v, e) in m.factors() {
            if map.contains_key(&v) {
                hit.push((v, e));
            } else {
                kept.push((v, e));
            }
        }
        let key = super::Monomial::from_pairs(hit);
        let rest = Poly::term(c.clone(), super::Monomial::from_pairs(kept));
        *groups.entry(key).or_default() += &rest;
    }
    let mut acc = LocFrac::zero();
    for (key, rest) in groups {
        let mut f = LocFrac::from_poly(rest);
        for (v, e) in key.factors() {
            f = &f * &map[&v].pow(e);
        }
        acc = &acc + &f;
    }
    acc
}

pub(crate) fn mono_poly(m: &[(Atom, u32)]) -> Poly {
    let mut p = Poly::one();
    for &(a, e) in m {
        p = &p * &a.poly().pow(e);
    }
    p
}

fn mono_mul_into(acc: &mut AtomMono, other: &[(Atom, u32)]) {
    for &(a, e) in other {
        if e == 0 {
            continue;
        }
        match acc.binary_search_by_key(&a, |x| x.0) {
            Ok(i) => acc[i].1 += e,
            Err(i) => acc.insert(i, (a, e)),
        }
    }
}

/// Least common multiple of two atom monomials and the two cofactors.
fn mono_lcm(a: &AtomMono, b: &AtomMono) -> (AtomMono, AtomMono, AtomMono) {
    let mut l = AtomMono::new();
    let mut fa = AtomMono::new();
    let mut fb = AtomMono::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            l.push(a[i]);
            fb.push(a[i]);
            i += 1;
        } else if take_b {
            l.push(b[j]);
            fa.push(b[j]);
            j += 1;
        } else {
            let (at, ea, eb) = (a[i].0, a[i].1, b[j].1);
            l.push((at, ea.max(eb)));
            if eb > ea {
                fa.push((at, eb - ea));
            } else if ea > eb {
                fb.push((at, ea - eb));
            }
            i += 1;
            j += 1;
        }
    }
    (l, fa, fb)
}

impl Add<&LocFrac> for &LocFrac {
    type Output = LocFrac;
    fn add(self, rhs: &LocFrac) -> LocFrac {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return LocFrac::new(&self.num + &rhs.num, self.den.clone());
        }
        let (l, fa, fb) = mono_lcm(&self.den, &rhs.den);
        let na = if fa.is_empty() {
            self.num.clone()
        } else {
            &self.num * &mono_poly(&fa)
        };
        let nb = if fb.is_empty() {
            rhs.num.clone()
        } else {
            &rhs.num * &mono_poly(&fb)
        };
        LocFrac::new(na + nb, l)
    }
}

impl Sub<&LocFrac> for &LocFrac {
    type Output = LocFrac;
    fn sub(self, rhs: &LocFrac) -> LocFrac {
        self + &(-rhs)
    }
}

impl Neg for &LocFrac {
    type Output = LocFrac;
    fn neg(self) -> LocFrac {
        LocFrac {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul<&LocFrac> for &LocFrac {
    type Output = LocFrac;
    fn mul(self, rhs: &LocFrac) -> LocFrac {
        if self.is_zero() || rhs.is_zero() {
            return LocFrac::zero();
        }
        let mut den = self.den.clone();
        mono_mul_into(&mut den, &rhs.den);
        LocFrac::new(&self.num * &rhs.num, den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for LocFrac {
            type Output = LocFrac;
            fn $f(self, rhs: LocFrac) -> LocFrac {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LocFrac {
    type Output = LocFrac;
    fn neg(self) -> LocFrac {
        -&self
    }
}

impl From<Poly> for LocFrac {
    fn from(p: Poly) -> Self {
        LocFrac::from_poly(p)
    }
}

impl fmt::Display for LocFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        write!(f, "/")?;
        let multi = self.den.len() > 1 || self.den[0].1 > 1;
        if multi {
            write!(f, "(")?;
        }
        for (k, (a, e)) in self.den.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{}", a.name())?;
            } else {
                write!(f, "{}^{}", a.name(), e)?;
            }
        }
        if multi {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LocFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Zero for LocFrac {
    fn zero() -> Self {
        LocFrac::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}
