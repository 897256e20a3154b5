//! Jet symbols for functions in a moving frame and the directional
//! derivatives `d_j` acting on fractions of them.
//!
//! A symbol name is a family followed by index digits: `lambda3` is the
//! e₃-derivative of λ, and `lambda32` is the e₂-derivative of `lambda3`.
//! Directional derivatives do not commute, so `lambda12` and `lambda21` are
//! different indeterminates.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::algebra::{AlgebraError, Atom, AtomSet, LocFrac, Poly, Var};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("jet order exceeded: {symbol} has no registered derivative")]
    JetOrderExceeded { symbol: String },
    #[error("symbol {symbol} has no directional derivatives")]
    NoDerivative { symbol: String },
    #[error("direction {0} is outside 1..=4")]
    BadDirection(usize),
    #[error("substitution for {symbol} refers to a substituted symbol")]
    SelfReference { symbol: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Builds the indeterminate for `family` with the given frame indices.
pub fn jet(family: &str, idx: &[usize]) -> Var {
    let mut name = String::from(family);
    for i in idx {
        name.push(char::from_digit(*i as u32, 10).expect("index 1..=9"));
    }
    Var::named(&name)
}

/// Fraction holding the single jet symbol `family` + `idx`.
pub fn jf(family: &str, idx: &[usize]) -> LocFrac {
    LocFrac::var(jet(family, idx))
}

/// Splits a symbol name into family and index digits.
pub fn parse_symbol(name: &str) -> (&str, Vec<usize>) {
    let cut = name
        .char_indices()
        .rev()
        .take_while(|(_, c)| matches!(c, '1'..='4'))
        .last()
        .map(|(i, _)| i)
        .unwrap_or(name.len());
    let digits = name[cut..]
        .chars()
        .map(|c| c.to_digit(10).unwrap() as usize)
        .collect();
    (&name[..cut], digits)
}

#[derive(Clone, Debug)]
struct Family {
    /// Order of the family's bare symbol: 0 for λ, 1 for components like Sᵢ.
    base_order: usize,
}

/// Registry of function symbols, derivative links and nonzero atoms.
#[derive(Clone, Debug)]
pub struct JetContext {
    families: HashMap<String, Family>,
    links: HashMap<Var, [Var; 4]>,
    constants: HashSet<Var>,
    atoms: AtomSet,
    max_order: usize,
    extend: bool,
}

impl JetContext {
    /// λ, σ with jets to order two, the component families S, L, F, G with
    /// their first derivatives, and atoms λ, σ, μ₊, μ₋.
    pub fn standard() -> Self {
        let mut ctx = JetContext {
            families: HashMap::new(),
            links: HashMap::new(),
            constants: HashSet::new(),
            atoms: crate::algebra::atoms::standard(),
            max_order: 2,
            extend: false,
        };
        for f in ["lambda", "sigma"] {
            ctx.add_family(f, 0);
        }
        for f in ["S", "L", "F", "G"] {
            ctx.add_family(f, 1);
        }
        ctx
    }

    /// Registers a family whose bare symbol has the given order, with links
    /// up to the context's maximal order.
    pub fn add_family(&mut self, name: &str, base_order: usize) {
        self.families
            .insert(name.to_string(), Family { base_order });
        let mut frontier: Vec<Vec<usize>> = if base_order == 0 {
            vec![vec![]]
        } else {
            (1..=4).map(|i| vec![i]).collect()
        };
        let mut order = base_order;
        while order < self.max_order {
            let mut next = Vec::new();
            for idx in &frontier {
                let v = jet(name, idx);
                let mut ds = [v; 4];
                for (j, d) in ds.iter_mut().enumerate() {
                    let mut child = idx.clone();
                    child.push(j + 1);
                    *d = jet(name, &child);
                    next.push(child);
                }
                self.links.insert(v, ds);
            }
            frontier = next;
            order += 1;
        }
    }

    /// Declares symbols whose directional derivatives all vanish.
    pub fn declare_constant(&mut self, v: Var) {
        self.constants.insert(v);
    }

    pub fn set_extension(&mut self, on: bool) {
        self.extend = on;
    }

    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    pub fn set_atoms(&mut self, atoms: AtomSet) {
        self.atoms = atoms;
    }

    pub fn add_atom(&mut self, a: Atom) {
        self.atoms.insert(a);
    }

    pub fn with_atom(&self, a: Atom) -> JetContext {
        let mut c = self.clone();
        c.add_atom(a);
        c
    }

    pub fn has_family(&self, name: &str) -> bool {
        self.families.contains_key(name)
    }

    /// Whether `v` belongs to a registered family (at any order).
    pub fn is_registered(&self, v: Var) -> bool {
        if self.links.contains_key(&v) || self.constants.contains(&v) {
            return true;
        }
        let name = v.name();
        let (fam, idx) = parse_symbol(&name);
        self.families
            .get(fam)
            .map(|f| idx.len() >= f.base_order)
            .unwrap_or(false)
    }

    /// Order of a jet symbol, if it belongs to a family.
    pub fn order(&self, v: Var) -> Option<usize> {
        let name = v.name();
        let (fam, idx) = parse_symbol(&name);
        self.families.get(fam).map(|_| idx.len())
    }

    /// `λᵢⱼ, σᵢⱼ, Sᵢⱼ` in a fixed order (family, then i, then j).
    pub fn second_order_symbols(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for f in ["lambda", "sigma", "S"] {
            for i in 1..=4 {
                for j in 1..=4 {
                    out.push(jet(f, &[i, j]));
                }
            }
        }
        out
    }

    fn derive_var(&self, v: Var, dir: usize) -> Result<Option<Var>, JetError> {
        if let Some(ds) = self.links.get(&v) {
            return Ok(Some(ds[dir - 1]));
        }
        if self.constants.contains(&v) {
            return Ok(None);
        }
        let name = v.name();
        let (fam, idx) = parse_symbol(&name);
        match self.families.get(fam) {
            Some(_) if self.extend => {
                let mut child = idx.clone();
                child.push(dir);
                Ok(Some(jet(fam, &child)))
            }
            Some(_) => Err(JetError::JetOrderExceeded { symbol: name }),
            None => Err(JetError::NoDerivative { symbol: name }),
        }
    }

    /// Derivative of a polynomial along `e_dir`.
    pub fn derive_poly(&self, p: &Poly, dir: usize) -> Result<Poly, JetError> {
        if !(1..=4).contains(&dir) {
            return Err(JetError::BadDirection(dir));
        }
        let mut out = Poly::zero();
        for v in p.vars() {
            if let Some(dv) = self.derive_var(v, dir)? {
                out += &(&p.partial(v) * &Poly::var(dv));
            }
        }
        Ok(out)
    }

    /// `d_dir` on fractions: Leibniz on the numerator and the quotient rule
    /// on each atom power of the denominator.
    pub fn derive(&self, f: &LocFrac, dir: usize) -> Result<LocFrac, JetError> {
        let dn = self.derive_poly(f.num(), dir)?;
        let mut out = LocFrac::new(dn, f.den().clone());
        for &(a, e) in f.den() {
            let da = self.derive_poly(&a.poly(), dir)?;
            if da.is_zero() {
                continue;
            }
            let term = f.mul_poly(&da.scale(&crate::algebra::rat(e as i64))).div_atom(a, 1);
            out = &out - &term;
        }
        Ok(out)
    }

    /// The 1-form coefficients `(d₁f, …, d₄f)`.
    pub fn gradient(&self, f: &LocFrac) -> Result<[LocFrac; 4], JetError> {
        Ok([
            self.derive(f, 1)?,
            self.derive(f, 2)?,
            self.derive(f, 3)?,
            self.derive(f, 4)?,
        ])
    }

    /// Substitution whose values must not mention any substituted symbol.
    pub fn substitute(
        &self,
        f: &LocFrac,
        map: &HashMap<Var, LocFrac>,
    ) -> Result<LocFrac, JetError> {
        for (k, val) in map {
            if val.num().vars().iter().any(|v| map.contains_key(v)) {
                return Err(JetError::SelfReference { symbol: k.name() });
            }
        }
        self.apply_map(f, map)
    }

    /// Simultaneous substitution without the self-reference check, for
    /// permutations of symbols such as frame symmetries.
    pub fn apply_map(&self, f: &LocFrac, map: &HashMap<Var, LocFrac>) -> Result<LocFrac, JetError> {
        Ok(f.substitute(map, &self.atoms)?)
    }
}

impl Default for JetContext {
    fn default() -> Self {
        JetContext::standard()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{atoms, rat};
    use proptest::prelude::*;

    fn ctx() -> JetContext {
        JetContext::standard()
    }

    #[test]
    fn first_derivatives() {
        let c = ctx();
        assert_eq!(c.derive(&jf("lambda", &[]), 3).unwrap(), jf("lambda", &[3]));
        let ls = &jf("lambda", &[]) * &jf("sigma", &[]);
        let expect = &(&jf("lambda", &[1]) * &jf("sigma", &[])) + &(&jf("lambda", &[]) * &jf("sigma", &[1]));
        assert_eq!(c.derive(&ls, 1).unwrap(), expect);
    }

    #[test]
    fn quotient_rule_instance() {
        // d₂(μ₋λ₃/(8λσ)), compared with the quotient rule written out by hand.
        let c = ctx();
        let set = c.atoms().clone();
        let (l, s) = (jf("lambda", &[]), jf("sigma", &[]));
        let mum = atoms::mu_minus_frac();
        let l3 = jf("lambda", &[3]);
        let ls8 = (&l * &s).scale(&rat(8));
        let f = (&mum * &l3).div(&ls8, &set).unwrap();
        let got = c.derive(&f, 2).unwrap();

        let dmum = &jf("sigma", &[2]).scale(&rat(2)) - &jf("lambda", &[2]);
        let t1 = (&dmum * &l3).div(&ls8, &set).unwrap();
        let t2 = (&mum * &jf("lambda", &[3, 2])).div(&ls8, &set).unwrap();
        let num3 = &(&mum * &l3) * &(&(&jf("lambda", &[2]) * &s) + &(&l * &jf("sigma", &[2])));
        let den3 = (&(&l * &l) * &(&s * &s)).scale(&rat(8));
        let t3 = num3.div(&den3, &set).unwrap();
        assert_eq!(got, &(&t1 + &t2) - &t3);
    }

    #[test]
    fn second_order_is_terminal() {
        let mut c = ctx();
        let l12 = jf("lambda", &[1, 2]);
        assert!(matches!(
            c.derive(&l12, 3),
            Err(JetError::JetOrderExceeded { .. })
        ));
        c.set_extension(true);
        assert_eq!(c.derive(&l12, 3).unwrap(), LocFrac::named("lambda123"));
    }

    #[test]
    fn mixed_jets_are_distinct() {
        let c = ctx();
        let a = c.derive(&c.derive(&jf("lambda", &[]), 1).unwrap(), 2).unwrap();
        let b = c.derive(&c.derive(&jf("lambda", &[]), 2).unwrap(), 1).unwrap();
        assert_eq!(a, jf("lambda", &[1, 2]));
        assert_ne!(a, b);
        assert_ne!(jet("lambda", &[1, 2]), jet("lambda", &[2, 1]));
    }

    #[test]
    fn substitution_examples() {
        let c = ctx();
        let sq = |v: &LocFrac| v * v;
        let expr = &(&sq(&jf("lambda", &[1])) + &sq(&jf("lambda", &[2]))) + &sq(&jf("lambda", &[4]));
        let mut m = HashMap::new();
        for i in [1, 2, 4] {
            m.insert(jet("lambda", &[i]), LocFrac::zero());
        }
        assert!(c.substitute(&expr, &m).unwrap().is_zero());

        let sp = LocFrac::named("sigmap");
        let mut m = HashMap::new();
        for i in 1..=4 {
            m.insert(jet("sigma", &[i]), &sp * &jf("lambda", &[i]));
        }
        assert_eq!(
            c.substitute(&jf("sigma", &[3]), &m).unwrap(),
            &sp * &jf("lambda", &[3])
        );

        let mut bad = HashMap::new();
        bad.insert(jet("lambda", &[1]), &jf("lambda", &[1]) + &LocFrac::one());
        assert!(matches!(
            c.substitute(&expr, &bad),
            Err(JetError::SelfReference { .. })
        ));
    }

    #[test]
    fn symbol_parsing() {
        assert_eq!(parse_symbol("lambda32"), ("lambda", vec![3, 2]));
        assert_eq!(parse_symbol("S4"), ("S", vec![4]));
        assert_eq!(parse_symbol("sigmap"), ("sigmap", vec![]));
    }

    fn arb_expr() -> impl Strategy<Value = LocFrac> {
        let names = ["lambda", "sigma", "lambda1", "sigma3", "S2"];
        prop::collection::vec((-3i64..=3, 0usize..5, 0usize..5), 1..5).prop_map(move |ts| {
            let mut acc = LocFrac::zero();
            for (c, a, b) in ts {
                let t = &LocFrac::named(names[a]) * &LocFrac::named(names[b]);
                acc = &acc + &t.scale(&rat(c));
            }
            acc.div_atom(atoms::sigma(), 1)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn derive_is_linear_and_leibniz(a in arb_expr(), b in arb_expr(), dir in 1usize..=4) {
            let c = ctx();
            let da = c.derive(&a, dir).unwrap();
            let db = c.derive(&b, dir).unwrap();
            prop_assert_eq!(c.derive(&(&a + &b), dir).unwrap(), &da + &db);
            prop_assert_eq!(c.derive(&(&a * &b), dir).unwrap(), &(&da * &b) + &(&a * &db));
        }

        #[test]
        fn substitution_commutes_with_ring_ops(a in arb_expr(), b in arb_expr(), k in -3i64..=3) {
            let c = ctx();
            let mut m = HashMap::new();
            m.insert(jet("lambda", &[1]), LocFrac::int(k));
            m.insert(jet("S", &[2]), LocFrac::named("sigma4"));
            let sa = c.substitute(&a, &m).unwrap();
            let sb = c.substitute(&b, &m).unwrap();
            prop_assert_eq!(c.substitute(&(&a * &b), &m).unwrap(), &sa * &sb);
            prop_assert_eq!(c.substitute(&(&a + &b), &m).unwrap(), &sa + &sb);
        }
    }
}
