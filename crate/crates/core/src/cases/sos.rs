//! Rational sum-of-squares certificates for small forms.
//!
//! A form `p` of degree `2d` is written as `mᵀ Q m` over the monomials `m` of
//! degree `d`, and `Q` is factored as `L D Lᵀ`; a certificate exists when
//! every pivot is nonnegative. For binary forms the Gram matrix is not
//! unique, so the free placements of each coefficient are tried in turn,
//! outermost first.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Monomial, Poly, Rational, Var};

/// `p = Σ cᵢ qᵢ²` with every `cᵢ > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SosCertificate {
    pub terms: Vec<(Rational, Poly)>,
}

impl SosCertificate {
    pub fn expand(&self) -> Poly {
        self.terms
            .iter()
            .fold(Poly::zero(), |acc, (c, q)| &acc + &(q * q).scale(c))
    }
}

impl fmt::Display for SosCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (c, q)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "({q})^2")?;
            } else {
                write!(f, "{c} ({q})^2")?;
            }
        }
        Ok(())
    }
}

impl Serialize for SosCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Inconclusive {
    #[error("not a homogeneous form of even degree")]
    NotEvenForm,
    #[error("forms of degree > 2 are handled in two variables only")]
    TooManyVariables,
    #[error("no Gram matrix in the ansatz is positive semidefinite")]
    NoDecomposition,
}

/// Certificate for `p`, or why the ansatz gave up. Failure is not a proof
/// that `p` takes negative values.
pub fn sos_certificate(p: &Poly) -> Result<SosCertificate, Inconclusive> {
    let mut vars: Vec<Var> = p.vars().into_iter().collect();
    vars.sort_by_key(|v| v.name());
    let deg = p.degree();
    if p.is_zero() {
        return Ok(SosCertificate { terms: Vec::new() });
    }
    if deg % 2 != 0 || p.terms().any(|(m, _)| m.degree() != deg) {
        return Err(Inconclusive::NotEvenForm);
    }
    let d = deg / 2;
    if d == 1 {
        return quadratic(p, &vars);
    }
    if vars.len() > 2 {
        return Err(Inconclusive::TooManyVariables);
    }
    if vars.len() == 1 {
        let q = Poly::term(Rational::one(), Monomial::var_pow(vars[0], d));
        let c = p.coefficient(&Monomial::var_pow(vars[0], deg));
        return finish(p, vec![(c, q)]);
    }
    binary(p, vars[0], vars[1], d)
}

fn quadratic(p: &Poly, vars: &[Var]) -> Result<SosCertificate, Inconclusive> {
    let n = vars.len();
    let half = Rational::new(1.into(), 2.into());
    let mut q = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let m = Monomial::var(vars[i]).mul(&Monomial::var(vars[j]));
            let c = p.coefficient(&m);
            if i == j {
                q[i][i] = c;
            } else {
                q[i][j] = &c * &half;
                q[j][i] = &c * &half;
            }
        }
    }
    let basis: Vec<Poly> = vars.iter().map(|v| Poly::var(*v)).collect();
    let terms = ldl(q, &basis).ok_or(Inconclusive::NoDecomposition)?;
    finish(p, terms)
}

fn binary(p: &Poly, x: Var, y: Var, d: u32) -> Result<SosCertificate, Inconclusive> {
    let n = d as usize + 1;
    let mono = |i: usize| Monomial::from_pairs(vec![(x, d - i as u32), (y, i as u32)]);
    let basis: Vec<Poly> = (0..n).map(|i| Poly::term(Rational::one(), mono(i))).collect();
    let coeff = |k: usize| p.coefficient(&Monomial::from_pairs(vec![(x, 2 * d - k as u32), (y, k as u32)]));
    // Placements (i, k − i) with i ≤ k − i for each coefficient index k.
    let places: Vec<Vec<usize>> = (0..2 * n - 1)
        .map(|k| (k.saturating_sub(n - 1)..=k / 2).collect())
        .collect();
    let mut choice = vec![0usize; places.len()];
    let half = Rational::new(1.into(), 2.into());
    for _ in 0..4096 {
        let mut q = vec![vec![Rational::zero(); n]; n];
        for (k, opts) in places.iter().enumerate() {
            let i = opts[choice[k]];
            let j = k - i;
            let c = coeff(k);
            if i == j {
                q[i][i] = c;
            } else {
                q[i][j] = &c * &half;
                q[j][i] = &c * &half;
            }
        }
        if let Some(terms) = ldl(q, &basis) {
            return finish(p, terms);
        }
        // Odometer over the placement choices.
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Err(Inconclusive::NoDecomposition);
            }
            choice[k] += 1;
            if choice[k] < places[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
    Err(Inconclusive::NoDecomposition)
}

/// `L D Lᵀ` of a symmetric rational matrix; `None` unless it is positive
/// semidefinite.
fn ldl(mut q: Vec<Vec<Rational>>, basis: &[Poly]) -> Option<Vec<(Rational, Poly)>> {
    let n = q.len();
    let mut out = Vec::new();
    for k in 0..n {
        let pivot = q[k][k].clone();
        if pivot.is_negative() {
            return None;
        }
        if pivot.is_zero() {
            if (k + 1..n).any(|j| !q[k][j].is_zero()) {
                return None;
            }
            continue;
        }
        let mut lin = Poly::zero();
        for j in k..n {
            lin += &basis[j].scale(&(&q[k][j] / &pivot));
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&q[i][k] * &q[k][j]) / &pivot;
                q[i][j] -= t;
            }
        }
        out.push((pivot, lin));
    }
    Some(out)
}

fn finish(p: &Poly, terms: Vec<(Rational, Poly)>) -> Result<SosCertificate, Inconclusive> {
    let cert = SosCertificate { terms };
    if cert.terms.iter().all(|(c, _)| c.is_positive()) && cert.expand() == *p {
        Ok(cert)
    } else {
        Err(Inconclusive::NoDecomposition)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;

    fn p(s: &str) -> Poly {
        Poly::named(s)
    }

    #[test]
    fn quartic_from_case_ii() {
        let (l, s) = (p("lambda"), p("sigma"));
        let l2 = &l * &l;
        let s2 = &s * &s;
        let f = &(&(&l2 * &l2) - &(&l2 * &s2).scale(&ratio(5, 1))) + &(&s2 * &s2).scale(&ratio(12, 1));
        let cert = sos_certificate(&f).unwrap();
        assert_eq!(cert.expand(), f);
        // (λ² − 5/2 σ²)² + 23/4 σ⁴
        let want = SosCertificate {
            terms: vec![
                (ratio(1, 1), &l2 - &s2.scale(&ratio(5, 2))),
                (ratio(23, 4), s2.clone()),
            ],
        };
        assert_eq!(cert, want);
    }

    #[test]
    fn trivial_squares() {
        let (l, s) = (p("lambda"), p("sigma"));
        let f = &(&l * &l) + &(&s * &s);
        let cert = sos_certificate(&f).unwrap();
        assert_eq!(cert.terms, vec![(ratio(1, 1), l.clone()), (ratio(1, 1), s.clone())]);
        let g = ["lambda1", "lambda2", "lambda3"]
            .iter()
            .fold(Poly::zero(), |acc, n| &acc + &(&p(n) * &p(n)));
        let cert = sos_certificate(&g).unwrap();
        assert_eq!(cert.terms.len(), 3);
        assert!(cert.terms.iter().all(|(c, _)| c.is_one()));
    }

    #[test]
    fn indefinite_and_odd_are_inconclusive() {
        let (l, s) = (p("lambda"), p("sigma"));
        assert_eq!(
            sos_certificate(&(&(&l * &l) - &(&s * &s))),
            Err(Inconclusive::NoDecomposition)
        );
        assert_eq!(sos_certificate(&(&l * &(&l * &s))), Err(Inconclusive::NotEvenForm));
        assert_eq!(sos_certificate(&(&l + &(&s * &s))), Err(Inconclusive::NotEvenForm));
    }

    #[test]
    fn middle_placement_is_found() {
        // x⁴ + 6x²y² + y⁴ needs the x²y² coefficient on the diagonal.
        let (x, y) = (p("lambda"), p("sigma"));
        let x2 = &x * &x;
        let y2 = &y * &y;
        let f = &(&(&x2 * &x2) + &(&x2 * &y2).scale(&ratio(6, 1))) + &(&y2 * &y2);
        assert_eq!(sos_certificate(&f).unwrap().expand(), f);
    }
}
