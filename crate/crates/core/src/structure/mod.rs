//! Orthonormal coframes with a unitary connection: the connection matrix,
//! torsion and curvature, Lie brackets of the dual frame and covariant
//! derivatives of tensors built from the coframe.
//!
//! A [`StructureSystem`] lives in an abstract exterior algebra whose
//! generators are the four coframe forms followed by the extra 1-forms of
//! the system (for the shipped file `F, G, L, S`). Rewrite rules give `d` of
//! every generator. Projecting the extra forms onto the coframe, `X = Σ Xᵢ eⁱ`,
//! produces rules on the coframe alone ([`StructureSystem::frame_rules`]).

pub mod eds;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::algebra::{rank, rat, LocFrac, Rational, Var};
use crate::forms::{Blade, DForm, DRules, FormError};
use crate::jets::{jf, JetContext, JetError};

pub use eds::{parse_eds, parse_eds_file, token_kinds, Directive, EdsFile};

/// The shipped structure equations.
pub const SHIPPED_EDS: &str = include_str!("../../data/weakly-einstein.eds");

#[derive(Debug, Error)]
pub enum StructureError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("the system does not define `{0}`")]
    Missing(String),
}

/// `grid[k][j]` is `Γⱼᵏ`, so rows are indexed by the upper index as in the
/// usual matrix display.
pub type Grid = [[DForm; 4]; 4];

#[derive(Debug, Clone)]
pub struct StructureSystem {
    pub frame: Vec<String>,
    pub oneforms: Vec<String>,
    pub scalars: Vec<String>,
    pub atoms: crate::algebra::AtomSet,
    pub defines: Vec<(String, DForm)>,
    pub rules: DRules,
    pub source: EdsFile,
}

/// Lays out `E, F, G, H` in the unitary pattern.
pub fn build_connection(e: &DForm, f: &DForm, g: &DForm, h: &DForm) -> Grid {
    let z = DForm::zero(1);
    [
        [z.clone(), e.clone(), f.clone(), g.clone()],
        [e.neg(), z.clone(), g.neg(), f.clone()],
        [f.neg(), g.clone(), z.clone(), h.clone()],
        [g.neg(), f.neg(), h.neg(), z],
    ]
}

/// Outcome of checking a connection grid for metric and `J` compatibility.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParallelReport {
    pub skew_violations: Vec<String>,
    pub j_violations: Vec<String>,
}

impl ParallelReport {
    pub fn passed(&self) -> bool {
        self.skew_violations.is_empty() && self.j_violations.is_empty()
    }
}

/// Index quadruples `(j, p, k, q)` (zero based) for which `∇J = 0` demands
/// `Γⱼᵏ = (−1)^{j+k} Γₚ^q`.
const J_RELATIONS: [(usize, usize, usize, usize); 4] =
    [(0, 1, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1), (2, 3, 1, 0)];

fn j_sign(j: usize, k: usize) -> i64 {
    // One-based parity equals zero-based parity for j + k.
    if (j + k) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Checks `∇g = 0` (skewness of `Γⱼᵏ` in `j, k`) and `∇J = 0` for the
/// complex structure `J(e₁, e₂, e₃, e₄) = (e₂, −e₁, e₄, −e₃)`.
pub fn verify_parallel_g_j(grid: &Grid, names: &[&str]) -> ParallelReport {
    let mut rep = ParallelReport::default();
    for j in 0..4 {
        for k in j..4 {
            let s = grid[k][j].add(&grid[j][k]);
            if !s.is_zero() {
                rep.skew_violations.push(if j == k {
                    format!("G_{0}^{0} = {1} is not zero", j + 1, grid[k][j].display(names))
                } else {
                    format!(
                        "G_{}^{} + G_{}^{} = {}",
                        j + 1,
                        k + 1,
                        k + 1,
                        j + 1,
                        s.display(names)
                    )
                });
            }
        }
    }
    for (j, p, k, q) in J_RELATIONS {
        let rhs = grid[q][p].scale(&LocFrac::int(j_sign(j, k)));
        let r = grid[k][j].sub(&rhs);
        if !r.is_zero() {
            rep.j_violations.push(format!(
                "G_{}^{} - ({})G_{}^{} = {}",
                j + 1,
                k + 1,
                j_sign(j, k),
                p + 1,
                q + 1,
                r.display(names)
            ));
        }
    }
    rep
}

/// Rows of the linear conditions `∇g = 0`, `∇J = 0` on the sixteen entries
/// `x[4k + j] = Γⱼᵏ`.
fn parallel_conditions() -> Vec<Vec<Rational>> {
    let mut rows = Vec::new();
    for j in 0..4 {
        for k in j..4 {
            let mut r = vec![rat(0); 16];
            r[4 * k + j] += rat(1);
            r[4 * j + k] += rat(1);
            rows.push(r);
        }
    }
    for (j, p, k, q) in J_RELATIONS {
        let mut r = vec![rat(0); 16];
        r[4 * k + j] += rat(1);
        r[4 * q + p] -= rat(j_sign(j, k));
        rows.push(r);
    }
    rows
}

/// Dimension of the space of grids satisfying both compatibility conditions,
/// and whether the `E, F, G, H` pattern spans that space.
pub fn parallel_solution_space() -> (usize, bool) {
    let rows = parallel_conditions();
    let dim = 16 - rank(&rows);
    let mut basis = Vec::new();
    for slot in 0..4 {
        let mut forms = [DForm::zero(1), DForm::zero(1), DForm::zero(1), DForm::zero(1)];
        forms[slot] = DForm::generator(0);
        let g = build_connection(&forms[0], &forms[1], &forms[2], &forms[3]);
        let v: Vec<Rational> = (0..16)
            .map(|i| {
                g[i / 4][i % 4]
                    .coeff(1)
                    .constant_value()
                    .expect("pattern entries are constant")
            })
            .collect();
        basis.push(v);
    }
    let satisfies = basis.iter().all(|v| {
        rows.iter()
            .all(|r| r.iter().zip(v).map(|(a, b)| a * b).sum::<Rational>() == rat(0))
    });
    let spans = satisfies && rank(&basis) == dim;
    (dim, spans)
}

/// A tensor `Σ ω_I ⊗ e^I` whose first slot is a 1-form and whose remaining
/// slots form a coframe `p`-form, stored by blade `I`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FormTensor {
    parts: BTreeMap<Blade, DForm>,
}

impl FormTensor {
    /// `ω ⊗ φ`.
    pub fn tensor(omega: &DForm, phi: &DForm) -> FormTensor {
        let mut t = FormTensor::default();
        for (b, c) in phi.terms() {
            t.add_part(b, &omega.scale(c));
        }
        t
    }

    fn add_part(&mut self, b: Blade, w: &DForm) {
        let entry = self.parts.entry(b).or_insert_with(|| DForm::zero(1));
        *entry = entry.add(w);
        if entry.is_zero() {
            self.parts.remove(&b);
        }
    }

    pub fn add(&self, other: &FormTensor) -> FormTensor {
        let mut t = self.clone();
        for (b, w) in &other.parts {
            t.add_part(*b, w);
        }
        t
    }

    pub fn neg(&self) -> FormTensor {
        FormTensor {
            parts: self.parts.iter().map(|(b, w)| (*b, w.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &FormTensor) -> FormTensor {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// The 1-form paired with `e^I`.
    pub fn part(&self, b: Blade) -> DForm {
        self.parts.get(&b).cloned().unwrap_or_else(|| DForm::zero(1))
    }
}

impl StructureSystem {
    /// The shipped system.
    pub fn shipped() -> StructureSystem {
        parse_eds(SHIPPED_EDS).expect("shipped structure equations parse")
    }

    pub fn ctx(&self) -> &JetContext {
        &self.rules.ctx
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.rules.names.iter().map(String::as_str).collect()
    }

    /// A named generator, abbreviation or scalar as a form.
    pub fn form(&self, name: &str) -> Result<DForm, StructureError> {
        if let Some(i) = self.rules.names.iter().position(|n| n == name) {
            return Ok(DForm::generator(i));
        }
        if let Some((_, f)) = self.defines.iter().find(|(n, _)| n == name) {
            return Ok(f.clone());
        }
        if self.scalars.iter().any(|s| s == name) {
            return Ok(DForm::scalar(LocFrac::named(name)));
        }
        Err(StructureError::Missing(name.to_string()))
    }

    /// The connection forms `E, F, G, H`.
    pub fn connection_forms(&self) -> Result<[DForm; 4], StructureError> {
        Ok([
            self.form("E")?,
            self.form("F")?,
            self.form("G")?,
            self.form("H")?,
        ])
    }

    pub fn connection(&self) -> Result<Grid, StructureError> {
        let [e, f, g, h] = self.connection_forms()?;
        Ok(build_connection(&e, &f, &g, &h))
    }

    /// `eⁱ∧Γᵢᵏ − d eᵏ` for each `k`; all four vanish exactly when the
    /// connection is torsion-free.
    pub fn torsion_residuals(&self) -> Result<[DForm; 4], StructureError> {
        let grid = self.connection()?;
        let mut out: [DForm; 4] = Default::default();
        for (k, slot) in out.iter_mut().enumerate() {
            let mut acc = DForm::zero(2);
            for (i, gamma) in grid[k].iter().enumerate() {
                acc = acc.add(&DForm::generator(i).wedge(gamma));
            }
            *slot = acc.sub(self.rules.rule(k)?);
        }
        Ok(out)
    }

    /// `R[k][l] = Rₖˡ = −dΓₖˡ + Γₖᵖ∧Γₚˡ`.
    pub fn curvature(&self) -> Result<Grid, StructureError> {
        let g = self.connection()?;
        let mut out: Grid = Default::default();
        for k in 0..4 {
            for l in 0..4 {
                let mut acc = self.rules.ext_d(&g[l][k])?.neg();
                for p in 0..4 {
                    acc = acc.add(&g[p][k].wedge(&g[l][p]));
                }
                out[k][l] = acc;
            }
        }
        Ok(out)
    }

    /// The curvature the system is meant to have, in terms of its two
    /// scalars `λ, σ`.
    pub fn expected_curvature(&self) -> Grid {
        let l = LocFrac::named(&self.scalars[0]);
        let s = LocFrac::named(&self.scalars[1]);
        let b = |c: &LocFrac, i: &[usize]| DForm::basis(c.clone(), i);
        let mut out: Grid = Default::default();
        for row in out.iter_mut() {
            for x in row.iter_mut() {
                *x = DForm::zero(2);
            }
        }
        let mut put = |k: usize, l: usize, f: DForm| {
            out[l][k] = f.neg();
            out[k][l] = f;
        };
        let ac_db = b(&s, &[0, 2]).sub(&b(&s, &[3, 1]));
        let ad_bc = b(&s, &[0, 3]).sub(&b(&s, &[1, 2]));
        put(0, 1, b(&-&l, &[0, 1]));
        put(0, 2, ac_db.clone());
        put(1, 3, ac_db);
        put(2, 3, b(&l, &[2, 3]));
        put(1, 2, ad_bc.clone());
        put(0, 3, ad_bc.neg());
        out
    }

    /// Images of all generators when every extra 1-form `X` is written as
    /// `Σ Xᵢ eⁱ` with free component symbols.
    pub fn free_images(&self) -> Vec<DForm> {
        let mut out: Vec<DForm> = (0..self.frame.len()).map(DForm::generator).collect();
        for x in &self.oneforms {
            let mut f = DForm::zero(1);
            for i in 0..4 {
                f.add_term(1 << i, jf(x, &[i + 1]));
            }
            out.push(f);
        }
        out
    }

    /// As [`free_images`](Self::free_images), with component symbols
    /// replaced through `values`.
    pub fn images_with(
        &self,
        values: &HashMap<Var, LocFrac>,
    ) -> Result<Vec<DForm>, StructureError> {
        let ctx = self.ctx();
        let mut out = Vec::new();
        for f in self.free_images() {
            out.push(f.try_map(|c| ctx.substitute(c, values))?);
        }
        Ok(out)
    }

    /// Rewrite rules on the coframe alone after projecting the extra
    /// 1-forms through `images`.
    pub fn frame_rules(&self, images: &[DForm]) -> Result<DRules, StructureError> {
        let mut r = DRules::new(self.ctx().clone(), self.frame.clone());
        for k in 0..self.frame.len() {
            r.set(k, self.rules.rule(k)?.substitute_generators(images));
        }
        Ok(r)
    }

    /// Components of `[eᵢ, eⱼ]` (zero based), read off from
    /// `deᵏ(eᵢ, eⱼ) = −eᵏ([eᵢ, eⱼ])`.
    pub fn lie_bracket(
        frame: &DRules,
        i: usize,
        j: usize,
    ) -> Result<[LocFrac; 4], StructureError> {
        let mut out: [LocFrac; 4] = Default::default();
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = -frame.rule(k)?.coeff_of(&[i, j]);
        }
        Ok(out)
    }

    /// `∇φ` for a coframe form `φ`, using `∇eᵏ = −Γⱼᵏ ⊗ eʲ`.
    pub fn nabla_form(&self, phi: &DForm) -> Result<FormTensor, StructureError> {
        let grid = self.connection()?;
        let mut out = FormTensor::default();
        for (b, c) in phi.terms() {
            let idx: Vec<usize> = (0..16).filter(|i| b & (1 << i) != 0).collect();
            let dc = self.rules.d_scalar(c)?;
            out = out.add(&FormTensor::tensor(&dc, &DForm::term(LocFrac::one(), b)));
            for (m, &k) in idx.iter().enumerate() {
                for (j, gamma) in grid[k].iter().enumerate() {
                    let mut rep = idx.clone();
                    rep[m] = j;
                    let slot = DForm::basis(c.clone(), &rep);
                    out = out.sub(&FormTensor::tensor(gamma, &slot));
                }
            }
        }
        Ok(out)
    }

    /// `∇` of the constant bilinear form `Σ m[a][b] eᵃ ⊗ eᵇ`; entry `[x][y]`
    /// of the result is the 1-form paired with `eˣ ⊗ eʸ`.
    pub fn nabla_bilinear(
        &self,
        m: &[[LocFrac; 4]; 4],
    ) -> Result<[[DForm; 4]; 4], StructureError> {
        let g = self.connection()?;
        let mut out: [[DForm; 4]; 4] = Default::default();
        for row in out.iter_mut() {
            for x in row.iter_mut() {
                *x = DForm::zero(1);
            }
        }
        for a in 0..4 {
            for b in 0..4 {
                if m[a][b].is_zero() {
                    continue;
                }
                for j in 0..4 {
                    out[j][b] = out[j][b].sub(&g[a][j].scale(&m[a][b]));
                    out[a][j] = out[a][j].sub(&g[b][j].scale(&m[a][b]));
                }
            }
        }
        Ok(out)
    }
}

/// The anti-self-dual forms `ζ = −AB + CD`, `η = −AC + DB`, `θ = −AD + BC`.
pub fn zeta_eta_theta() -> [DForm; 3] {
    let b = |i: &[usize], s: i64| DForm::basis(LocFrac::int(s), i);
    [
        b(&[0, 1], -1).add(&b(&[2, 3], 1)),
        b(&[0, 2], -1).add(&b(&[3, 1], 1)),
        b(&[0, 3], -1).add(&b(&[1, 2], 1)),
    ]
}

/// The Kähler form `ω = AB + CD`.
pub fn kahler_form() -> DForm {
    DForm::basis(LocFrac::one(), &[0, 1]).add(&DForm::basis(LocFrac::one(), &[2, 3]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys() -> StructureSystem {
        StructureSystem::shipped()
    }

    fn f(s: &StructureSystem, name: &str) -> DForm {
        s.form(name).unwrap()
    }

    #[test]
    fn connection_pattern() {
        let s = sys();
        let g = s.connection().unwrap();
        assert_eq!(g[0][1], f(&s, "E"));
        assert_eq!(g[1][2], f(&s, "G").neg());
        for j in 0..4 {
            for k in 0..4 {
                assert!(g[j][k].add(&g[k][j]).is_zero());
            }
        }
    }

    #[test]
    fn parallel_checks() {
        let s = sys();
        let names = s.generator_names();
        let g = s.connection().unwrap();
        assert!(verify_parallel_g_j(&g, &names).passed());

        let mut bad = g.clone();
        bad[0][0] = f(&s, "F");
        let r = verify_parallel_g_j(&bad, &names);
        assert!(r.skew_violations.iter().any(|v| v.starts_with("G_1^1")));

        let mut flip = g.clone();
        flip[2][3] = flip[2][3].neg();
        let r = verify_parallel_g_j(&flip, &names);
        assert!(!r.passed());
        assert!(!r.skew_violations.is_empty());

        // A sign change that keeps skewness but breaks the J relation.
        let mut jflip = g;
        jflip[1][3] = jflip[1][3].neg();
        jflip[3][1] = jflip[3][1].neg();
        let r = verify_parallel_g_j(&jflip, &names);
        assert!(r.skew_violations.is_empty());
        assert!(!r.j_violations.is_empty());

        assert_eq!(parallel_solution_space(), (4, true));
    }

    #[test]
    fn torsion_free() {
        let s = sys();
        for r in s.torsion_residuals().unwrap() {
            assert!(r.is_zero());
        }
        let mut p = s.clone();
        let b_e = DForm::generator(1).wedge(&f(&s, "E"));
        p.rules.set(0, b_e);
        let r = p.torsion_residuals().unwrap();
        let want = DForm::generator(2)
            .wedge(&f(&s, "F"))
            .add(&DForm::generator(3).wedge(&f(&s, "G")));
        assert_eq!(r[0], want);
    }

    #[test]
    fn curvature_matches() {
        let s = sys();
        let r = s.curvature().unwrap();
        assert_eq!(r, s.expected_curvature());
        assert_eq!(r[0][1], DForm::basis(-LocFrac::named("lambda"), &[0, 1]));
    }

    #[test]
    fn brackets() {
        let s = sys();
        let fr = s.frame_rules(&s.free_images()).unwrap();
        let two = |v: [LocFrac; 4]| v.map(|x| x.scale(&rat(2)));
        let c = |n: &str, i: usize| jf(n, &[i]);
        let b12 = two(StructureSystem::lie_bracket(&fr, 0, 1).unwrap());
        assert_eq!(
            b12,
            [
                &c("S", 1) + &c("L", 1),
                &c("S", 2) + &c("L", 2),
                (&c("G", 1) + &c("F", 2)).scale(&rat(2)),
                (&c("G", 2) - &c("F", 1)).scale(&rat(2)),
            ]
        );
        let b13 = two(StructureSystem::lie_bracket(&fr, 0, 2).unwrap());
        assert_eq!(
            b13,
            [
                c("F", 1).scale(&rat(2)),
                &(&c("S", 3) + &c("L", 3)) - &c("G", 1).scale(&rat(2)),
                c("F", 3).scale(&rat(2)),
                &(&c("G", 3).scale(&rat(2)) + &c("L", 1)) - &c("S", 1),
            ]
        );
        let b31 = StructureSystem::lie_bracket(&fr, 2, 0).unwrap();
        for k in 0..4 {
            assert_eq!(b31[k].scale(&rat(-2)), b13[k]);
        }
        assert!(StructureSystem::lie_bracket(&fr, 1, 1)
            .unwrap()
            .iter()
            .all(LocFrac::is_zero));
    }

    #[test]
    fn covariant_derivatives() {
        let s = sys();
        let [z, e, t] = zeta_eta_theta();
        let (gf, ff, lf) = (f(&s, "G"), f(&s, "F"), f(&s, "L"));
        let two = |x: &DForm| x.scale(&LocFrac::int(2));
        let nz = s.nabla_form(&z).unwrap();
        let want = FormTensor::tensor(&two(&gf), &e).sub(&FormTensor::tensor(&two(&ff), &t));
        assert_eq!(nz, want);
        let ne = s.nabla_form(&e).unwrap();
        let want = FormTensor::tensor(&two(&gf), &z)
            .neg()
            .add(&FormTensor::tensor(&lf, &t));
        assert_eq!(ne, want);
        let nt = s.nabla_form(&t).unwrap();
        let want = FormTensor::tensor(&two(&ff), &z).sub(&FormTensor::tensor(&lf, &e));
        assert_eq!(nt, want);

        let na = s.nabla_form(&DForm::generator(0)).unwrap();
        let want = FormTensor::tensor(&f(&s, "E"), &DForm::generator(1))
            .add(&FormTensor::tensor(&ff, &DForm::generator(2)))
            .add(&FormTensor::tensor(&gf, &DForm::generator(3)))
            .neg();
        assert_eq!(na, want);

        let mut id: [[LocFrac; 4]; 4] = Default::default();
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = LocFrac::one();
        }
        let ng = s.nabla_bilinear(&id).unwrap();
        assert!(ng.iter().flatten().all(DForm::is_zero));
    }

    #[test]
    fn kahler_form_closed() {
        let s = sys();
        assert!(s.rules.ext_d(&kahler_form()).unwrap().is_zero());
    }
}
