//! Signed frame permutations with sign changes of λ and σ, the group they
//! generate, and the simultaneous rotations of `(e₁,e₂)` and `(e₃,e₄)`.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use super::second_order::DerivedSet;
use super::DeriveError;
use crate::algebra::{LocFrac, Poly, Var};
use crate::forms::DForm;
use crate::jets::{jet, jf, JetContext};
use crate::structure::StructureSystem;

/// `e'ₐ = signs[a]·e_{perm[a]}` (zero based), `λ' = s_λ λ`, `σ' = s_σ σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SymmetryElement {
    pub perm: [usize; 4],
    pub signs: [i8; 4],
    pub s_lambda: i8,
    pub s_sigma: i8,
}

/// Connection pattern as `(sign, letter)`; `grid[k][j] = Γⱼᵏ`.
const PATTERN: [[(i8, char); 4]; 4] = [
    [(0, '0'), (1, 'E'), (1, 'F'), (1, 'G')],
    [(-1, 'E'), (0, '0'), (-1, 'G'), (1, 'F')],
    [(-1, 'F'), (1, 'G'), (0, '0'), (1, 'H')],
    [(-1, 'G'), (-1, 'F'), (-1, 'H'), (0, '0')],
];

impl SymmetryElement {
    pub const fn new(perm: [usize; 4], signs: [i8; 4], s_lambda: i8, s_sigma: i8) -> Self {
        SymmetryElement {
            perm,
            signs,
            s_lambda,
            s_sigma,
        }
    }

    pub const fn identity() -> Self {
        SymmetryElement::new([0, 1, 2, 3], [1; 4], 1, 1)
    }

    /// The four generating replacements, `k = 1..=4`.
    pub fn rep(k: usize) -> Self {
        match k {
            1 => SymmetryElement::new([1, 0, 2, 3], [1, -1, 1, 1], 1, -1),
            2 => SymmetryElement::new([0, 1, 3, 2], [1, 1, 1, -1], 1, -1),
            3 => SymmetryElement::new([1, 0, 3, 2], [1, -1, 1, -1], 1, 1),
            4 => SymmetryElement::new([2, 3, 0, 1], [1; 4], -1, 1),
            _ => panic!("replacement case {k} out of range 1..=4"),
        }
    }

    /// The five replacement cases used for subscripted equations.
    pub fn rpl(k: usize) -> Self {
        match k {
            5 => SymmetryElement::new([2, 3, 1, 0], [1, 1, 1, -1], -1, -1),
            _ => SymmetryElement::rep(k),
        }
    }

    /// This replacement followed by `next` (applied to the new frame).
    pub fn then(&self, next: &SymmetryElement) -> SymmetryElement {
        let mut perm = [0; 4];
        let mut signs = [1; 4];
        for a in 0..4 {
            perm[a] = self.perm[next.perm[a]];
            signs[a] = next.signs[a] * self.signs[next.perm[a]];
        }
        SymmetryElement::new(perm, signs, self.s_lambda * next.s_lambda, self.s_sigma * next.s_sigma)
    }

    /// `Γ'ⱼᵏ = εⱼεₖ Γ_{π(j)}^{π(k)}` as a signed letter.
    fn gamma_image(&self, k: usize, j: usize) -> (i8, char) {
        let (s, l) = PATTERN[self.perm[k]][self.perm[j]];
        (s * self.signs[j] * self.signs[k], l)
    }

    /// Images of `E, F, G, H` as signed letters.
    pub fn connection_letters(&self) -> [(i8, char); 4] {
        [
            self.gamma_image(0, 1),
            self.gamma_image(0, 2),
            self.gamma_image(0, 3),
            self.gamma_image(2, 3),
        ]
    }

    /// Sign `s` with `S' = s·S`, if the image of `S = E + H` is `±S`.
    pub fn s_sign(&self) -> Option<i8> {
        let [e, _, _, h] = self.connection_letters();
        match (e, h) {
            ((a, 'E'), (b, 'H')) | ((b, 'H'), (a, 'E')) if a == b => Some(a),
            _ => None,
        }
    }

    /// Images of every generator of `sys` (coframe, then extra 1-forms).
    pub fn form_images(&self, sys: &StructureSystem) -> Result<Vec<DForm>, DeriveError> {
        let grid = sys.connection()?;
        let g = |k: usize, j: usize| {
            let f = &grid[self.perm[k]][self.perm[j]];
            if self.signs[j] * self.signs[k] < 0 {
                f.neg()
            } else {
                f.clone()
            }
        };
        let e = g(0, 1);
        let h = g(2, 3);
        let mut named: HashMap<&str, DForm> = HashMap::new();
        named.insert("F", g(0, 2));
        named.insert("G", g(0, 3));
        named.insert("L", e.sub(&h));
        named.insert("S", e.add(&h));
        let mut out = Vec::new();
        for a in 0..4 {
            let f = DForm::generator(self.perm[a]);
            out.push(if self.signs[a] < 0 { f.neg() } else { f });
        }
        for name in &sys.oneforms {
            out.push(
                named
                    .get(name.as_str())
                    .cloned()
                    .ok_or_else(|| DeriveError::Mismatch(format!("no image for {name}")))?,
            );
        }
        Ok(out)
    }

    fn scalar_map(&self) -> HashMap<Var, LocFrac> {
        let mut m = HashMap::new();
        m.insert(Var::named("lambda"), LocFrac::named("lambda").scale(&crate::algebra::rat(self.s_lambda as i64)));
        m.insert(Var::named("sigma"), LocFrac::named("sigma").scale(&crate::algebra::rat(self.s_sigma as i64)));
        m
    }

    /// Whether `d(φX) = φ(dX)` for every generator `X`, where `φ` acts on
    /// generators by [`form_images`](Self::form_images) and on λ, σ by sign.
    pub fn preserves_rules(&self, sys: &StructureSystem) -> Result<bool, DeriveError> {
        let images = self.form_images(sys)?;
        let map = self.scalar_map();
        let ctx = sys.ctx();
        for (k, img) in images.iter().enumerate() {
            let lhs = sys.rules.ext_d(img)?;
            let rhs = sys.rules.rule(k)?.substitute_generators(&images).try_map(|c| ctx.apply_map(c, &map))?;
            if !lhs.sub(&rhs).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The induced substitution on `λ, σ, S` and their jets to order two.
    pub fn jet_map(&self) -> Result<HashMap<Var, LocFrac>, DeriveError> {
        let s_s = self
            .s_sign()
            .ok_or_else(|| DeriveError::Mismatch("element does not fix S up to sign".into()))?;
        let mut m = self.scalar_map();
        let sgn = |x: i8, f: LocFrac| if x < 0 { -f } else { f };
        for (fam, base) in [("lambda", self.s_lambda), ("sigma", self.s_sigma), ("S", s_s)] {
            for a in 0..4 {
                let s1 = base * self.signs[a];
                m.insert(jet(fam, &[a + 1]), sgn(s1, jf(fam, &[self.perm[a] + 1])));
                for b in 0..4 {
                    let s2 = s1 * self.signs[b];
                    m.insert(jet(fam, &[a + 1, b + 1]), sgn(s2, jf(fam, &[self.perm[a] + 1, self.perm[b] + 1])));
                }
            }
        }
        Ok(m)
    }

    /// Rewrites a scalar in `λ, σ, S` jets for the new frame and scalars.
    pub fn act_on_scalar(&self, f: &LocFrac, ctx: &JetContext) -> Result<LocFrac, DeriveError> {
        Ok(ctx.apply_map(f, &self.jet_map()?)?)
    }

    /// For each derived equation, the index of the derived equation that its
    /// image is a unit multiple of; `None` if some image has no partner or
    /// two images share one.
    pub fn permutes(&self, set: &DerivedSet) -> Result<Option<Vec<usize>>, DeriveError> {
        let atoms = set.atoms();
        let keys: Vec<Poly> = set.equations.iter().map(|e| e.poly(atoms)).collect();
        let mut index: HashMap<&Poly, usize> = HashMap::new();
        for (k, p) in keys.iter().enumerate() {
            index.insert(p, k);
        }
        let map = self.jet_map()?;
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for e in &set.equations {
            let img = set.ctx.apply_map(&e.value, &map)?;
            let key = img.normal_form(atoms).2;
            match index.get(&key) {
                Some(&k) if seen.insert(k) => out.push(k),
                _ => return Ok(None),
            }
        }
        Ok(Some(out))
    }
}

/// Closure of the replacements (i) and (iv) under composition.
pub fn symmetry_group() -> Vec<SymmetryElement> {
    let gens = [SymmetryElement::rep(1), SymmetryElement::rep(4)];
    let mut seen: HashSet<SymmetryElement> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([SymmetryElement::identity()]);
    while let Some(x) = queue.pop_front() {
        if !seen.insert(x) {
            continue;
        }
        order.push(x);
        for g in &gens {
            queue.push_back(x.then(g));
        }
    }
    order
}

/// Curvature components `R_{abcd}` (zero based) as integer coefficients of
/// `(λ, σ)`, generated from the nonzero list by the pair symmetries.
pub fn curvature_table() -> [[[[(i64, i64); 4]; 4]; 4]; 4] {
    let mut r = [[[[(0i64, 0i64); 4]; 4]; 4]; 4];
    let list: [([usize; 4], (i64, i64)); 8] = [
        ([0, 1, 0, 1], (-1, 0)),
        ([0, 2, 0, 2], (0, 1)),
        ([1, 3, 1, 3], (0, 1)),
        ([0, 3, 1, 2], (0, 1)),
        ([0, 3, 0, 3], (0, -1)),
        ([1, 2, 1, 2], (0, -1)),
        ([0, 2, 3, 1], (0, -1)),
        ([2, 3, 2, 3], (1, 0)),
    ];
    for ([a, b, c, d], v) in list {
        let neg = (-v.0, -v.1);
        for (p, q, w) in [((a, b), (c, d), v), ((b, a), (c, d), neg), ((a, b), (d, c), neg), ((b, a), (d, c), v)] {
            r[p.0][p.1][q.0][q.1] = w;
            r[q.0][q.1][p.0][p.1] = w;
        }
    }
    r
}

/// Whether the element maps the curvature table to itself: the components
/// in the new frame equal the table at the new scalars.
pub fn preserves_curvature_table(g: &SymmetryElement) -> bool {
    let r = curvature_table();
    let p = g.perm;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let s = (g.signs[a] * g.signs[b] * g.signs[c] * g.signs[d]) as i64;
                    let (l, m) = r[p[a]][p[b]][p[c]][p[d]];
                    let (l0, m0) = r[a][b][c][d];
                    if (s * l, s * m) != (l0 * g.s_lambda as i64, m0 * g.s_sigma as i64) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The table as polynomials in `λ, σ`.
fn curvature_polys() -> Vec<([usize; 4], Poly)> {
    let r = curvature_table();
    let l = Poly::named("lambda");
    let s = Poly::named("sigma");
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let (x, y) = r[a][b][c][d];
                    if (x, y) != (0, 0) {
                        let v = &l.scale(&crate::algebra::rat(x)) + &s.scale(&crate::algebra::rat(y));
                        out.push(([a, b, c, d], v));
                    }
                }
            }
        }
    }
    out
}

/// `R(u, v, u, v)` for frame-component vectors `u, v`.
fn sectional(u: &[Poly; 4], v: &[Poly; 4]) -> Poly {
    let mut acc = Poly::zero();
    for ([a, b, c, d], val) in curvature_polys() {
        let w = &(&(&u[a] * &v[b]) * &(&u[c] * &v[d])) * &val;
        acc += &w;
    }
    acc
}

#[derive(Clone, Debug)]
pub struct RotationReport {
    /// `R(ce₁+se₂, ce₃+se₄, ce₁+se₂, ce₃+se₄)`.
    pub rce: Poly,
    pub rce_expected: bool,
    /// Every rotated component equals `(c²+s²)²` times the table entry.
    pub all_components_scale: bool,
    /// Every rotated component minus the table entry is divisible by
    /// `c² + s² − 1`.
    pub divisible_residuals: bool,
    /// The `R₁₄₁₄` analogue, from `(e₃,e₄) → (e₄,−e₃)` and replacement (ii).
    pub r1414_via_rep_ii: bool,
    pub identity_rotation: bool,
}

impl RotationReport {
    pub fn passed(&self) -> bool {
        self.rce_expected
            && self.all_components_scale
            && self.divisible_residuals
            && self.r1414_via_rep_ii
            && self.identity_rotation
    }
}

pub fn rotation_invariance() -> RotationReport {
    let c = Poly::named("c");
    let s = Poly::named("s");
    let z = Poly::zero;
    let norm = &(&c * &c) + &(&s * &s);
    let norm2 = &norm * &norm;
    let sigma = Poly::named("sigma");

    let u = [c.clone(), s.clone(), z(), z()];
    let v = [z(), z(), c.clone(), s.clone()];
    let rce = sectional(&u, &v);
    let rce_expected = rce == &norm2 * &sigma;

    let m: [[Poly; 4]; 4] = [
        [c.clone(), s.clone(), z(), z()],
        [-&s, c.clone(), z(), z()],
        [z(), z(), c.clone(), s.clone()],
        [z(), z(), -&s, c.clone()],
    ];
    let table = curvature_polys();
    let dense: HashMap<[usize; 4], Poly> = table.iter().cloned().collect();
    let relation = &norm - &Poly::one();
    let mut all_scale = true;
    let mut divisible = true;
    let mut identity = true;
    for a in 0..4 {
        for b in 0..4 {
            for cc in 0..4 {
                for d in 0..4 {
                    let mut acc = Poly::zero();
                    for (idx, val) in &table {
                        let w = &(&(&m[a][idx[0]] * &m[b][idx[1]]) * &(&m[cc][idx[2]] * &m[d][idx[3]])) * val;
                        acc += &w;
                    }
                    let orig = dense.get(&[a, b, cc, d]).cloned().unwrap_or_else(Poly::zero);
                    if acc != &norm2 * &orig {
                        all_scale = false;
                    }
                    let diff = &acc - &orig;
                    if !diff.is_zero() && diff.div_exact(&relation).is_none() {
                        divisible = false;
                    }
                    let at_one: HashMap<Var, Poly> =
                        [(Var::named("c"), Poly::one()), (Var::named("s"), Poly::zero())].into_iter().collect();
                    if acc.substitute(&at_one) != orig {
                        identity = false;
                    }
                }
            }
        }
    }

    // (e₃,e₄) → (e₄,−e₃) turns the rce vectors into ce₁+se₂, ce₄−se₃; by
    // replacement (ii) the result is the rce value with σ → −σ.
    let v2 = [z(), z(), -&s, c.clone()];
    let r1414 = sectional(&u, &v2);
    let g = SymmetryElement::rep(2);
    let flipped = &norm2 * &sigma.scale(&crate::algebra::rat(g.s_sigma as i64));
    let r1414_via_rep_ii = r1414 == flipped;

    RotationReport {
        rce,
        rce_expected,
        all_components_scale: all_scale,
        divisible_residuals: divisible,
        r1414_via_rep_ii,
        identity_rotation: identity,
    }
}

/// Expected images under the sweep table: coframe, then `E,F,G,H,L,S`, then
/// the signs of `λ, σ`.
pub const SWEEP_TABLE: [(&str, &str, &str, (i8, i8)); 4] = [
    ("i", "B -A C D", "E -G F H L S", (1, -1)),
    ("ii", "A B D -C", "E G -F H L S", (1, -1)),
    ("iii", "D -C A B", "H -G -F E -L S", (-1, -1)),
    ("iv", "C D A B", "H -F G E -L S", (-1, 1)),
];

/// The element behind each sweep row; row (iii) is (ii) followed by (iv).
pub fn sweep_element(row: &str) -> SymmetryElement {
    match row {
        "i" => SymmetryElement::rep(1),
        "ii" => SymmetryElement::rep(2),
        "iii" => SymmetryElement::rep(2).then(&SymmetryElement::rep(4)),
        "iv" => SymmetryElement::rep(4),
        _ => panic!("unknown sweep row {row}"),
    }
}

/// Compares an element's computed images of `A..D, E..H, L, S` with a row
/// of [`SWEEP_TABLE`].
pub fn matches_sweep_row(sys: &StructureSystem, row: usize) -> Result<bool, DeriveError> {
    let (name, frame, conn, scalars) = SWEEP_TABLE[row];
    let g = sweep_element(name);
    let images = g.form_images(sys)?;
    let grid = sys.connection()?;
    let lookup = |tok: &str| -> Result<DForm, DeriveError> {
        let (neg, n) = match tok.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, tok),
        };
        let f = sys.form(n)?;
        Ok(if neg { f.neg() } else { f })
    };
    for (k, tok) in frame.split_whitespace().enumerate() {
        if images[k] != lookup(tok)? {
            return Ok(false);
        }
    }
    let pos = |n: &str| sys.oneforms.iter().position(|x| x == n).map(|i| i + 4);
    let sgn = |x: i8, f: &DForm| if x < 0 { f.neg() } else { f.clone() };
    let e = sgn(g.signs[0] * g.signs[1], &grid[g.perm[0]][g.perm[1]]);
    let h = sgn(g.signs[2] * g.signs[3], &grid[g.perm[2]][g.perm[3]]);
    let computed = [
        e,
        images[pos("F").unwrap_or(0)].clone(),
        images[pos("G").unwrap_or(0)].clone(),
        h,
        images[pos("L").unwrap_or(0)].clone(),
        images[pos("S").unwrap_or(0)].clone(),
    ];
    for (k, tok) in conn.split_whitespace().enumerate() {
        if computed[k] != lookup(tok)? {
            return Ok(false);
        }
    }
    Ok((g.s_lambda, g.s_sigma) == scalars)
}

/// Expected images of `E, H, S` for the five replacement cases.
pub const RPL_TABLE: [&str; 5] = ["E H S", "E H S", "E H S", "H E S", "H E S"];

pub fn matches_rpl_row(k: usize) -> bool {
    let g = SymmetryElement::rpl(k);
    let [e, _, _, h] = g.connection_letters();
    let got = format!("{} {} S", e.1, h.1);
    e.0 == 1 && h.0 == 1 && g.s_sign() == Some(1) && got == RPL_TABLE[k - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_has_thirty_two_elements() {
        let g = symmetry_group();
        assert_eq!(g.len(), 32);
        for x in &g {
            for y in &g {
                assert!(g.contains(&x.then(y)));
            }
        }
    }

    #[test]
    fn conjugation_and_composition() {
        let r = SymmetryElement::rep;
        assert_eq!(r(4).then(&r(1)).then(&r(4)), r(2));
        assert_eq!(r(1).then(&r(2)), r(3));
        assert_eq!(r(1).then(&r(4)), SymmetryElement::rpl(5));
    }

    #[test]
    fn tables_agree() {
        let sys = StructureSystem::shipped();
        for row in 0..4 {
            assert!(matches_sweep_row(&sys, row).unwrap(), "sweep row {row}");
        }
        for k in 1..=5 {
            assert!(matches_rpl_row(k), "rpl {k}");
        }
    }

    #[test]
    fn whole_group_preserves_rules_and_curvature() {
        let sys = StructureSystem::shipped();
        for g in symmetry_group() {
            assert!(g.preserves_rules(&sys).unwrap(), "{g:?}");
            assert!(preserves_curvature_table(&g), "{g:?}");
        }
    }

    #[test]
    fn curvature_table_symmetries() {
        let r = curvature_table();
        assert_eq!(r[0][1][2][3], (0, 0));
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let x = r[a][b][c][d];
                        let y = r[b][c][a][d];
                        let z = r[c][a][b][d];
                        assert_eq!((x.0 + y.0 + z.0, x.1 + y.1 + z.1), (0, 0));
                    }
                }
            }
        }
    }

    #[test]
    fn group_permutes_derived_equations() {
        let sys = StructureSystem::shipped();
        let nel = super::super::derive_nel(&sys).unwrap();
        let sol = super::super::solve_sol(&nel, sys.ctx()).unwrap();
        let set = super::super::derive_36(&sys, &sol).unwrap();
        for g in symmetry_group() {
            let p = g.permutes(&set).unwrap().unwrap_or_else(|| panic!("{g:?}"));
            assert_eq!(p.len(), 36);
        }
    }

    #[test]
    fn rotations() {
        let r = rotation_invariance();
        assert!(r.passed(), "{r:?}");
    }
}
