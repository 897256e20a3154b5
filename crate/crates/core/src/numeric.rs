//! Floating-point oracle at single points.
//!
//! Tensors are dense arrays over an orthonormal frame. A 2-form is an
//! antisymmetric 4×4 matrix `φᵢⱼ`, and an operator `T` acts on it by half
//! contraction, `(Tφ)ᵢⱼ = ½ Tᵢⱼₖₗ φₖₗ`; with this factor the Weyl tensor has
//! eigenvalues `0, 2σ, −2σ` on `ζ, η, θ`. The orientation is the one for
//! which `ω` is self-dual and `ζ, η, θ` are anti-self-dual.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::derive::symmetry_group;

pub type Tensor4 = [[[[f64; 4]; 4]; 4]; 4];
pub type Mat4 = [[f64; 4]; 4];

/// Default gate for every sweep.
pub const TOLERANCE: f64 = 1e-12;

const ZERO4: Tensor4 = [[[[0.0; 4]; 4]; 4]; 4];

/// The curvature at one point, with the frame objects it is read against.
#[derive(Clone, Debug)]
pub struct CurvaturePoint {
    pub lambda: f64,
    pub sigma: f64,
    pub r: Tensor4,
    pub g: Mat4,
    /// `J[k][i]` is the `e_k` component of `J e_i`.
    pub j: Mat4,
    pub omega: Mat4,
    pub rho: Mat4,
    pub zeta: Mat4,
    pub eta: Mat4,
    pub theta: Mat4,
}

/// `Σ c · e^a ∧ e^b` as an antisymmetric matrix (zero based indices).
fn two_form(terms: &[(f64, usize, usize)]) -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for &(c, a, b) in terms {
        m[a][b] += c;
        m[b][a] -= c;
    }
    m
}

fn identity() -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

/// Builds `R` from its nonzero list, closed under the pair symmetries.
pub fn build_curvature(lambda: f64, sigma: f64) -> CurvaturePoint {
    let (l, s) = (lambda, sigma);
    let list = [
        ([0, 1, 0, 1], -l),
        ([0, 2, 0, 2], s),
        ([1, 3, 1, 3], s),
        ([0, 3, 1, 2], s),
        ([0, 3, 0, 3], -s),
        ([1, 2, 1, 2], -s),
        ([0, 2, 3, 1], -s),
        ([2, 3, 2, 3], l),
    ];
    let mut r = ZERO4;
    for ([a, b, c, d], v) in list {
        for (p, q, w) in [((a, b), (c, d), v), ((b, a), (c, d), -v), ((a, b), (d, c), -v), ((b, a), (d, c), v)] {
            r[p.0][p.1][q.0][q.1] = w;
            r[q.0][q.1][p.0][p.1] = w;
        }
    }
    let mut j = [[0.0; 4]; 4];
    j[1][0] = 1.0;
    j[0][1] = -1.0;
    j[3][2] = 1.0;
    j[2][3] = -1.0;
    CurvaturePoint {
        lambda,
        sigma,
        r,
        g: identity(),
        j,
        omega: two_form(&[(1.0, 0, 1), (1.0, 2, 3)]),
        rho: two_form(&[(-l, 0, 1), (l, 2, 3)]),
        zeta: two_form(&[(-1.0, 0, 1), (1.0, 2, 3)]),
        eta: two_form(&[(-1.0, 0, 2), (1.0, 3, 1)]),
        theta: two_form(&[(-1.0, 0, 3), (1.0, 1, 2)]),
    }
}

fn max_abs4(t: &Tensor4) -> f64 {
    t.iter().flatten().flatten().flatten().fold(0.0, |m, x| m.max(x.abs()))
}

fn max_abs(m: &Mat4) -> f64 {
    m.iter().flatten().fold(0.0, |a, x| a.max(x.abs()))
}

fn sub(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = *a;
    for i in 0..4 {
        for k in 0..4 {
            out[i][k] -= b[i][k];
        }
    }
    out
}

fn scale(a: &Mat4, c: f64) -> Mat4 {
    a.map(|row| row.map(|x| c * x))
}

/// Largest violation of pair skewness, pair exchange, the first Bianchi
/// identity and `R(J·, J·, ·, ·) = R`.
pub fn symmetry_defect(pt: &CurvaturePoint) -> f64 {
    let r = &pt.r;
    let mut worst: f64 = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let x = r[a][b][c][d];
                    worst = worst
                        .max((x + r[b][a][c][d]).abs())
                        .max((x + r[a][b][d][c]).abs())
                        .max((x - r[c][d][a][b]).abs())
                        .max((x + r[b][c][a][d] + r[c][a][b][d]).abs());
                    let mut jj = 0.0;
                    for p in 0..4 {
                        for q in 0..4 {
                            jj += pt.j[p][a] * pt.j[q][b] * r[p][q][c][d];
                        }
                    }
                    worst = worst.max((jj - x).abs());
                }
            }
        }
    }
    worst
}

/// Ricci tensor `rᵢⱼ = Σₚ R_{ipjp}`, Weyl tensor and scalar curvature.
pub fn ricci_weyl_scalar(pt: &CurvaturePoint) -> (Mat4, Tensor4, f64) {
    let r = &pt.r;
    let g = &pt.g;
    let mut ric = [[0.0; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            ric[i][k] = (0..4).map(|p| r[i][p][k][p]).sum();
        }
    }
    let s: f64 = (0..4).map(|i| ric[i][i]).sum();
    let n = 4.0;
    let mut w = ZERO4;
    for i in 0..4 {
        for jx in 0..4 {
            for p in 0..4 {
                for q in 0..4 {
                    let ric_part = g[i][p] * ric[jx][q] + g[jx][q] * ric[i][p] - g[jx][p] * ric[i][q] - g[i][q] * ric[jx][p];
                    let s_part = g[i][p] * g[jx][q] - g[jx][p] * g[i][q];
                    w[i][jx][p][q] = r[i][jx][p][q] - ric_part / (n - 2.0) + s * s_part / ((n - 1.0) * (n - 2.0));
                }
            }
        }
    }
    (ric, w, s)
}

/// `|R|² = Σ R_{ijkl}²`.
pub fn squared_norm(pt: &CurvaturePoint) -> f64 {
    pt.r.iter().flatten().flatten().flatten().map(|x| x * x).sum()
}

/// `max |Řᵢⱼ − (|R|²/4) gᵢⱼ|` with `Řᵢⱼ = R_{ipqr} R_{jpqr}`, and the
/// multiple `|R|²/4`.
pub fn weakly_einstein_residual(pt: &CurvaturePoint) -> (f64, f64) {
    let r = &pt.r;
    let mut check = [[0.0; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            let mut acc = 0.0;
            for p in 0..4 {
                for q in 0..4 {
                    for t in 0..4 {
                        acc += r[i][p][q][t] * r[k][p][q][t];
                    }
                }
            }
            check[i][k] = acc;
        }
    }
    let multiple = squared_norm(pt) / 4.0;
    (max_abs(&sub(&check, &scale(&pt.g, multiple))), multiple)
}

/// `(Tφ)ᵢⱼ = ½ Tᵢⱼₖₗ φₖₗ`.
pub fn act(t: &Tensor4, phi: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            let mut acc = 0.0;
            for p in 0..4 {
                for q in 0..4 {
                    acc += t[i][k][p][q] * phi[p][q];
                }
            }
            out[i][k] = 0.5 * acc;
        }
    }
    out
}

/// `⟨φ, ψ⟩ = ½ Σ φᵢⱼ ψᵢⱼ`.
pub fn inner(phi: &Mat4, psi: &Mat4) -> f64 {
    0.5 * phi.iter().flatten().zip(psi.iter().flatten()).map(|(a, b)| a * b).sum::<f64>()
}

/// Hodge star on 2-forms for the orientation `e¹∧e²∧e³∧e⁴`.
pub fn hodge(phi: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let mut acc = 0.0;
            for c in 0..4 {
                for d in 0..4 {
                    acc += levi_civita([a, b, c, d]) * phi[c][d];
                }
            }
            out[a][b] = 0.5 * acc;
        }
    }
    out
}

fn levi_civita(idx: [usize; 4]) -> f64 {
    let mut sign = 1.0;
    let mut v = idx;
    for i in 0..4 {
        for k in i + 1..4 {
            if v[i] == v[k] {
                return 0.0;
            }
            if v[i] > v[k] {
                v.swap(i, k);
                sign = -sign;
            }
        }
    }
    sign
}

/// Action of the Weyl tensor on the distinguished 2-forms.
#[derive(Clone, Debug, Serialize)]
pub struct WeylEigen {
    /// Rayleigh quotients on `ζ, η, θ`.
    pub eigenvalues: [f64; 3],
    /// `max |Wφ − cφ|` for `(ζ, 0), (η, 2σ), (θ, −2σ)`.
    pub eigen_residual: f64,
    /// `max |Wρ|`.
    pub w_rho: f64,
    /// `max |Wφ|` over the self-dual basis.
    pub w_plus: f64,
    /// Largest deviation of `ζ, η, θ` from anti-self-duality and of `ω`
    /// from self-duality.
    pub orientation_defect: f64,
}

pub fn weyl_on_2forms(pt: &CurvaturePoint) -> WeylEigen {
    let (_, w, _) = ricci_weyl_scalar(pt);
    let s = pt.sigma;
    let forms = [(&pt.zeta, 0.0), (&pt.eta, 2.0 * s), (&pt.theta, -2.0 * s)];
    let mut eigenvalues = [0.0; 3];
    let mut eigen_residual: f64 = 0.0;
    let mut orientation_defect: f64 = max_abs(&sub(&hodge(&pt.omega), &pt.omega));
    for (k, (phi, c)) in forms.iter().enumerate() {
        let wphi = act(&w, phi);
        eigenvalues[k] = inner(&wphi, phi) / inner(phi, phi);
        eigen_residual = eigen_residual.max(max_abs(&sub(&wphi, &scale(phi, *c))));
        orientation_defect = orientation_defect.max(max_abs(&sub(&hodge(phi), &scale(phi, -1.0))));
    }
    let self_dual = [
        two_form(&[(1.0, 0, 1), (1.0, 2, 3)]),
        two_form(&[(1.0, 0, 2), (1.0, 3, 1)]),
        two_form(&[(1.0, 0, 3), (1.0, 1, 2)]),
    ];
    let mut w_plus: f64 = 0.0;
    for phi in &self_dual {
        orientation_defect = orientation_defect.max(max_abs(&sub(&hodge(phi), phi)));
        w_plus = w_plus.max(max_abs(&act(&w, phi)));
    }
    WeylEigen {
        eigenvalues,
        eigen_residual,
        w_rho: max_abs(&act(&w, &pt.rho)),
        w_plus,
        orientation_defect,
    }
}

/// `ρ(X, Y) = r(JX, Y)` against the displayed Ricci form.
pub fn ricci_form_defect(pt: &CurvaturePoint) -> f64 {
    let (ric, _, _) = ricci_weyl_scalar(pt);
    let mut rho = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            rho[a][b] = (0..4).map(|k| pt.j[k][a] * ric[k][b]).sum();
        }
    }
    max_abs(&sub(&rho, &pt.rho))
}

/// `R'_{abcd} = Σ m_{ai} m_{bj} m_{ck} m_{dl} R_{ijkl}` for the frame
/// `e'_a = Σ m_{ai} e_i`.
pub fn transform(r: &Tensor4, m: &Mat4) -> Tensor4 {
    // Contract one slot at a time.
    let mut cur = *r;
    for slot in 0..4 {
        let mut next = ZERO4;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let idx = [a, b, c, d];
                        let mut acc = 0.0;
                        for i in 0..4 {
                            let mut src = idx;
                            src[slot] = i;
                            acc += m[idx[slot]][i] * cur[src[0]][src[1]][src[2]][src[3]];
                        }
                        next[a][b][c][d] = acc;
                    }
                }
            }
        }
        cur = next;
    }
    cur
}

/// Equal rotation by `t` in the `(e₁, e₂)` and `(e₃, e₄)` planes.
pub fn rotation(t: f64) -> Mat4 {
    let (c, s) = (t.cos(), t.sin());
    [[c, s, 0.0, 0.0], [-s, c, 0.0, 0.0], [0.0, 0.0, c, s], [0.0, 0.0, -s, c]]
}

/// Largest deviation of the transformed tensor from the table, over the
/// 32 frame symmetries (at their transformed scalars) and the given
/// rotation angles (at unchanged scalars).
pub fn symmetry_orbit_check(pt: &CurvaturePoint, angles: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for g in symmetry_group() {
        let mut m = [[0.0; 4]; 4];
        for a in 0..4 {
            m[a][g.perm[a]] = g.signs[a] as f64;
        }
        let got = transform(&pt.r, &m);
        let want = build_curvature(g.s_lambda as f64 * pt.lambda, g.s_sigma as f64 * pt.sigma).r;
        worst = worst.max(diff4(&got, &want));
    }
    for &t in angles {
        worst = worst.max(diff4(&transform(&pt.r, &rotation(t)), &pt.r));
    }
    worst
}

fn diff4(a: &Tensor4, b: &Tensor4) -> f64 {
    let mut d = ZERO4;
    for i in 0..4 {
        for k in 0..4 {
            for p in 0..4 {
                for q in 0..4 {
                    d[i][k][p][q] = a[i][k][p][q] - b[i][k][p][q];
                }
            }
        }
    }
    max_abs4(&d)
}

/// All pointwise residuals at one point.
#[derive(Clone, Debug, Serialize)]
pub struct PointResiduals {
    pub lambda: f64,
    pub sigma: f64,
    pub symmetry: f64,
    pub ricci: f64,
    pub scalar: f64,
    pub weyl_table: f64,
    pub ricci_form: f64,
    pub weakly_einstein: f64,
    pub norm: f64,
    pub eigen: f64,
    pub w_rho: f64,
    pub w_plus: f64,
    pub orientation: f64,
    pub orbit: f64,
}

impl PointResiduals {
    pub fn named(&self) -> [(&'static str, f64); 12] {
        [
            ("curvature_symmetries", self.symmetry),
            ("ricci_spectrum", self.ricci),
            ("scalar_curvature", self.scalar),
            ("weyl_table", self.weyl_table),
            ("ricci_form", self.ricci_form),
            ("weakly_einstein", self.weakly_einstein),
            ("squared_norm", self.norm),
            ("weyl_eigenvalues", self.eigen),
            ("w_rho", self.w_rho),
            ("w_plus", self.w_plus),
            ("orientation", self.orientation),
            ("symmetry_orbit", self.orbit),
        ]
    }

    pub fn worst(&self) -> f64 {
        self.named().iter().fold(0.0, |m, (_, x)| m.max(*x))
    }
}

pub fn check_point(lambda: f64, sigma: f64, angles: &[f64]) -> PointResiduals {
    let pt = build_curvature(lambda, sigma);
    let (ric, w, s) = ricci_weyl_scalar(&pt);
    let mut want_ric = [[0.0; 4]; 4];
    for (i, v) in [-lambda, -lambda, lambda, lambda].into_iter().enumerate() {
        want_ric[i][i] = v;
    }
    // With s = 0 and Ricci as above, W is the table at λ = 0.
    let want_w = build_curvature(0.0, sigma).r;
    let (we, _) = weakly_einstein_residual(&pt);
    let eig = weyl_on_2forms(&pt);
    PointResiduals {
        lambda,
        sigma,
        symmetry: symmetry_defect(&pt),
        ricci: max_abs(&sub(&ric, &want_ric)),
        scalar: s.abs(),
        weyl_table: diff4(&w, &want_w),
        ricci_form: ricci_form_defect(&pt),
        weakly_einstein: we,
        norm: (squared_norm(&pt) - (8.0 * lambda * lambda + 32.0 * sigma * sigma)).abs(),
        eigen: eig.eigen_residual,
        w_rho: eig.w_rho,
        w_plus: eig.w_plus,
        orientation: eig.orientation_defect,
        orbit: symmetry_orbit_check(&pt, angles),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepCheck {
    pub name: String,
    pub max_residual: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub points: usize,
    pub tolerance: f64,
    pub checks: Vec<SweepCheck>,
    pub passed: bool,
}

/// Checks `points` random `(λ, σ) ∈ [−2, 2]²`, each against 16 random
/// rotation angles and angle 0.
pub fn sweep(seed: u64, points: usize, tol: f64) -> SweepReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [0.0f64; 12];
    let mut names = [""; 12];
    for _ in 0..points {
        let l = rng.gen_range(-2.0..=2.0);
        let s = rng.gen_range(-2.0..=2.0);
        let mut angles = vec![0.0];
        angles.extend((0..16).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)));
        let res = check_point(l, s, &angles);
        for (k, (name, v)) in res.named().into_iter().enumerate() {
            names[k] = name;
            worst[k] = worst[k].max(v);
        }
    }
    let checks: Vec<SweepCheck> = names
        .iter()
        .zip(worst)
        .map(|(n, w)| SweepCheck {
            name: n.to_string(),
            max_residual: w,
            passed: w < tol,
        })
        .collect();
    SweepReport {
        seed,
        points,
        tolerance: tol,
        passed: points > 0 && checks.iter().all(|c| c.passed),
        checks,
    }
}

/// `s = Σᵢ Σₚ R_{ipip}` in exact `(λ, σ)` coefficients.
pub fn exact_scalar_curvature() -> (i64, i64) {
    let t = crate::derive::symmetry::curvature_table();
    let mut s = (0, 0);
    for i in 0..4 {
        for p in 0..4 {
            s.0 += t[i][p][i][p].0;
            s.1 += t[i][p][i][p].1;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force `Σ R_{ijkl}²` over all 256 index tuples.
    fn brute_norm(r: &Tensor4) -> f64 {
        let mut acc = 0.0;
        for t in 0..256 {
            let (a, b, c, d) = (t & 3, (t >> 2) & 3, (t >> 4) & 3, (t >> 6) & 3);
            acc += r[a][b][c][d] * r[a][b][c][d];
        }
        acc
    }

    #[test]
    fn listed_components() {
        let pt = build_curvature(1.0, 1.0);
        assert_eq!(pt.r[0][1][0][1], -1.0);
        assert_eq!(pt.r[2][3][2][3], 1.0);
        assert_eq!(pt.r[0][2][0][2], 1.0);
        assert_eq!(pt.r[0][3][1][2], 1.0);
        assert_eq!(max_abs4(&build_curvature(0.0, 0.0).r), 0.0);
        assert!(symmetry_defect(&build_curvature(0.7, -1.3)) < 1e-14);
    }

    #[test]
    fn norm_at_two_three() {
        let pt = build_curvature(2.0, 3.0);
        assert_eq!(brute_norm(&pt.r), 320.0);
        assert_eq!(squared_norm(&pt), 320.0);
    }

    #[test]
    fn ricci_and_weyl() {
        let pt = build_curvature(1.0, 1.0);
        let (ric, w, s) = ricci_weyl_scalar(&pt);
        assert_eq!(ric[0][0], -1.0);
        assert_eq!(s, 0.0);
        assert_eq!(w[0][2][0][2], 1.0);
        assert_eq!(w[0][3][0][3], -w[0][2][0][2]);
    }

    #[test]
    fn weakly_einstein_multiple() {
        let (res, mult) = weakly_einstein_residual(&build_curvature(1.0, 1.0));
        assert!(res < 1e-12);
        assert_eq!(mult, 10.0);
        assert!(weakly_einstein_residual(&build_curvature(0.0, 1.7)).0 < 1e-12);
    }

    #[test]
    fn weyl_eigenvalues() {
        let e = weyl_on_2forms(&build_curvature(1.0, 1.0));
        assert_eq!(e.eigenvalues, [0.0, 2.0, -2.0]);
        assert!(e.w_rho < 1e-12 && e.w_plus < 1e-12 && e.orientation_defect == 0.0);
    }

    #[test]
    fn orbit_and_rotations() {
        let pt = build_curvature(0.3, 1.1);
        assert!(symmetry_orbit_check(&pt, &[0.0, 0.4, 2.2]) < 1e-12);
        assert_eq!(diff4(&transform(&pt.r, &rotation(0.0)), &pt.r), 0.0);
        // A rotation in one plane only breaks the table.
        let mut m = identity();
        m[0][0] = 0.6;
        m[0][1] = 0.8;
        m[1][0] = -0.8;
        m[1][1] = 0.6;
        assert!(diff4(&transform(&pt.r, &m), &pt.r) > 0.1);
    }

    #[test]
    fn sweep_is_seeded() {
        let a = sweep(7, 20, TOLERANCE);
        let b = sweep(7, 20, TOLERANCE);
        assert!(a.passed, "{a:?}");
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
