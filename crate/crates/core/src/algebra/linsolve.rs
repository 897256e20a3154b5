//! Exact linear algebra over the localized ring.

use num_traits::{One, Zero};

use super::locfrac::{mono_poly, AtomMono, AtomSet, LocFrac};
use super::poly::{Poly, Rational};
use super::AlgebraError;

/// Multiplies a row by the lcm of its denominators, returning polynomials.
fn clear_row(row: &[LocFrac]) -> Vec<Poly> {
    let mut l = AtomMono::new();
    for x in row {
        for &(a, e) in x.den() {
            match l.binary_search_by_key(&a, |p| p.0) {
                Ok(i) => l[i].1 = l[i].1.max(e),
                Err(i) => l.insert(i, (a, e)),
            }
        }
    }
    let lp = mono_poly(&l);
    row.iter()
        .map(|x| {
            let scaled = x.mul_poly(&lp);
            scaled
                .as_poly()
                .cloned()
                .expect("lcm clears every denominator")
        })
        .collect()
}

/// Solves a square system `matrix · x = rhs` whose determinant is a unit
/// over `atoms`.
///
/// Elimination is fraction-free (Bareiss), so every intermediate entry is a
/// polynomial and every division is exact.
pub fn linear_solve(
    matrix: &[Vec<LocFrac>],
    rhs: &[LocFrac],
    atoms: &AtomSet,
) -> Result<Vec<LocFrac>, AlgebraError> {
    let n = matrix.len();
    if rhs.len() != n {
        return Err(AlgebraError::DimensionMismatch {
            expected: n,
            found: rhs.len(),
        });
    }
    if let Some(bad) = matrix.iter().find(|r| r.len() != n) {
        return Err(AlgebraError::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a: Vec<Vec<Poly>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut full = row.clone();
            full.push(b.clone());
            clear_row(&full)
        })
        .collect();

    let mut sign = 1i64;
    let mut prev = Poly::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Err(AlgebraError::Singular { det: Poly::zero() }),
            }
        }
        for i in k + 1..n {
            for j in k + 1..=n {
                let t = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = t.div_exact(&prev).expect("Bareiss step divides exactly");
            }
            a[i][k] = Poly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = if sign < 0 {
        -&a[n - 1][n - 1]
    } else {
        a[n - 1][n - 1].clone()
    };
    let (c, mono) = atoms.factor_unit(&det).map_err(|e| match e {
        AlgebraError::NonUnit { factor } => AlgebraError::NonUnitDeterminant {
            det: det.clone(),
            factor,
        },
        other => other,
    })?;

    // y = det · x is polynomial; a_ii · y_i = det · b_i − Σ_{j>i} a_ij · y_j.
    let mut y = vec![Poly::zero(); n];
    for i in (0..n).rev() {
        let mut acc = &det * &a[i][n];
        for j in i + 1..n {
            acc -= &(&a[i][j] * &y[j]);
        }
        y[i] = acc
            .div_exact(&a[i][i])
            .expect("back substitution divides exactly");
    }
    let inv = c.recip();
    Ok(y.into_iter()
        .map(|yi| LocFrac::new(yi.scale(&inv), mono.clone()))
        .collect())
}

/// Applies `matrix` to `x`.
pub fn mat_vec(matrix: &[Vec<LocFrac>], x: &[LocFrac]) -> Vec<LocFrac> {
    matrix
        .iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(LocFrac::zero(), |acc, (a, b)| &acc + &(a * b))
        })
        .collect()
}

/// Finds one solution of a possibly rectangular system, using only unit
/// pivots so that every step stays inside the localized ring. Free unknowns
/// are set to zero. Rows that reduce to `0 = r` with `r ≠ 0` are reported.
pub fn solve_unit_pivot(
    matrix: &[Vec<LocFrac>],
    rhs: &[LocFrac],
    atoms: &AtomSet,
) -> Result<Vec<LocFrac>, AlgebraError> {
    let m = matrix.len();
    if rhs.len() != m {
        return Err(AlgebraError::DimensionMismatch {
            expected: m,
            found: rhs.len(),
        });
    }
    let n = matrix.first().map(|r| r.len()).unwrap_or(0);
    let mut a: Vec<Vec<LocFrac>> = matrix.to_vec();
    let mut b: Vec<LocFrac> = rhs.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut used_col = vec![false; n];
    let mut row = 0;
    while row < m {
        // Prefer the sparsest unit pivot to limit fill-in.
        let mut best: Option<(usize, usize, usize)> = None;
        let mut nonunit: Option<Poly> = None;
        for i in row..m {
            for j in 0..n {
                if used_col[j] || a[i][j].is_zero() {
                    continue;
                }
                let size = a[i][j].num().len();
                if best.map(|b| size >= b.2).unwrap_or(false) {
                    continue;
                }
                match atoms.factor_unit(a[i][j].num()) {
                    Ok(_) => best = Some((i, j, size)),
                    Err(AlgebraError::NonUnit { factor }) => {
                        nonunit.get_or_insert(factor);
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        let Some((pi, pj, _)) = best else {
            // Leftover rows with zero right-hand side are satisfied by
            // setting the remaining unknowns to zero.
            if b[row..].iter().all(|x| x.is_zero()) {
                break;
            }
            if let Some(factor) = nonunit {
                return Err(AlgebraError::NonUnitPivot { factor });
            }
            break;
        };
        a.swap(row, pi);
        b.swap(row, pi);
        let inv = a[row][pj].recip(atoms)?;
        for j in 0..n {
            a[row][j] = &a[row][j] * &inv;
        }
        b[row] = &b[row] * &inv;
        for i in 0..m {
            if i == row || a[i][pj].is_zero() {
                continue;
            }
            let f = a[i][pj].clone();
            for j in 0..n {
                if !a[row][j].is_zero() {
                    a[i][j] = &a[i][j] - &(&f * &a[row][j]);
                }
            }
            b[i] = &b[i] - &(&f * &b[row]);
        }
        used_col[pj] = true;
        pivots.push((row, pj));
        row += 1;
    }
    for i in pivots.len()..m {
        if !b[i].is_zero() {
            return Err(AlgebraError::Inconsistent {
                row: i,
                residual: b[i].clone(),
            });
        }
    }
    let mut x = vec![LocFrac::zero(); n];
    for (r, c) in pivots {
        x[c] = b[r].clone();
    }
    Ok(x)
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn rank(matrix: &[Vec<Rational>]) -> usize {
    let mut a = matrix.to_vec();
    let m = a.len();
    let n = a.first().map(|r| r.len()).unwrap_or(0);
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Rational::one() / &a[r][c];
        for i in r + 1..m {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[r][j];
                a[i][j] -= t;
            }
        }
        r += 1;
        if r == m {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::super::{atoms, poly::rat};
    use super::*;

    fn lf(s: &str) -> LocFrac {
        LocFrac::named(s)
    }

    #[test]
    fn identity_returns_rhs() {
        let set = atoms::standard();
        let id = vec![
            vec![LocFrac::one(), LocFrac::zero()],
            vec![LocFrac::zero(), LocFrac::one()],
        ];
        let r = vec![lf("lambda1"), lf("sigma2")];
        assert_eq!(linear_solve(&id, &r, &set).unwrap(), r);
    }

    #[test]
    fn rank_deficient_is_singular() {
        let set = atoms::standard();
        let m = vec![
            vec![lf("lambda"), lf("sigma")],
            vec![lf("lambda"), lf("sigma")],
        ];
        let r = vec![LocFrac::one(), LocFrac::zero()];
        match linear_solve(&m, &r, &set) {
            Err(AlgebraError::Singular { det }) => assert!(det.is_zero()),
            other => panic!("expected singular, got {other:?}"),
        }
    }

    #[test]
    fn non_unit_determinant_reports_factor() {
        let set = atoms::standard();
        let m = vec![
            vec![lf("lambda"), lf("sigma")],
            vec![lf("sigma"), lf("lambda")],
        ];
        let r = vec![LocFrac::one(), LocFrac::zero()];
        match linear_solve(&m, &r, &set) {
            Err(AlgebraError::NonUnitDeterminant { factor, .. }) => {
                let l = Poly::named("lambda");
                let s = Poly::named("sigma");
                assert_eq!(factor, &(&l * &l) - &(&s * &s));
            }
            other => panic!("expected non-unit, got {other:?}"),
        }
    }

    #[test]
    fn overdetermined_consistent_and_not() {
        let set = atoms::standard();
        let m = vec![
            vec![LocFrac::one(), LocFrac::zero()],
            vec![LocFrac::zero(), lf("lambda")],
            vec![LocFrac::one(), lf("lambda")],
        ];
        let ok = vec![lf("sigma"), LocFrac::int(2), &lf("sigma") + &LocFrac::int(2)];
        let x = solve_unit_pivot(&m, &ok, &set).unwrap();
        assert_eq!(mat_vec(&m, &x), ok);
        let bad = vec![lf("sigma"), LocFrac::int(2), lf("sigma")];
        assert!(matches!(
            solve_unit_pivot(&m, &bad, &set),
            Err(AlgebraError::Inconsistent { .. })
        ));
    }

    #[test]
    fn rational_rank() {
        let m = vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(2), rat(4), rat(6)],
            vec![rat(0), rat(1), rat(1)],
        ];
        assert_eq!(rank(&m), 2);
    }
}
