//! Exact scalar arithmetic: rationals, sparse polynomials, fractions with
//! atom-monomial denominators, and linear solving over that ring.

mod linsolve;
mod locfrac;
mod poly;
mod registry;

pub use linsolve::{linear_solve, mat_vec, rank, solve_unit_pivot};
pub use locfrac::{substitute_poly, AtomMono, AtomSet, LocFrac};
pub use poly::{rat, ratio, Monomial, Poly, Rational};
pub use registry::{Atom, Var};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    ZeroDivisor,
    #[error("not a unit: leftover factor {factor}")]
    NonUnit { factor: Poly },
    #[error("singular matrix: determinant {det}")]
    Singular { det: Poly },
    #[error("determinant {det} is not a unit: factor {factor}")]
    NonUnitDeterminant { det: Poly, factor: Poly },
    #[error("no unit pivot available: factor {factor}")]
    NonUnitPivot { factor: Poly },
    #[error("inconsistent system: row {row} reduces to 0 = {residual}")]
    Inconsistent { row: usize, residual: LocFrac },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("atom {atom} is not declared nonzero")]
    UnregisteredAtom { atom: String },
    #[error("substituting into atom {atom} leaves non-unit factor {factor}")]
    SubstitutedDenominator { atom: String, factor: Poly },
}

/// Divides `a` by `atom^power`, refusing atoms outside `declared`.
pub fn atom_divide(
    a: &LocFrac,
    atom: &Poly,
    power: u32,
    declared: &AtomSet,
) -> Result<LocFrac, AlgebraError> {
    match Atom::by_poly(atom).filter(|x| declared.contains(*x)) {
        Some(x) => Ok(a.div_atom(x, power)),
        None => Err(AlgebraError::UnregisteredAtom {
            atom: atom.to_string(),
        }),
    }
}

/// The standard atoms λ, σ, μ₊ = 2σ+λ, μ₋ = 2σ−λ and λ₃.
pub mod atoms {
    use super::{Atom, AtomSet, LocFrac, Poly};

    pub fn lambda() -> Atom {
        Atom::register("lambda", Poly::named("lambda"))
    }

    pub fn sigma() -> Atom {
        Atom::register("sigma", Poly::named("sigma"))
    }

    pub fn mu_plus() -> Atom {
        Atom::register("mu+", mu_plus_poly())
    }

    pub fn mu_minus() -> Atom {
        Atom::register("mu-", mu_minus_poly())
    }

    pub fn lambda3() -> Atom {
        Atom::register("lambda3", Poly::named("lambda3"))
    }

    pub fn mu_plus_poly() -> Poly {
        &Poly::named("sigma").scale(&super::rat(2)) + &Poly::named("lambda")
    }

    pub fn mu_minus_poly() -> Poly {
        &Poly::named("sigma").scale(&super::rat(2)) - &Poly::named("lambda")
    }

    /// μ* = μ₊μ₋ = 4σ² − λ².
    pub fn mu_star_poly() -> Poly {
        &mu_plus_poly() * &mu_minus_poly()
    }

    pub fn mu_plus_frac() -> LocFrac {
        LocFrac::from_poly(mu_plus_poly())
    }

    pub fn mu_minus_frac() -> LocFrac {
        LocFrac::from_poly(mu_minus_poly())
    }

    pub fn mu_star_frac() -> LocFrac {
        LocFrac::from_poly(mu_star_poly())
    }

    /// λ, σ, μ₊, μ₋: the atoms valid throughout.
    pub fn standard() -> AtomSet {
        AtomSet::new([lambda(), sigma(), mu_plus(), mu_minus()])
    }

    /// The standard atoms plus λ₃, used once λ₃ > 0 is assumed.
    pub fn with_lambda3() -> AtomSet {
        standard().with(lambda3())
    }
}
