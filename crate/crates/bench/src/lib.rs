//! Shared inputs for the benchmarks.

use std::collections::HashMap;

use asdk_core::algebra::{ratio, Poly};
use asdk_core::derive::connection::{derive_nel, solve_sol};
use asdk_core::{LocFrac, StructureSystem, Var};

/// `(λ + σ + λ₁ + … + λ₄)^degree`, a dense polynomial in six variables.
pub fn dense_poly(degree: u32) -> Poly {
    let base = ["lambda", "sigma", "lambda1", "lambda2", "lambda3", "lambda4"]
        .iter()
        .enumerate()
        .fold(Poly::zero(), |acc, (k, n)| &acc + &Poly::named(n).scale(&ratio(k as i64 + 1, 2)));
    (0..degree).fold(Poly::one(), |acc, _| &acc * &base)
}

/// `λ⁴ − 5λ²σ² + 12σ⁴`.
pub fn quartic() -> Poly {
    let l2 = &Poly::named("lambda") * &Poly::named("lambda");
    let s2 = &Poly::named("sigma") * &Poly::named("sigma");
    &(&(&l2 * &l2) - &(&l2 * &s2).scale(&ratio(5, 1))) + &(&s2 * &s2).scale(&ratio(12, 1))
}

/// The shipped system with its solved connection components.
pub fn solved() -> (StructureSystem, HashMap<Var, LocFrac>) {
    let sys = StructureSystem::shipped();
    let nel = derive_nel(&sys).expect("shipped system derives");
    let sol = solve_sol(&nel, sys.ctx()).expect("shipped system solves");
    (sys, sol)
}
