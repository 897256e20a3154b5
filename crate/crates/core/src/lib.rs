//! Exact verification engine for a Kähler-surface exterior differential
//! system: polynomial algebra, jets, forms, structure equations, derived
//! equation sets, elimination pipelines and a floating-point oracle.

// Tensor and matrix code reads best with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod jets;
pub mod forms;
pub mod expr;
pub mod structure;
pub mod derive;
pub mod cases;
pub mod numeric;
pub mod report;
pub mod suites;

pub use algebra::{Atom, AtomSet, LocFrac, Poly, Rational, Var};
pub use jets::JetContext;
pub use report::{Check, Report, Status};
pub use structure::StructureSystem;
pub use suites::Options;
