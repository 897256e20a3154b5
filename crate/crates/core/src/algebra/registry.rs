//! Process-wide, append-only registries for indeterminates and nonzero atoms.
//!
//! Every [`Var`] is an index into a global name table, so exponent vectors of
//! different polynomials are always comparable. The table only grows; values
//! holding a `Var` stay valid for the lifetime of the process.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use once_cell::sync::Lazy;
use parking_lot::RwLock;

use super::poly::Poly;

#[derive(Default)]
struct VarTable {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

static VARS: Lazy<RwLock<VarTable>> = Lazy::new(|| RwLock::new(VarTable::default()));

/// An indeterminate of the global polynomial ring.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub(crate) u32);

impl Var {
    /// Returns the variable registered under `name`, registering it if needed.
    pub fn named(name: &str) -> Var {
        if let Some(&i) = VARS.read().index.get(name) {
            return Var(i);
        }
        let mut table = VARS.write();
        if let Some(&i) = table.index.get(name) {
            return Var(i);
        }
        let i = table.names.len() as u32;
        table.names.push(name.to_string());
        table.index.insert(name.to_string(), i);
        Var(i)
    }

    /// Looks a name up without registering it.
    pub fn lookup(name: &str) -> Option<Var> {
        VARS.read().index.get(name).map(|&i| Var(i))
    }

    pub fn name(&self) -> String {
        VARS.read().names[self.0 as usize].clone()
    }

    pub fn index(&self) -> u32 {
        self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

struct AtomEntry {
    name: String,
    poly: Arc<Poly>,
    var: Option<Var>,
}

#[derive(Default)]
struct AtomTable {
    entries: Vec<AtomEntry>,
}

static ATOMS: Lazy<RwLock<AtomTable>> = Lazy::new(|| RwLock::new(AtomTable::default()));

/// A polynomial declared to be nonzero, usable as a denominator factor.
///
/// Atoms are assumed irreducible and pairwise non-associate; with that
/// assumption the reduced form of a [`LocFrac`](super::LocFrac) is unique.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(pub(crate) u32);

impl Atom {
    /// Registers `poly` under `name`, or returns the existing atom with an
    /// equal polynomial.
    pub fn register(name: &str, poly: Poly) -> Atom {
        if let Some(a) = Atom::by_poly(&poly) {
            return a;
        }
        let mut table = ATOMS.write();
        if let Some(i) = table.entries.iter().position(|e| *e.poly == poly) {
            return Atom(i as u32);
        }
        let var = single_var(&poly);
        table.entries.push(AtomEntry {
            name: name.to_string(),
            poly: Arc::new(poly),
            var,
        });
        Atom(table.entries.len() as u32 - 1)
    }

    pub fn by_name(name: &str) -> Option<Atom> {
        ATOMS
            .read()
            .entries
            .iter()
            .position(|e| e.name == name)
            .map(|i| Atom(i as u32))
    }

    /// Finds the atom whose polynomial equals `poly`.
    pub fn by_poly(poly: &Poly) -> Option<Atom> {
        ATOMS
            .read()
            .entries
            .iter()
            .position(|e| *e.poly == *poly)
            .map(|i| Atom(i as u32))
    }

    pub fn poly(&self) -> Arc<Poly> {
        ATOMS.read().entries[self.0 as usize].poly.clone()
    }

    /// The variable, when the atom is a bare indeterminate such as `lambda`.
    pub fn as_var(&self) -> Option<Var> {
        ATOMS.read().entries[self.0 as usize].var
    }

    pub fn name(&self) -> String {
        ATOMS.read().entries[self.0 as usize].name.clone()
    }

    /// All atoms registered so far, in registration order.
    pub fn all() -> Vec<Atom> {
        (0..ATOMS.read().entries.len() as u32).map(Atom).collect()
    }
}

fn single_var(poly: &Poly) -> Option<Var> {
    let (m, c) = poly.leading()?;
    if poly.len() != 1 || !num_traits::One::is_one(c) {
        return None;
    }
    let mut f = m.factors();
    match (f.next(), f.next()) {
        (Some((v, 1)), None) => Some(v),
        _ => None,
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}
