//! The twelve linear relations on the connection components and their
//! unique solution.

use std::collections::HashMap;

use serde::Serialize;

use super::{linear_parts, transcribed, unit_ratio, DeriveError, Equation, UnitFactor};
use crate::algebra::{linear_solve, LocFrac, Var};
use crate::forms::{DForm, TRIPLES};
use crate::jets::{jet, jf, JetContext};
use crate::structure::StructureSystem;

/// `L₁..L₄, F₁..F₄, G₁..G₄`, the unknowns of the linear system.
pub fn connection_unknowns() -> Vec<Var> {
    let mut out = Vec::new();
    for f in ["L", "F", "G"] {
        for i in 1..=4 {
            out.push(jet(f, &[i]));
        }
    }
    out
}

fn triple_name(names: &[&str], t: &[usize; 3]) -> String {
    t.iter().map(|&i| names[i]).collect()
}

/// Applies `d` twice to `F`, `S − L` and `S + L` through the abstract rules,
/// writes every extra 1-form in components and reads off the four
/// coefficients of each resulting 3-form.
pub fn derive_nel(sys: &StructureSystem) -> Result<Vec<Equation>, DeriveError> {
    let s = sys.form("S")?;
    let l = sys.form("L")?;
    let sources = [
        ("dd(F)", sys.form("F")?),
        ("dd(S-L)", s.sub(&l)),
        ("dd(S+L)", s.add(&l)),
    ];
    let images = sys.free_images();
    let names = sys.generator_names();
    let mut out = Vec::new();
    for (tag, z) in sources {
        let dd = sys.rules.ext_d(&sys.rules.ext_d(&z)?)?;
        let proj: DForm = dd.substitute_generators(&images);
        let c = proj.coeff4()?;
        for (t, v) in TRIPLES.iter().zip(c) {
            out.push(Equation::new(format!("{tag}.{}", triple_name(&names, t)), v));
        }
    }
    Ok(out)
}

/// One transcribed row matched against a derived relation.
#[derive(Clone, Debug, Serialize)]
pub struct NelMatch {
    pub label: String,
    pub source: String,
    /// `transcribed = factor · derived`.
    pub factor: UnitFactor,
}

/// Matches every `nel_*` transcription to a derived relation up to a unit
/// factor; each derived relation is used once.
pub fn match_nel(derived: &[Equation], ctx: &JetContext) -> Result<Vec<NelMatch>, DeriveError> {
    const ROWS: [&str; 12] = ["i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii"];
    let mut used = vec![false; derived.len()];
    let mut out = Vec::new();
    for r in ROWS {
        let label = format!("nel_{r}");
        let t = transcribed(&label, ctx)?;
        let hit = derived.iter().enumerate().find_map(|(k, d)| {
            if used[k] {
                return None;
            }
            unit_ratio(&t.value, &d.value, ctx.atoms()).map(|f| (k, f))
        });
        match hit {
            Some((k, factor)) => {
                used[k] = true;
                out.push(NelMatch {
                    label,
                    source: derived[k].label.clone(),
                    factor,
                });
            }
            None => {
                return Err(DeriveError::Mismatch(format!(
                    "{label} is not a unit multiple of any derived relation"
                )))
            }
        }
    }
    Ok(out)
}

/// Solves the twelve relations for the connection components.
pub fn solve_sol(nel: &[Equation], ctx: &JetContext) -> Result<HashMap<Var, LocFrac>, DeriveError> {
    let vars = connection_unknowns();
    let mut matrix = Vec::new();
    let mut rhs = Vec::new();
    for e in nel {
        let (row, k) = linear_parts(&e.value, &vars);
        matrix.push(row);
        rhs.push(-k);
    }
    let x = linear_solve(&matrix, &rhs, ctx.atoms())?;
    Ok(vars.into_iter().zip(x).collect())
}

/// Residuals of the derived and transcribed relations under a solution.
#[derive(Clone, Debug)]
pub struct SolReport {
    pub solution: HashMap<Var, LocFrac>,
    /// Derived relation label and its residual.
    pub back_substitution: Vec<(String, LocFrac)>,
    /// `nel_*`, `sol_*`, `inp_*` transcriptions and their residuals.
    pub transcribed: Vec<(String, LocFrac)>,
}

impl SolReport {
    pub fn check(
        solution: HashMap<Var, LocFrac>,
        nel: &[Equation],
        ctx: &JetContext,
    ) -> Result<SolReport, DeriveError> {
        let mut back = Vec::new();
        for e in nel {
            back.push((e.label.clone(), ctx.substitute(&e.value, &solution)?));
        }
        let mut tr = Vec::new();
        for r in super::transcriptions() {
            let l = r.label.as_str();
            if l.starts_with("nel_") || l.starts_with("sol_") || l.starts_with("inp_") {
                let t = transcribed(l, ctx)?;
                tr.push((r.label.clone(), ctx.substitute(&t.value, &solution)?));
            }
        }
        Ok(SolReport {
            solution,
            back_substitution: back,
            transcribed: tr,
        })
    }

    pub fn passed(&self) -> bool {
        self.back_substitution.iter().all(|x| x.1.is_zero()) && self.transcribed.iter().all(|x| x.1.is_zero())
    }

    pub fn value(&self, family: &str, i: usize) -> LocFrac {
        self.solution.get(&jet(family, &[i])).cloned().unwrap_or_else(|| jf(family, &[i]))
    }
}

/// Transverse components of `2[e₁,e₂]` and `2[e₃,e₄]`.
#[derive(Clone, Debug)]
pub struct IntegrabilityReport {
    /// `e₃, e₄` components of `2[e₁,e₂]`.
    pub e12: [LocFrac; 2],
    /// `e₁, e₂` components of `2[e₃,e₄]`.
    pub e34: [LocFrac; 2],
    /// `(component index, jet)` pairs: each transverse component is a unit
    /// multiple of the listed first derivative of λ.
    pub e12_controls: [Option<(usize, UnitFactor)>; 2],
    pub e34_controls: [Option<(usize, UnitFactor)>; 2],
}

impl IntegrabilityReport {
    /// `span(e₁,e₂)` is involutive exactly when λ₃ = λ₄ = 0, and
    /// `span(e₃,e₄)` exactly when λ₁ = λ₂ = 0.
    pub fn passed(&self) -> bool {
        let idx = |c: &[Option<(usize, UnitFactor)>; 2]| -> Vec<usize> {
            let mut v: Vec<usize> = c.iter().filter_map(|x| x.as_ref().map(|y| y.0)).collect();
            v.sort();
            v
        };
        idx(&self.e12_controls) == [3, 4] && idx(&self.e34_controls) == [1, 2]
    }
}

pub fn integrability_criterion(
    sys: &StructureSystem,
    sol: &HashMap<Var, LocFrac>,
) -> Result<IntegrabilityReport, DeriveError> {
    let frame = sys.frame_rules(&sys.images_with(sol)?)?;
    let b12 = StructureSystem::lie_bracket(&frame, 0, 1)?;
    let b34 = StructureSystem::lie_bracket(&frame, 2, 3)?;
    let two = LocFrac::int(2);
    let e12 = [&two * &b12[2], &two * &b12[3]];
    let e34 = [&two * &b34[0], &two * &b34[1]];
    let atoms = sys.ctx().atoms();
    let control = |c: &LocFrac| {
        (1..=4).find_map(|i| unit_ratio(c, &jf("lambda", &[i]), atoms).map(|f| (i, f)))
    };
    Ok(IntegrabilityReport {
        e12_controls: [control(&e12[0]), control(&e12[1])],
        e34_controls: [control(&e34[0]), control(&e34[1])],
        e12,
        e34,
    })
}
