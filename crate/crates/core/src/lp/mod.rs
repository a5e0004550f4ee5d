//! Exact feasibility of linear systems `A x = b` with sign constraints, and
//! the systems that characterize indistinguishability.

mod simplex;
mod systems;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use systems::{
    build_doubly_stochastic_commutant, build_lk, build_markov_commutant, is_partial_isomorphism,
    lk_level_matrix, markov_solution_matrix, permutation_matrix, step_down, LkSystem, MarkovSystem,
    OperatorFamily, PartialMap,
};

/// Equality constraints over named variables, each optionally nonnegative.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    names: Vec<String>,
    nonnegative: Vec<bool>,
    rows: Vec<(Vec<(usize, Rational)>, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            Feasibility::Feasible(x) => Some(x),
            Feasibility::Infeasible => None,
        }
    }
}

impl LinearSystem {
    pub fn new() -> Self {
        LinearSystem::default()
    }

    pub fn add_variable(&mut self, name: impl Into<String>, nonnegative: bool) -> usize {
        self.names.push(name.into());
        self.nonnegative.push(nonnegative);
        self.names.len() - 1
    }

    /// Adds `sum terms = rhs`; repeated variables are merged.
    pub fn add_equality(&mut self, terms: impl IntoIterator<Item = (usize, Rational)>, rhs: Rational) {
        let mut merged: BTreeMap<usize, Rational> = BTreeMap::new();
        for (j, a) in terms {
            assert!(j < self.names.len(), "constraint references unknown variable {j}");
            *merged.entry(j).or_insert_with(Rational::zero) += a;
        }
        let terms = merged.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        self.rows.push((terms, rhs));
    }

    pub fn variable_count(&self) -> usize {
        self.names.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.rows.len()
    }

    pub fn name(&self, j: usize) -> &str {
        &self.names[j]
    }

    pub fn is_nonnegative(&self, j: usize) -> bool {
        self.nonnegative[j]
    }

    pub fn rows(&self) -> &[(Vec<(usize, Rational)>, Rational)] {
        &self.rows
    }

    /// Whether `x` satisfies every constraint and sign condition exactly.
    pub fn check(&self, x: &[Rational]) -> bool {
        x.len() == self.names.len()
            && x.iter().zip(&self.nonnegative).all(|(v, &nn)| !nn || !v.is_negative())
            && self.rows.iter().all(|(terms, rhs)| {
                let lhs: Rational = terms.iter().map(|(j, a)| a * &x[*j]).sum();
                lhs == *rhs
            })
    }
}

enum Presolved {
    Infeasible,
    Reduced { fixed: Vec<Option<Rational>>, rows: Vec<(Vec<(usize, Rational)>, Rational)> },
}

/// Substitutes fixed variables, fixes variables forced by singleton rows or by
/// sign-definite rows with zero right-hand side, and drops duplicate rows.
fn presolve(sys: &LinearSystem) -> Presolved {
    let mut fixed: Vec<Option<Rational>> = vec![None; sys.variable_count()];
    let mut rows = sys.rows.clone();
    loop {
        let mut changed = false;
        let mut kept = Vec::with_capacity(rows.len());
        for (terms, mut rhs) in rows {
            let mut live = Vec::with_capacity(terms.len());
            for (j, a) in terms {
                match &fixed[j] {
                    Some(v) => rhs -= &a * v,
                    None => live.push((j, a)),
                }
            }
            if live.is_empty() {
                if !rhs.is_zero() {
                    return Presolved::Infeasible;
                }
                continue;
            }
            if live.len() == 1 {
                let (j, a) = &live[0];
                let v = &rhs / a;
                if sys.nonnegative[*j] && v.is_negative() {
                    return Presolved::Infeasible;
                }
                fixed[*j] = Some(v);
                changed = true;
                continue;
            }
            let signed = live.iter().all(|(j, _)| sys.nonnegative[*j]);
            let all_pos = signed && live.iter().all(|(_, a)| a.is_positive());
            let all_neg = signed && live.iter().all(|(_, a)| a.is_negative());
            if all_pos || all_neg {
                if rhs.is_zero() {
                    for (j, _) in &live {
                        fixed[*j] = Some(Rational::zero());
                    }
                    changed = true;
                    continue;
                }
                if (all_pos && rhs.is_negative()) || (all_neg && rhs.is_positive()) {
                    return Presolved::Infeasible;
                }
            }
            kept.push((live, rhs));
        }
        rows = kept;
        if !changed {
            break;
        }
    }
    let mut seen = BTreeSet::new();
    let mut unique = Vec::with_capacity(rows.len());
    for (terms, rhs) in rows {
        let lead = terms[0].1.recip().expect("nonzero coefficient");
        let normalized: Vec<(usize, Rational)> = terms.iter().map(|(j, a)| (*j, a * &lead)).collect();
        let rhs = rhs * &lead;
        if seen.insert((normalized.clone(), rhs.clone())) {
            unique.push((normalized, rhs));
        }
    }
    Presolved::Reduced { fixed, rows: unique }
}

/// Decides feasibility exactly. A returned witness has been re-checked
/// against every original constraint.
pub fn feasible(sys: &LinearSystem) -> Feasibility {
    let (fixed, rows) = match presolve(sys) {
        Presolved::Infeasible => return Feasibility::Infeasible,
        Presolved::Reduced { fixed, rows } => (fixed, rows),
    };
    // Columns: one per remaining nonnegative variable, two per free one.
    let mut column_of: BTreeMap<usize, (usize, Option<usize>)> = BTreeMap::new();
    let mut cols = 0;
    for (terms, _) in &rows {
        for (j, _) in terms {
            column_of.entry(*j).or_insert_with(|| {
                let plus = cols;
                cols += 1;
                let minus = (!sys.nonnegative[*j]).then(|| {
                    cols += 1;
                    cols - 1
                });
                (plus, minus)
            });
        }
    }
    let mut tableau = Vec::with_capacity(rows.len());
    let mut rhs = Vec::with_capacity(rows.len());
    for (terms, b) in rows {
        let mut row = Vec::with_capacity(terms.len() + 1);
        for (j, a) in terms {
            let (plus, minus) = column_of[&j];
            if let Some(m) = minus {
                row.push((m, -&a));
            }
            row.push((plus, a));
        }
        row.sort_by_key(|e| e.0);
        tableau.push(row);
        rhs.push(b);
    }
    let Some(solution) = simplex::phase_one(tableau, rhs, cols) else {
        return Feasibility::Infeasible;
    };
    let x: Vec<Rational> = (0..sys.variable_count())
        .map(|j| match (&fixed[j], column_of.get(&j)) {
            (Some(v), _) => v.clone(),
            (None, Some((plus, minus))) => match minus {
                Some(m) => &solution[*plus] - &solution[*m],
                None => solution[*plus].clone(),
            },
            (None, None) => Rational::zero(),
        })
        .collect();
    assert!(sys.check(&x), "simplex witness failed re-validation");
    Feasibility::Feasible(x)
}

fn root(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Feasibility through the quotient by a group of variable permutations
/// mapping the constraint set onto itself. Averaging any solution over the
/// group gives one that is constant on orbits, so the quotient system with one
/// variable per orbit has the same verdict. Each generator is checked to be a
/// symmetry before use; the expanded witness is re-checked against `sys`.
pub fn feasible_under_symmetry(sys: &LinearSystem, generators: &[Vec<usize>]) -> Result<Feasibility> {
    let n = sys.variable_count();
    let rows: BTreeSet<&(Vec<(usize, Rational)>, Rational)> = sys.rows.iter().collect();
    for g in generators {
        let mut hit = vec![false; n];
        if g.len() != n || g.iter().any(|&j| j >= n || core::mem::replace(&mut hit[j], true)) {
            return Err(Error::ShapeMismatch(alloc::format!("not a permutation of {n} variables")));
        }
        if (0..n).any(|j| sys.nonnegative[j] != sys.nonnegative[g[j]]) {
            return Err(Error::ShapeMismatch("permutation mixes sign constraints".into()));
        }
        for (terms, rhs) in &sys.rows {
            let mut image: Vec<(usize, Rational)> = terms.iter().map(|(j, a)| (g[*j], a.clone())).collect();
            image.sort_by_key(|e| e.0);
            if !rows.contains(&(image, rhs.clone())) {
                return Err(Error::ShapeMismatch("permutation does not preserve the constraints".into()));
            }
        }
    }
    let mut parent: Vec<usize> = (0..n).collect();
    for g in generators {
        for (j, &gj) in g.iter().enumerate() {
            let (a, b) = (root(&mut parent, j), root(&mut parent, gj));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut orbit = vec![usize::MAX; n];
    let mut quotient = LinearSystem::new();
    for j in 0..n {
        let r = root(&mut parent, j);
        if orbit[r] == usize::MAX {
            orbit[r] = quotient.add_variable(sys.names[j].clone(), sys.nonnegative[j]);
        }
        orbit[j] = orbit[r];
    }
    let mut seen = BTreeSet::new();
    for (terms, rhs) in &sys.rows {
        let mut merged: BTreeMap<usize, Rational> = BTreeMap::new();
        for (j, a) in terms {
            *merged.entry(orbit[*j]).or_insert_with(Rational::zero) += a;
        }
        let row: Vec<(usize, Rational)> = merged.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        if seen.insert((row.clone(), rhs.clone())) {
            quotient.add_equality(row, rhs.clone());
        }
    }
    Ok(match feasible(&quotient) {
        Feasibility::Feasible(y) => {
            let x: Vec<Rational> = orbit.iter().map(|&o| y[o].clone()).collect();
            assert!(sys.check(&x), "orbit witness failed re-validation");
            Feasibility::Feasible(x)
        }
        Feasibility::Infeasible => Feasibility::Infeasible,
    })
}
