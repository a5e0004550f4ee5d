//! Phase-one simplex over exact rationals with Bland's rule.
//!
//! The tableau keeps one sparse row per constraint. Artificial columns are
//! implicit: once an artificial variable leaves the basis it never returns.

use alloc::vec;
use alloc::vec::Vec;

use crate::rational::Rational;

pub(crate) type SparseRow = Vec<(usize, Rational)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Basic {
    Artificial(usize),
    Column(usize),
}

impl Basic {
    /// Position in Bland's order; artificials come after every real column.
    fn rank(self, cols: usize) -> usize {
        match self {
            Basic::Column(j) => j,
            Basic::Artificial(i) => cols + i,
        }
    }
}

fn coefficient(row: &SparseRow, col: usize) -> Option<&Rational> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|p| &row[p].1)
}

/// `row - factor * pivot`, both sorted by column.
fn eliminate(row: &SparseRow, factor: &Rational, pivot: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut a, mut b) = (row.iter().peekable(), pivot.iter().peekable());
    loop {
        match (a.peek(), b.peek()) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                let v = &x.1 - factor * &y.1;
                if !v.is_zero() {
                    out.push((x.0, v));
                }
                a.next();
                b.next();
            }
            (Some(x), Some(y)) if x.0 < y.0 => {
                out.push((*x).clone());
                a.next();
            }
            (Some(_), Some(y)) | (None, Some(y)) => {
                out.push((y.0, -(factor * &y.1)));
                b.next();
            }
            (Some(x), None) => {
                out.push((*x).clone());
                a.next();
            }
            (None, None) => break,
        }
    }
    out
}

/// Finds `x >= 0` with `rows[i] . x = rhs[i]`, or `None` if there is none.
pub(crate) fn phase_one(mut rows: Vec<SparseRow>, mut rhs: Vec<Rational>, cols: usize) -> Option<Vec<Rational>> {
    for (row, b) in rows.iter_mut().zip(rhs.iter_mut()) {
        if b.is_negative() {
            *b = -&*b;
            for e in row.iter_mut() {
                e.1 = -&e.1;
            }
        }
    }
    let mut basis: Vec<Basic> = (0..rows.len()).map(Basic::Artificial).collect();
    // Objective: sum of artificials = value + sum_j reduced[j] x_j.
    let mut reduced = vec![Rational::zero(); cols];
    let mut value = Rational::zero();
    for (row, b) in rows.iter().zip(&rhs) {
        for (j, a) in row {
            reduced[*j] -= a;
        }
        value += b;
    }

    loop {
        let Some(entering) = reduced.iter().position(Rational::is_negative) else {
            break;
        };
        let mut leaving: Option<(usize, Rational)> = None;
        for (i, row) in rows.iter().enumerate() {
            let Some(a) = coefficient(row, entering) else { continue };
            if !a.is_positive() {
                continue;
            }
            let ratio = &rhs[i] / a;
            let better = match &leaving {
                None => true,
                Some((best, best_ratio)) => {
                    ratio < *best_ratio
                        || (ratio == *best_ratio && basis[i].rank(cols) < basis[*best].rank(cols))
                }
            };
            if better {
                leaving = Some((i, ratio));
            }
        }
        // The objective is bounded below by zero, so some row must block.
        let (r, _) = leaving.expect("phase one is bounded");
        let pivot = coefficient(&rows[r], entering).expect("pivot entry").clone();
        let inv = pivot.recip().expect("nonzero pivot");
        for e in rows[r].iter_mut() {
            e.1 *= &inv;
        }
        rhs[r] *= &inv;
        let pivot_row = core::mem::take(&mut rows[r]);
        for i in 0..rows.len() {
            if i == r {
                continue;
            }
            if let Some(factor) = coefficient(&rows[i], entering).cloned() {
                rows[i] = eliminate(&rows[i], &factor, &pivot_row);
                let delta = &factor * &rhs[r];
                rhs[i] -= delta;
            }
        }
        let d = reduced[entering].clone();
        for (j, a) in &pivot_row {
            reduced[*j] -= &d * a;
        }
        value += &d * &rhs[r];
        rows[r] = pivot_row;
        basis[r] = Basic::Column(entering);
    }

    if !value.is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, b) in basis.iter().enumerate() {
        if let Basic::Column(j) = b {
            x[*j] = rhs[i].clone();
        }
    }
    Some(x)
}
