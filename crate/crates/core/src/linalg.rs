//! Gaussian elimination, dense over any [`Scalar`] and sparse over exact
//! rationals. Pivoting is deterministic: the pivot for column `j` is the
//! first remaining row (by current index) with a nonzero entry there.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::rational::{Rational, Scalar};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("singular system: no pivot in column {column}")]
pub struct SingularMatrix {
    pub column: usize,
}

/// Solves `A X = B` for square `a` (`k × k`) and `b` (`k × m`).
pub fn solve_dense<T: Scalar>(
    mut a: Vec<Vec<T>>,
    mut b: Vec<Vec<T>>,
) -> Result<Vec<Vec<T>>, SingularMatrix> {
    let k = a.len();
    debug_assert!(a.iter().all(|r| r.len() == k) && b.len() == k);

    for col in 0..k {
        let pivot = (col..k)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(SingularMatrix { column: col })?;
        a.swap(col, pivot);
        b.swap(col, pivot);

        let (top, rest) = a.split_at_mut(col + 1);
        let (btop, brest) = b.split_at_mut(col + 1);
        let prow = &top[col];
        let pb = &btop[col];
        for (row, brow) in rest.iter_mut().zip(brest.iter_mut()) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone() / &prow[col];
            row[col] = T::zero();
            for c in col + 1..k {
                if !prow[c].is_zero() {
                    let d = factor.clone() * &prow[c];
                    row[c] = row[c].clone() - &d;
                }
            }
            for (x, p) in brow.iter_mut().zip(pb) {
                if !p.is_zero() {
                    let d = factor.clone() * p;
                    *x = x.clone() - &d;
                }
            }
        }
    }

    for col in (0..k).rev() {
        let (cur, below) = b[col..].split_first_mut().unwrap();
        for (c, xrow) in (col + 1..k).zip(below.iter()) {
            let coef = &a[col][c];
            if coef.is_zero() {
                continue;
            }
            for (x, y) in cur.iter_mut().zip(xrow) {
                if !y.is_zero() {
                    let d = coef.clone() * y;
                    *x = x.clone() - &d;
                }
            }
        }
        let diag = &a[col][col];
        for x in cur.iter_mut() {
            if !x.is_zero() {
                *x = x.clone() / diag;
            }
        }
    }
    Ok(b)
}

pub type SparseRow = BTreeMap<usize, Rational>;

/// Square sparse system `A X = B` over rationals, with sparse right-hand
/// sides. Rows are added in unknown order; row `i` is the equation for
/// unknown `i`.
#[derive(Clone, Debug, Default)]
pub struct SparseSystem {
    rows: Vec<SparseRow>,
    rhs: Vec<SparseRow>,
}

impl SparseSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_row(&mut self, coefficients: SparseRow, rhs: SparseRow) {
        self.rows.push(coefficients);
        self.rhs.push(rhs);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn solve(self) -> Result<Vec<SparseRow>, SingularMatrix> {
        let SparseSystem { mut rows, mut rhs } = self;
        let n = rows.len();

        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| rows[r].get(&col).is_some_and(|x| !x.is_zero()))
                .ok_or(SingularMatrix { column: col })?;
            rows.swap(col, pivot);
            rhs.swap(col, pivot);

            let (top, rest) = rows.split_at_mut(col + 1);
            let (rtop, rrest) = rhs.split_at_mut(col + 1);
            let prow = &top[col];
            let prhs = &rtop[col];
            let pval = &prow[&col];
            for (row, rrow) in rest.iter_mut().zip(rrest.iter_mut()) {
                let Some(x) = row.remove(&col) else { continue };
                let factor = x / pval;
                for (&c, v) in prow.range(col + 1..) {
                    axpy(row, c, &factor, v);
                }
                for (&c, v) in prhs {
                    axpy(rrow, c, &factor, v);
                }
            }
        }

        let mut solution: Vec<SparseRow> = vec![SparseRow::new(); n];
        for col in (0..n).rev() {
            let mut acc = std::mem::take(&mut rhs[col]);
            for (&c, coef) in rows[col].range(col + 1..) {
                for (&k, y) in &solution[c] {
                    axpy(&mut acc, k, coef, y);
                }
            }
            let diag = &rows[col][&col];
            for x in acc.values_mut() {
                *x = &*x / diag;
            }
            solution[col] = acc;
        }
        Ok(solution)
    }
}

/// `row[c] -= factor * v`, dropping the entry if it becomes zero.
fn axpy(row: &mut SparseRow, c: usize, factor: &Rational, v: &Rational) {
    let d = factor * v;
    match row.get_mut(&c) {
        Some(x) => {
            *x -= d;
            if x.is_zero() {
                row.remove(&c);
            }
        }
        None => {
            row.insert(c, -d);
        }
    }
}
