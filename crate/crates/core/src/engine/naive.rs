//! Reference solver: one sparse absorbing-chain system over every state
//! `(c, S)` with `c ∈ S`, absorbed at `S = V`. Independent of the
//! subset-exit decomposition and used only to cross-check it.

use std::collections::HashMap;

use num_traits::Zero;

use super::{subsets_by_size, LastVisitMatrix};
use crate::digraph::{bits, Digraph};
use crate::error::{Error, Result};
use crate::linalg::{SparseRow, SparseSystem};
use crate::rational::{Rational, Scalar};

pub const MAX_NAIVE_VERTICES: usize = 10;

fn check(g: &Digraph) -> Result<()> {
    let n = g.n();
    if n < 2 {
        return Err(Error::arg("last-visit distributions need at least two vertices"));
    }
    if n > MAX_NAIVE_VERTICES {
        return Err(Error::TooLarge { n, max: MAX_NAIVE_VERTICES });
    }
    g.require_strongly_connected()
}

pub fn naive_last_visit_matrix(g: &Digraph) -> Result<LastVisitMatrix> {
    check(g)?;
    let n = g.n();
    let full = g.full_set();

    let states: Vec<(usize, u32)> = subsets_by_size(n)
        .into_iter()
        .filter(|&s| s != 0 && s != full)
        .flat_map(|s| bits(s).map(move |c| (c, s)))
        .collect();
    let index: HashMap<(usize, u32), usize> =
        states.iter().enumerate().map(|(i, &st)| (st, i)).collect();

    let mut system = SparseSystem::new();
    for &(c, s) in &states {
        let step = Rational::recip_of(g.out_degree(c));
        let mut row = SparseRow::new();
        let mut rhs = SparseRow::new();
        row.insert(index[&(c, s)], Rational::from_integer(1.into()));
        for &t in g.out_neighbors(c) {
            let next = s | 1 << t;
            if next == full {
                *rhs.entry(t).or_insert_with(Rational::zero) += &step;
            } else {
                let e = row.entry(index[&(t, next)]).or_insert_with(Rational::zero);
                *e -= &step;
            }
        }
        row.retain(|_, v| !v.is_zero());
        system.push_row(row, rhs);
    }
    let solution = system
        .solve()
        .map_err(|e| Error::internal(format!("absorbing chain: {e}")))?;

    let rows = (0..n)
        .map(|u| {
            let x = &solution[index[&(u, 1 << u)]];
            (0..n)
                .map(|v| x.get(&v).cloned().unwrap_or_else(Rational::zero))
                .collect()
        })
        .collect();
    Ok(LastVisitMatrix::from_rows(rows))
}

pub fn naive_last_visit_row(g: &Digraph, u: usize) -> Result<Vec<Rational>> {
    g.check_vertex(u)?;
    Ok(naive_last_visit_matrix(g)?.row(u).to_vec())
}
