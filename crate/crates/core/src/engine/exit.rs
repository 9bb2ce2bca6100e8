use std::collections::BTreeMap;

use crate::digraph::{bits, Digraph, VertexSet};
use crate::error::{Error, Result};
use crate::linalg::{solve_dense, SingularMatrix};
use crate::rational::{Rational, Scalar};

/// First-exit law of the walk restricted to a subset `S`: entry `(s, t)` is
/// the probability that a walk started at `s ∈ S` first leaves `S` at `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExitMatrix<T> {
    subset: VertexSet,
    // One length-n row per member of `subset`, in ascending member order.
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> ExitMatrix<T> {
    /// Solves `x_s = Σ_{t ∈ S ∩ N⁺(s)} x_t / d(s) + Σ_{t ∉ S, t ∈ N⁺(s)} e_t / d(s)`.
    pub(crate) fn solve(g: &Digraph, subset: VertexSet) -> std::result::Result<Self, SingularMatrix> {
        let n = g.n();
        let members: Vec<usize> = bits(subset).collect();
        let k = members.len();
        let pos = |v: usize| (subset & ((1u32 << v) - 1)).count_ones() as usize;

        let mut a = vec![vec![T::zero(); k]; k];
        let mut b = vec![vec![T::zero(); n]; k];
        for (i, &s) in members.iter().enumerate() {
            a[i][i] = T::one();
            let step = T::recip_of(g.out_degree(s));
            for &t in g.out_neighbors(s) {
                if subset & (1 << t) != 0 {
                    let j = pos(t);
                    a[i][j] = a[i][j].clone() - &step;
                } else {
                    b[i][t] = step.clone();
                }
            }
        }
        let rows = solve_dense(a, b)?;
        Ok(ExitMatrix { subset, rows })
    }

    pub fn subset(&self) -> VertexSet {
        self.subset
    }

    /// Exit probabilities from `s`, indexed by target vertex (zero on `S`).
    ///
    /// Panics if `s ∉ S`.
    pub fn row(&self, s: usize) -> &[T] {
        assert!(self.subset & (1 << s) != 0, "vertex {s} not in subset");
        let i = (self.subset & ((1u32 << s) - 1)).count_ones() as usize;
        &self.rows[i]
    }

    pub fn prob(&self, s: usize, t: usize) -> &T {
        &self.row(s)[t]
    }

    /// Nonzero exits from `s`.
    pub fn row_map(&self, s: usize) -> BTreeMap<usize, T> {
        self.row(s)
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(t, p)| (t, p.clone()))
            .collect()
    }
}

pub fn exit_probabilities(g: &Digraph, subset: VertexSet) -> Result<ExitMatrix<Rational>> {
    let full = g.full_set();
    if subset == 0 || subset & !full != 0 || subset == full {
        return Err(Error::arg(format!(
            "subset {subset:#b} must be a nonempty proper subset of the {} vertices",
            g.n()
        )));
    }
    g.require_strongly_connected()?;
    ExitMatrix::solve(g, subset).map_err(|e| Error::internal(e.to_string()))
}
