//! Exact last-visit distributions of random cover tours.
//!
//! A cover tour is decomposed at its discovery epochs: between two
//! discoveries the visited set `S` is fixed and the walk wanders inside `S`
//! until it first steps outside. The first-exit law from each `s ∈ S` is an
//! [`ExitMatrix`], obtained from one linear solve per subset and shared by
//! every start vertex. Chaining exits over subsets of increasing size gives
//! the distribution over discovery states `(c, S)` (walk at the most recent
//! discovery `c`, visited set `S`); its mass on `(v, V)` is `P(L(u, v))`.

mod exit;
mod naive;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub use exit::{exit_probabilities, ExitMatrix};
pub use naive::{naive_last_visit_matrix, naive_last_visit_row, MAX_NAIVE_VERTICES};

use crate::digraph::{bits, Digraph, VertexSet};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::rational::{Rational, Scalar};

/// Hard limit for the subset solver (`n·2ⁿ` discovery states). Exact
/// arithmetic is comfortable up to about `n = 8`.
pub const MAX_EXACT_VERTICES: usize = 12;

/// Every subset of `0..n`, ordered by population count, ties by value.
pub fn subsets_by_size(n: usize) -> Vec<VertexSet> {
    let mut v: Vec<VertexSet> = (0..1u32 << n).collect();
    v.sort_by_key(|&m| (m.count_ones(), m));
    v
}

/// Last-visit solver for one graph. Exit matrices are memoized per subset
/// and shared across start vertices (and threads).
pub struct LastVisitSolver<'g, T: Scalar> {
    g: &'g Digraph,
    order: Vec<VertexSet>,
    exits: Vec<OnceLock<ExitMatrix<T>>>,
    exec: Execution,
}

impl<'g, T: Scalar> LastVisitSolver<'g, T> {
    pub fn new(g: &'g Digraph) -> Result<Self> {
        let n = g.n();
        if n < 2 {
            return Err(Error::arg("last-visit distributions need at least two vertices"));
        }
        if n > MAX_EXACT_VERTICES {
            return Err(Error::TooLarge { n, max: MAX_EXACT_VERTICES });
        }
        g.require_strongly_connected()?;
        Ok(LastVisitSolver {
            g,
            order: subsets_by_size(n),
            exits: (0..1usize << n).map(|_| OnceLock::new()).collect(),
            exec: Execution::default(),
        })
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn graph(&self) -> &'g Digraph {
        self.g
    }

    /// Exit matrix of a nonempty proper subset, computed on first use.
    pub fn exit(&self, subset: VertexSet) -> &ExitMatrix<T> {
        self.exits[subset as usize].get_or_init(|| {
            ExitMatrix::solve(self.g, subset).expect("strong connectivity makes I − P_S invertible")
        })
    }

    /// Computes every exit matrix up front (in parallel when enabled).
    pub fn prefill(&self) {
        let full = self.g.full_set();
        let subsets: Vec<VertexSet> =
            self.order.iter().copied().filter(|&s| s != 0 && s != full).collect();
        par::map_range(self.exec, 0..subsets.len(), |i| {
            self.exit(subsets[i]);
        });
    }

    /// Mass of every discovery state `(c, S)` for tours from `u`, indexed
    /// `S·n + c`.
    pub fn discovery_masses(&self, u: usize) -> Result<Vec<T>> {
        self.g.check_vertex(u)?;
        let n = self.g.n();
        let full = self.g.full_set();
        let mut mass = vec![T::zero(); n << n];
        mass[(1usize << u) * n + u] = T::one();

        for &s in &self.order {
            if s & (1 << u) == 0 || s == full {
                continue;
            }
            let base = s as usize * n;
            for c in bits(s) {
                if mass[base + c].is_zero() {
                    continue;
                }
                let m = mass[base + c].clone();
                let exit = self.exit(s);
                for (t, p) in exit.row(c).iter().enumerate() {
                    if p.is_zero() {
                        continue;
                    }
                    let idx = (s | 1 << t) as usize * n + t;
                    let add = m.clone() * p;
                    mass[idx] = std::mem::replace(&mut mass[idx], T::zero()) + add;
                }
            }
        }
        Ok(mass)
    }

    /// `P(L(u, v))` for every `v`.
    pub fn row(&self, u: usize) -> Result<Vec<T>> {
        let n = self.g.n();
        let mass = self.discovery_masses(u)?;
        let base = self.g.full_set() as usize * n;
        Ok(mass[base..base + n].to_vec())
    }

    /// All rows, one per start vertex.
    pub fn rows(&self) -> Vec<Vec<T>> {
        if self.exec.is_parallel() {
            self.prefill();
        }
        par::map_range(self.exec, 0..self.g.n(), |u| self.row(u).expect("u in range"))
    }

    /// Joint law of the last two discoveries of a tour from `x`, keyed
    /// `(penultimate, last)`; zero entries omitted.
    pub fn last_two(&self, x: usize) -> Result<BTreeMap<(usize, usize), T>> {
        let n = self.g.n();
        if n < 3 {
            return Err(Error::arg("last-two distribution needs at least three vertices"));
        }
        let mass = self.discovery_masses(x)?;
        let full = self.g.full_set();
        let mut out = BTreeMap::new();
        for z in 0..n {
            let s = (full & !(1 << z)) as usize;
            for w in bits(s as VertexSet) {
                let m = &mass[s * n + w];
                if !m.is_zero() {
                    out.insert((w, z), m.clone());
                }
            }
        }
        Ok(out)
    }
}

impl LastVisitSolver<'_, f64> {
    /// Float uniformity test: every off-diagonal entry within `tol` of
    /// `1/(n−1)`. Stops at the first failing row.
    pub fn is_uniform_approx(&self, tol: f64) -> bool {
        let n = self.g.n();
        let target = 1.0 / (n - 1) as f64;
        (0..n).all(|u| {
            let row = self.row(u).expect("u in range");
            row.iter()
                .enumerate()
                .all(|(v, p)| v == u || (p - target).abs() <= tol)
        })
    }
}

/// Exact matrix of last-visit probabilities, entry `(u, v) = P(L(u, v))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LastVisitMatrix {
    entries: Vec<Vec<Rational>>,
}

impl LastVisitMatrix {
    pub fn from_rows(entries: Vec<Vec<Rational>>) -> Self {
        LastVisitMatrix { entries }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, u: usize, v: usize) -> &Rational {
        &self.entries[u][v]
    }

    pub fn row(&self, u: usize) -> &[Rational] {
        &self.entries[u]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    pub fn uniformity(&self) -> Uniformity {
        uniformity_of(&self.entries)
    }
}

impl Serialize for LastVisitMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let flat: Vec<String> = self.entries.iter().flatten().map(ToString::to_string).collect();
        let mut st = s.serialize_struct("LastVisitMatrix", 2)?;
        st.serialize_field("n", &self.n())?;
        st.serialize_field("entries", &flat)?;
        st.end()
    }
}

/// Verdict of the exact uniformity test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Uniformity {
    pub uniform: bool,
    /// `(u, v, w)` with `P(L(u, v)) ≠ P(L(u, w))`.
    pub counterexample: Option<(usize, usize, usize)>,
}

fn uniformity_of(rows: &[Vec<Rational>]) -> Uniformity {
    let n = rows.len();
    for (u, row) in rows.iter().enumerate() {
        let mut others = (0..n).filter(|&x| x != u);
        let Some(v) = others.next() else { continue };
        if let Some(w) = others.find(|&w| row[w] != row[v]) {
            return Uniformity { uniform: false, counterexample: Some((u, v, w)) };
        }
    }
    Uniformity { uniform: true, counterexample: None }
}

/// Joint law of the last two discoveries of a tour from `start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LastTwoDistribution {
    pub start: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl LastTwoDistribution {
    /// Probability that the discovery order ends `…, penultimate, last`.
    pub fn get(&self, penultimate: usize, last: usize) -> Rational {
        self.entries
            .get(&(penultimate, last))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Nonzero entries keyed `(penultimate, last)`.
    pub fn entries(&self) -> &BTreeMap<(usize, usize), Rational> {
        &self.entries
    }
}

impl Serialize for LastTwoDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            penultimate: usize,
            last: usize,
            probability: String,
        }
        let entries: Vec<Entry> = self
            .entries
            .iter()
            .map(|(&(w, z), p)| Entry { penultimate: w, last: z, probability: p.to_string() })
            .collect();
        let mut st = s.serialize_struct("LastTwoDistribution", 2)?;
        st.serialize_field("start", &self.start)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

pub type ExactSolver<'g> = LastVisitSolver<'g, Rational>;

pub fn last_visit_row(g: &Digraph, u: usize) -> Result<Vec<Rational>> {
    g.check_vertex(u)?;
    ExactSolver::new(g)?.row(u)
}

pub fn last_visit_matrix(g: &Digraph) -> Result<LastVisitMatrix> {
    Ok(LastVisitMatrix::from_rows(ExactSolver::new(g)?.rows()))
}

pub fn last_two_distribution(g: &Digraph, x: usize) -> Result<LastTwoDistribution> {
    g.check_vertex(x)?;
    let entries = ExactSolver::new(g)?.last_two(x)?;
    Ok(LastTwoDistribution { start: x, entries })
}

impl ExactSolver<'_> {
    pub fn last_two_distribution(&self, x: usize) -> Result<LastTwoDistribution> {
        Ok(LastTwoDistribution { start: x, entries: self.last_two(x)? })
    }

    pub fn matrix(&self) -> LastVisitMatrix {
        LastVisitMatrix::from_rows(self.rows())
    }
}

pub fn is_last_visit_uniform(g: &Digraph) -> Result<Uniformity> {
    Ok(last_visit_matrix(g)?.uniformity())
}

/// Float version of the uniformity test, for prefiltering only.
pub fn is_last_visit_uniform_approx(g: &Digraph, tol: f64) -> Result<bool> {
    Ok(LastVisitSolver::<f64>::new(g)?
        .with_execution(Execution::Sequential)
        .is_uniform_approx(tol))
}
