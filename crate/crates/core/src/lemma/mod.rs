//! Checks of the out-neighbour lemma for a pair `(u, v)` with `u→v` absent:
//!
//! ```text
//! P(L(u,v)) = (1/d) Σᵢ ( P(L(xᵢ,v)) + P(L(xᵢ; v,u)) )
//! ```
//!
//! over the out-neighbours `x₁ … x_d` of `u`, where `P(L(x; v,u))` is the
//! probability that a tour from `x` discovers `v` second to last and `u`
//! last. Consequently some `xᵢ` has `P(L(xᵢ,v)) ≤ P(L(u,v))`, strictly so when
//! a cover tour from `u` ends at `v` without coming back to `u`.

mod search;

use num_traits::Zero;
use serde::Serialize;

pub use search::MAX_SEARCH_VERTICES;
use search::{Layers, Rules};

use crate::digraph::{CoverTour, Digraph, Walk};
use crate::engine::{is_last_visit_uniform, ExactSolver};
use crate::error::{Error, Result};
use crate::rational::{serialize_rational, Rational};

/// Two readings of "a walk from `u` to `v` visiting every vertex without
/// revisiting `u`".
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoRevisitReading {
    /// The walk ends at `v` once everything has been seen; `v` may have been
    /// passed earlier.
    EndsAtV,
    /// The walk is a cover tour: `v` is the last new vertex. This is the
    /// reading under which the strict inequality actually holds.
    #[default]
    CoverTour,
}

impl NoRevisitReading {
    pub fn name(self) -> &'static str {
        match self {
            NoRevisitReading::EndsAtV => "ends-at-v",
            NoRevisitReading::CoverTour => "cover-tour",
        }
    }
}

/// Independent check of the defining predicate of a no-revisit walk.
pub fn is_no_revisit_walk(g: &Digraph, u: usize, v: usize, walk: &[usize], reading: NoRevisitReading) -> bool {
    let Some((&first, rest)) = walk.split_first() else {
        return false;
    };
    if first != u || walk.last() != Some(&v) || rest.contains(&u) {
        return false;
    }
    match reading {
        NoRevisitReading::CoverTour => crate::digraph::validate_cover_tour(g, walk),
        NoRevisitReading::EndsAtV => {
            walk.iter().all(|&x| x < g.n())
                && walk.windows(2).all(|p| g.has_arc(p[0], p[1]))
                && walk.iter().fold(0u32, |m, &x| m | 1 << x) == g.full_set()
        }
    }
}

/// A shortest walk from `u` that never returns to `u`, visits every vertex
/// and ends at `v` (read according to `reading`), or `None`. Ties are broken
/// lexicographically.
pub fn exists_covertour_no_revisit(
    g: &Digraph,
    u: usize,
    v: usize,
    reading: NoRevisitReading,
) -> Result<Option<Walk>> {
    let rules = Rules {
        start: u,
        end: v,
        avoid_start: true,
        end_last: reading == NoRevisitReading::CoverTour,
    };
    match Layers::search(g, rules)?.smallest() {
        Some(w) => Ok(Some(Walk::new(g, w)?)),
        None => Ok(None),
    }
}

fn cover_tour_layers(g: &Digraph, u: usize, v: usize) -> Result<Layers<'_>> {
    g.require_strongly_connected()?;
    Layers::search(g, Rules { start: u, end: v, avoid_start: false, end_last: true })
}

/// The lexicographically smallest among the shortest cover tours from `u`
/// whose last new vertex is `v`. `None` when no tour from `u` can finish at
/// `v` (a cut vertex on every route, say), even in a strongly connected graph.
pub fn shortest_cover_tour(g: &Digraph, u: usize, v: usize) -> Result<Option<CoverTour>> {
    match cover_tour_layers(g, u, v)?.smallest() {
        Some(walk) => CoverTour::new(g, walk).map(Some).map_err(|e| Error::internal(e.to_string())),
        None => Ok(None),
    }
}

/// All shortest cover tours from `u` ending at `v`, in lexicographic order.
pub fn minimal_cover_tours(g: &Digraph, u: usize, v: usize) -> Result<Vec<CoverTour>> {
    cover_tour_layers(g, u, v)?
        .all_shortest()
        .into_iter()
        .map(|w| CoverTour::new(g, w).map_err(|e| Error::internal(e.to_string())))
        .collect()
}

/// For a uniform `G`: either `u→v` is an arc or every minimal cover tour
/// from `u` ending at `v` passes through `u` again.
pub fn check_revisit_consequence(g: &Digraph, u: usize, v: usize) -> Result<bool> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(Error::arg("u and v must differ"));
    }
    if !is_last_visit_uniform(g)?.uniform {
        return Err(Error::Hypothesis("the graph is not last-visit uniform".into()));
    }
    if g.has_arc(u, v) {
        return Ok(true);
    }
    Ok(minimal_cover_tours(g, u, v)?
        .iter()
        .all(|t| t.walk().occurrences(u) >= 2))
}

/// One out-neighbour's contribution to the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eq1Term {
    pub x: usize,
    /// `P(L(x, v))`.
    #[serde(serialize_with = "serialize_rational")]
    pub last_at_v: Rational,
    /// `P(L(x; v, u))`.
    #[serde(serialize_with = "serialize_rational")]
    pub last_two_vu: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eq1Check {
    pub u: usize,
    pub v: usize,
    pub degree: usize,
    pub terms: Vec<Eq1Term>,
    #[serde(serialize_with = "serialize_rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub rhs: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub residual: Rational,
}

impl Eq1Check {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma1Witness {
    pub u: usize,
    pub v: usize,
    /// An out-neighbour of `u` minimizing `P(L(x, v))` (smallest on ties).
    pub x: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub p_xv: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub p_uv: Rational,
    /// Whether a no-revisit cover tour from `u` ending at `v` exists.
    pub strict: bool,
    pub witness: Option<Walk>,
}

/// Exact quantities needed by the lemma checks on one graph, computed once.
pub struct LemmaContext<'g> {
    g: &'g Digraph,
    rows: Vec<Vec<Rational>>,
    // last_two[x][w * n + z] = P(tour from x discovers w then z last)
    last_two: Vec<Vec<Rational>>,
}

impl<'g> LemmaContext<'g> {
    pub fn new(g: &'g Digraph) -> Result<Self> {
        let n = g.n();
        if n < 3 {
            return Err(Error::arg("the lemma checks need at least three vertices"));
        }
        let solver = ExactSolver::new(g)?;
        let rows = solver.rows();
        let last_two = (0..n)
            .map(|x| {
                let mut flat = vec![Rational::zero(); n * n];
                for ((w, z), p) in solver.last_two(x)? {
                    flat[w * n + z] = p;
                }
                Ok(flat)
            })
            .collect::<Result<_>>()?;
        Ok(LemmaContext { g, rows, last_two })
    }

    pub fn graph(&self) -> &'g Digraph {
        self.g
    }

    /// `P(L(u, v))`.
    pub fn last_visit(&self, u: usize, v: usize) -> &Rational {
        &self.rows[u][v]
    }

    /// `P(L(x; w, z))`: `w` discovered second to last, `z` last.
    pub fn last_two(&self, x: usize, w: usize, z: usize) -> &Rational {
        &self.last_two[x][w * self.g.n() + z]
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        self.g.check_vertex(u)?;
        self.g.check_vertex(v)?;
        if u == v {
            return Err(Error::arg("u and v must differ"));
        }
        Ok(())
    }

    /// Both sides of the identity, without checking the `u→v ∉ E` hypothesis.
    pub fn eq1_unchecked(&self, u: usize, v: usize) -> Result<Eq1Check> {
        self.check_pair(u, v)?;
        let xs = self.g.out_neighbors(u);
        let terms: Vec<Eq1Term> = xs
            .iter()
            .map(|&x| Eq1Term {
                x,
                last_at_v: self.last_visit(x, v).clone(),
                last_two_vu: self.last_two(x, v, u).clone(),
            })
            .collect();
        let sum = terms
            .iter()
            .fold(Rational::zero(), |acc, t| acc + &t.last_at_v + &t.last_two_vu);
        let rhs = sum / Rational::from_integer(xs.len().into());
        let lhs = self.last_visit(u, v).clone();
        let residual = &lhs - &rhs;
        Ok(Eq1Check { u, v, degree: xs.len(), terms, lhs, rhs, residual })
    }

    pub fn eq1(&self, u: usize, v: usize) -> Result<Eq1Check> {
        self.check_pair(u, v)?;
        if self.g.has_arc(u, v) {
            return Err(Error::Hypothesis(format!("arc {u}→{v} is present")));
        }
        self.eq1_unchecked(u, v)
    }

    /// Out-neighbour `x` with the smallest `P(L(x, v))`, plus the strictness
    /// flag. Fails with [`Error::CheckFailed`] if the inequality (or its
    /// strict form when a witness exists) is violated.
    pub fn witness(&self, u: usize, v: usize) -> Result<Lemma1Witness> {
        self.check_pair(u, v)?;
        if self.g.has_arc(u, v) {
            return Err(Error::Hypothesis(format!("arc {u}→{v} is present")));
        }
        let &x = self
            .g
            .out_neighbors(u)
            .iter()
            .min_by(|&&a, &&b| self.last_visit(a, v).cmp(self.last_visit(b, v)))
            .expect("strongly connected graphs have no sinks");
        let p_xv = self.last_visit(x, v).clone();
        let p_uv = self.last_visit(u, v).clone();
        let witness = exists_covertour_no_revisit(self.g, u, v, NoRevisitReading::CoverTour)?;
        let strict = witness.is_some();
        if p_xv > p_uv || (strict && p_xv == p_uv) {
            return Err(Error::CheckFailed(format!(
                "out-neighbour bound fails at ({u},{v}): P(L({x},{v})) = {p_xv}, P(L({u},{v})) = {p_uv}, strict = {strict}"
            )));
        }
        Ok(Lemma1Witness { u, v, x, p_xv, p_uv, strict, witness })
    }

    /// Every ordered pair `(u, v)` with `u ≠ v` and `u→v` absent.
    pub fn nonadjacent_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.g.n();
        (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v && !self.g.has_arc(u, v))
            .collect()
    }
}

pub fn check_eq1(g: &Digraph, u: usize, v: usize) -> Result<Eq1Check> {
    LemmaContext::new(g)?.eq1(u, v)
}

pub fn lemma1_witness(g: &Digraph, u: usize, v: usize) -> Result<Lemma1Witness> {
    LemmaContext::new(g)?.witness(u, v)
}

/// How the two no-revisit readings compare on one pair, and whether the
/// strict inequality holds there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReadingComparison {
    pub u: usize,
    pub v: usize,
    pub ends_at_v: bool,
    pub cover_tour: bool,
    pub strict_inequality: bool,
}

/// Findings about cases the lemma does not address. Nothing here is asserted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExploratoryReport {
    /// The identity evaluated on pairs with `u→v` present.
    pub adjacent: Vec<Eq1Check>,
    /// Nonadjacent pairs on which the two readings disagree.
    pub reading_disagreements: Vec<ReadingComparison>,
    pub pairs_compared: usize,
}

impl ExploratoryReport {
    pub fn merge(&mut self, other: ExploratoryReport) {
        self.adjacent.extend(other.adjacent);
        self.reading_disagreements.extend(other.reading_disagreements);
        self.pairs_compared += other.pairs_compared;
    }

    pub fn adjacent_nonzero(&self) -> usize {
        self.adjacent.iter().filter(|c| !c.holds()).count()
    }
}

pub fn exploratory_report(ctx: &LemmaContext<'_>) -> Result<ExploratoryReport> {
    let g = ctx.graph();
    let mut report = ExploratoryReport::default();
    for (u, v) in g.arcs() {
        report.adjacent.push(ctx.eq1_unchecked(u, v)?);
    }
    for (u, v) in ctx.nonadjacent_pairs() {
        let literal = exists_covertour_no_revisit(g, u, v, NoRevisitReading::EndsAtV)?.is_some();
        let tour = exists_covertour_no_revisit(g, u, v, NoRevisitReading::CoverTour)?.is_some();
        report.pairs_compared += 1;
        if literal != tour {
            let min = g
                .out_neighbors(u)
                .iter()
                .map(|&x| ctx.last_visit(x, v))
                .min()
                .expect("no sinks");
            report.reading_disagreements.push(ReadingComparison {
                u,
                v,
                ends_at_v: literal,
                cover_tour: tour,
                strict_inequality: min < ctx.last_visit(u, v),
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests;
