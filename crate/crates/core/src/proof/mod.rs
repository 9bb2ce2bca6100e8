//! Executable replay of the argument that a last-visit-uniform digraph has
//! every arc paired with its reverse.
//!
//! Start from an arc `v→u` whose reverse is missing. `T` is a shortest cover
//! tour from `u` ending at `v`, and `T′` closes it with the arc `v→u`. The
//! vertices occurring once in `T` are peeled off `T′` as `U = [v, v₁, …, v_k]`
//! (each the last new vertex of the cyclic traversal starting at the
//! previous one), and `W` walks `U` in that order. For a uniform graph the
//! out-neighbour lemma forces every arc `W` needs; the intervals of `T′`
//! between consecutive `U` vertices then yield a cover tour from `v₁` to `v`
//! that never returns to `v₁`, forcing `v₁→v` as well.
//!
//! Here every obligation is checked against the actual graph. The first
//! one that fails is turned into a [`Certificate`] of non-uniformity that
//! can be verified on its own.

mod certify;
mod planted;

use std::collections::BTreeMap;

use serde::Serialize;

pub use certify::{certify_nonbidirected_implies_nonuniform, Certificate, CertificateKind, Certification};
pub use planted::{planted_instances, PlantedInstance};

use crate::digraph::{CoverTour, Digraph, Walk};
use crate::error::{Error, Result};
use crate::lemma::{is_no_revisit_walk, shortest_cover_tour, NoRevisitReading};

/// The objects built by the argument, for an arc `v→u` without reverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofDecomposition {
    pub u: usize,
    pub v: usize,
    /// Shortest cover tour from `u` ending at `v`; it passes `u` at least twice.
    pub tour: CoverTour,
    /// `T′` by position: `tour` followed by the arc `v→u` back to position 0.
    pub closed: Vec<usize>,
    /// `[v, v₁, …, v_k]`.
    pub u_sequence: Vec<usize>,
    /// Position of each `U` vertex in `closed`; strictly decreasing.
    pub u_positions: Vec<usize>,
    /// The closed walk `v, v₁, …, v_k, v`.
    pub w: Walk,
    /// For each position of `closed`, the index `j` of the open interval
    /// `(pos(U[j+1]), pos(U[j]))` containing it, or `None` at `U` positions.
    pub interval_of: Vec<Option<usize>>,
}

/// Why [`build_decomposition`] stopped before producing a decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Obstruction {
    /// No cover tour from `u` can end at `v`, so `P(L(u,v)) = 0`.
    NoCoverTour { u: usize, v: usize },
    /// `T` itself never returns to `u`.
    #[serde(rename = "T-no-revisit")]
    TNoRevisit { tour: CoverTour },
    /// `W` needs `from→to`, which is absent. `witness` is the stretch of
    /// `T′` from `from` to `to`: a cover tour that never returns to `from`.
    #[serde(rename = "W-edge-missing")]
    WEdgeMissing { from: usize, to: usize, witness: Walk },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Replay {
    Decomposition(ProofDecomposition),
    Obstruction(Obstruction),
}

impl ProofDecomposition {
    fn m(&self) -> usize {
        self.closed.len()
    }

    pub fn k(&self) -> usize {
        self.u_sequence.len() - 1
    }

    /// Positions `from, from+1, …, to` of `T′`, cyclically.
    pub fn segment(&self, from: usize, to: usize) -> Vec<usize> {
        cyclic_segment(&self.closed, from, to)
    }

    /// `U[i], U[i+1], …, U[j]` along `W`, cyclically.
    pub fn w_path(&self, i: usize, j: usize) -> Vec<usize> {
        let k = self.u_sequence.len();
        let len = (j + k - i) % k;
        (0..=len).map(|s| self.u_sequence[(i + s) % k]).collect()
    }

    fn offset(&self, from: usize, pos: usize) -> usize {
        (pos + self.m() - from) % self.m()
    }

    fn positions_of(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.closed.iter().enumerate().filter(move |&(_, &y)| y == x).map(|(p, _)| p)
    }
}

/// Runs the first half of the argument for the arc `v→u`.
pub fn build_decomposition(g: &Digraph, u: usize, v: usize) -> Result<Replay> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v || !g.has_arc(v, u) || g.has_arc(u, v) {
        return Err(Error::arg(format!("need arc {v}→{u} present and {u}→{v} absent")));
    }
    g.require_strongly_connected()?;

    let Some(tour) = shortest_cover_tour(g, u, v)? else {
        return Ok(Replay::Obstruction(Obstruction::NoCoverTour { u, v }));
    };
    if tour.walk().occurrences(u) == 1 {
        return Ok(Replay::Obstruction(Obstruction::TNoRevisit { tour }));
    }

    let closed = tour.vertices().to_vec();
    let m = closed.len();
    let n = g.n();
    let mut count = vec![0usize; n];
    for &x in &closed {
        count[x] += 1;
    }

    // Peel off last-new vertices until the traversal comes back to v.
    let mut u_sequence = vec![v];
    let mut u_positions = vec![m - 1];
    loop {
        let cur = *u_positions.last().unwrap();
        let mut seen = 1u32 << closed[cur];
        let mut last = cur;
        for i in 1..m {
            let p = (cur + i) % m;
            if seen & 1 << closed[p] == 0 {
                seen |= 1 << closed[p];
                last = p;
            }
        }
        let w = closed[last];
        if w == v {
            break;
        }
        if count[w] != 1 {
            return Err(Error::internal(format!(
                "extracted vertex {w} occurs {} times in a minimal tour",
                count[w]
            )));
        }
        if last >= cur || u_sequence.contains(&w) {
            return Err(Error::internal(format!("extraction stalled at vertex {w}")));
        }
        u_sequence.push(w);
        u_positions.push(last);
    }

    let singletons = (0..n).filter(|&x| count[x] == 1).count();
    if singletons != u_sequence.len() {
        return Err(Error::internal(format!(
            "extracted {:?} but T has {singletons} singletons",
            u_sequence
        )));
    }

    let k = u_sequence.len();
    for i in 0..k {
        let (a, b) = (u_sequence[i], u_sequence[(i + 1) % k]);
        if !g.has_arc(a, b) {
            let seg = cyclic_segment(&closed, u_positions[i], u_positions[(i + 1) % k]);
            let witness = Walk::new(g, seg).map_err(|e| Error::internal(e.to_string()))?;
            return Ok(Replay::Obstruction(Obstruction::WEdgeMissing { from: a, to: b, witness }));
        }
    }
    let dec = ProofDecomposition::assemble(g, tour, u_sequence, u_positions)?;
    check_structure(&dec, &count)?;
    Ok(Replay::Decomposition(dec))
}

fn cyclic_segment(closed: &[usize], from: usize, to: usize) -> Vec<usize> {
    let m = closed.len();
    let len = (to + m - from) % m;
    (0..=len).map(|i| closed[(from + i) % m]).collect()
}

impl ProofDecomposition {
    // Fills in the interval map and `W`; fails if `W` is not a walk in `g`.
    fn assemble(g: &Digraph, tour: CoverTour, u_sequence: Vec<usize>, u_positions: Vec<usize>) -> Result<Self> {
        let closed = tour.vertices().to_vec();
        let (m, k, v) = (closed.len(), u_sequence.len(), closed[closed.len() - 1]);
        let mut interval_of = vec![None; m];
        for j in 0..k {
            let (lo, hi) = (u_positions[(j + 1) % k], u_positions[j]);
            let mut p = (lo + 1) % m;
            while p != hi {
                interval_of[p] = Some(j);
                p = (p + 1) % m;
            }
        }
        let mut cycle = u_sequence.clone();
        cycle.push(v);
        let w = Walk::new(g, cycle).map_err(|_| Error::arg("W uses an arc missing from the graph"))?;
        Ok(ProofDecomposition {
            u: closed[0],
            v,
            tour,
            closed,
            u_sequence,
            u_positions,
            w,
            interval_of,
        })
    }

    /// A decomposition from a cover tour and a choice of `U`, without the
    /// checks [`build_decomposition`] makes. Fails unless every `U` vertex
    /// occurs exactly once in the tour and `W` is a walk in `g`.
    pub fn from_parts(g: &Digraph, tour: CoverTour, u_sequence: Vec<usize>) -> Result<Self> {
        let mut u_positions = Vec::with_capacity(u_sequence.len());
        for &x in &u_sequence {
            let ps: Vec<usize> = tour.vertices().iter().enumerate().filter(|&(_, &y)| y == x).map(|(p, _)| p).collect();
            match ps[..] {
                [p] => u_positions.push(p),
                _ => return Err(Error::arg(format!("U vertex {x} must occur exactly once"))),
            }
        }
        if u_sequence.first() != Some(&tour.last()) {
            return Err(Error::arg("U must start with the last vertex of the tour"));
        }
        Self::assemble(g, tour, u_sequence, u_positions)
    }
}

fn check_structure(dec: &ProofDecomposition, count: &[usize]) -> Result<()> {
    let in_u = |x: usize| dec.u_sequence.contains(&x);
    if dec.u_sequence.iter().any(|&x| count[x] != 1) {
        return Err(Error::internal("a U vertex repeats in T"));
    }
    if (0..count.len()).any(|x| !in_u(x) && count[x] < 2) {
        return Err(Error::internal("a vertex outside U occurs fewer than twice in T"));
    }
    if dec.u_positions.windows(2).any(|p| p[0] <= p[1]) {
        return Err(Error::internal("W does not follow U in reverse T order"));
    }
    for x in (0..count.len()).filter(|&x| !in_u(x)) {
        let mut gaps: Vec<usize> = dec.positions_of(x).map(|p| dec.interval_of[p].unwrap()).collect();
        let total = gaps.len();
        gaps.sort_unstable();
        gaps.dedup();
        if gaps.len() != total {
            return Err(Error::internal(format!("vertex {x} occurs twice in one interval")));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Tag {
    AB,
    BC,
    AC,
}

/// Interval tags relative to one rotation of `U`: `U[r]` plays `v`,
/// `U[r+1]` plays `v₁`, and so on. Rotation 0 is the labeling of the
/// argument itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalLabels {
    pub rotation: usize,
    /// `(v, v₁, v₂, v_k)` under this rotation.
    pub anchors: [usize; 4],
    pub tags: BTreeMap<usize, Tag>,
}

pub fn label_intervals(dec: &ProofDecomposition) -> Result<IntervalLabels> {
    label_intervals_at(dec, 0)
}

pub fn label_intervals_at(dec: &ProofDecomposition, rotation: usize) -> Result<IntervalLabels> {
    let k = dec.u_sequence.len();
    if k < 3 {
        return Err(Error::Hypothesis(format!(
            "interval labels need at least three U vertices, have {k}"
        )));
    }
    if rotation >= k {
        return Err(Error::arg(format!("rotation {rotation} out of range for {k} U vertices")));
    }
    let (a, b, c) = ((rotation + 1) % k, rotation, (rotation + k - 1) % k);
    let mut tags = BTreeMap::new();
    // The tour covers every vertex.
    let n = dec.tour.vertices().iter().max().map_or(0, |&x| x + 1);
    for x in (0..n).filter(|x| !dec.u_sequence.contains(x)) {
        let gaps: Vec<usize> = dec.positions_of(x).filter_map(|p| dec.interval_of[p]).collect();
        if gaps.iter().any(|&j| j != a && j != b && j != c) {
            continue;
        }
        let has = |j| gaps.contains(&j);
        let tag = match (has(a), has(b), has(c)) {
            (true, true, _) => Tag::AB,
            (false, true, true) => Tag::BC,
            (true, false, true) => Tag::AC,
            _ => return Err(Error::internal(format!("vertex {x} lies in a single interval"))),
        };
        tags.insert(x, tag);
    }
    let at = |j: usize| dec.u_sequence[(rotation + j) % k];
    Ok(IntervalLabels { rotation, anchors: [at(0), at(1), at(2), at(k - 1)], tags })
}

/// Parts I and II of the construction under `labels`: a cover tour from
/// `v₁` ending at `v` in which `v₁` occurs once. The output is checked; a
/// failure is an internal error, never a silent result.
pub fn build_v1_to_v_tour(g: &Digraph, dec: &ProofDecomposition, labels: &IntervalLabels) -> Result<Walk> {
    let k = dec.u_sequence.len();
    let r = labels.rotation;
    if k < 3 || r >= k {
        return Err(Error::arg("labels do not fit this decomposition"));
    }
    let idx = |j: usize| (r + j) % k;
    let at = |j: usize| dec.u_sequence[idx(j)];
    if labels.anchors != [at(0), at(1), at(2), at(k - 1)] {
        return Err(Error::arg("labels were computed for a different decomposition"));
    }
    let pos = |j: usize| dec.u_positions[idx(j)];
    let (a, b, c) = (idx(1), idx(0), idx(k - 1));

    // Tagged vertex whose occurrence in `interval` comes last.
    let last_in = |interval: usize, wanted: &[Tag]| -> Option<(usize, usize)> {
        let start = dec.u_positions[(interval + 1) % k];
        labels
            .tags
            .iter()
            .filter(|(_, t)| wanted.contains(t))
            .filter_map(|(&x, _)| {
                dec.positions_of(x)
                    .find(|&p| dec.interval_of[p] == Some(interval))
                    .map(|p| (x, p))
            })
            .max_by_key(|&(_, p)| dec.offset(start, p))
    };
    let occurrence = |x: usize, interval: usize| -> Result<usize> {
        dec.positions_of(x)
            .find(|&p| dec.interval_of[p] == Some(interval))
            .ok_or_else(|| Error::arg(format!("tagged vertex {x} missing from interval {interval}")))
    };

    let part1 = match last_in(b, &[Tag::BC]) {
        None => join(dec.w_path(idx(1), idx(k - 1)), dec.segment(pos(k - 1), pos(2)))?,
        Some((x, xb)) => join(dec.segment(pos(1), xb), dec.segment(occurrence(x, c)?, pos(2)))?,
    };
    let part2 = match last_in(a, &[Tag::AB, Tag::AC]) {
        None => dec.w_path(idx(2), idx(0)),
        Some((y, ya)) => {
            let head = dec.segment(pos(2), ya);
            if labels.tags[&y] == Tag::AB {
                join(head, dec.segment(occurrence(y, b)?, pos(0)))?
            } else {
                let mid = join(head, dec.segment(occurrence(y, c)?, pos(k - 1)))?;
                join(mid, dec.w_path(idx(k - 1), idx(0)))?
            }
        }
    };
    let tour = join(part1, part2)?;

    let (v, v1) = (at(0), at(1));
    if !is_no_revisit_walk(g, v1, v, &tour, NoRevisitReading::CoverTour) {
        return Err(Error::internal(format!(
            "construction gave {tour:?}, not a cover tour from {v1} to {v} avoiding {v1}"
        )));
    }
    Walk::new(g, tour).map_err(|e| Error::internal(e.to_string()))
}

/// Concatenates two walks that share the joining vertex.
fn join(mut first: Vec<usize>, second: Vec<usize>) -> Result<Vec<usize>> {
    match (first.last(), second.first()) {
        (Some(a), Some(b)) if a == b => {
            first.extend_from_slice(&second[1..]);
            Ok(first)
        }
        _ => Err(Error::internal(format!("cannot join {first:?} to {second:?}"))),
    }
}
