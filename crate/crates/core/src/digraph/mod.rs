//! Simple directed graphs on at most 24 vertices, stored as sorted
//! out-neighbour lists plus per-vertex bitmasks.

mod canon;
mod text;
mod walk;

use std::fmt;
use std::str::FromStr;

pub use canon::{canonical_form, CanonicalForm, MAX_CANONICAL_VERTICES};
pub use text::{parse_digraph, serialize_digraph, ParseError, ParseErrorKind};
pub use walk::{validate_cover_tour, CoverTour, Walk};

use crate::error::{Error, Result};

/// Hard ceiling on vertex count; vertex sets are `u32` bitmasks.
pub const MAX_VERTICES: usize = 24;

/// A set of vertices, bit `i` set iff vertex `i` is a member.
pub type VertexSet = u32;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out: Vec<Vec<usize>>,
    out_mask: Vec<VertexSet>,
    in_mask: Vec<VertexSet>,
}

impl Digraph {
    /// Graph on `n` vertices with no arcs.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::arg("a digraph needs at least one vertex"));
        }
        if n > MAX_VERTICES {
            return Err(Error::TooLarge { n, max: MAX_VERTICES });
        }
        Ok(Digraph {
            n,
            out: vec![Vec::new(); n],
            out_mask: vec![0; n],
            in_mask: vec![0; n],
        })
    }

    /// Builds a digraph from an arc list. Duplicate arcs collapse; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n)?;
        for (a, b) in arcs {
            g.check_vertex(a)?;
            g.check_vertex(b)?;
            if a == b {
                return Err(Error::arg(format!("self-loop at vertex {a}")));
            }
            g.out_mask[a] |= 1 << b;
            g.in_mask[b] |= 1 << a;
        }
        g.rebuild_lists();
        Ok(g)
    }

    /// Builds a digraph from out-neighbour masks. Bits on the diagonal or
    /// beyond `n` are rejected.
    pub fn from_out_masks(out_mask: Vec<VertexSet>) -> Result<Self> {
        let n = out_mask.len();
        let mut g = Self::empty(n)?;
        let full = g.full_set();
        for (a, &m) in out_mask.iter().enumerate() {
            if m & !full != 0 {
                return Err(Error::arg(format!("out-mask of {a} names a vertex ≥ {n}")));
            }
            if m & (1 << a) != 0 {
                return Err(Error::arg(format!("self-loop at vertex {a}")));
            }
            g.out_mask[a] = m;
            for b in bits(m) {
                g.in_mask[b] |= 1 << a;
            }
        }
        g.rebuild_lists();
        Ok(g)
    }

    fn rebuild_lists(&mut self) {
        for (list, &m) in self.out.iter_mut().zip(&self.out_mask) {
            list.clear();
            list.extend(bits(m));
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Mask with every vertex of the graph.
    pub fn full_set(&self) -> VertexSet {
        full_set(self.n)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Out-neighbours of `u`, ascending.
    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out[u].len()
    }

    pub fn out_mask(&self, u: usize) -> VertexSet {
        self.out_mask[u]
    }

    pub fn in_mask(&self, u: usize) -> VertexSet {
        self.in_mask[u]
    }

    pub fn in_neighbors(&self, u: usize) -> impl Iterator<Item = usize> {
        bits(self.in_mask[u])
    }

    pub fn has_arc(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.out_mask[a] & (1 << b) != 0
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().map(move |&b| (a, b)))
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// True iff the reverse of every arc is also an arc.
    pub fn is_fully_bidirected(&self) -> bool {
        (0..self.n).all(|a| self.out_mask[a] == self.in_mask[a])
    }

    /// First arc `a→b` (lexicographic) whose reverse `b→a` is missing.
    pub fn first_unpaired_arc(&self) -> Option<(usize, usize)> {
        self.arcs().find(|&(a, b)| !self.has_arc(b, a))
    }

    /// Copy of this graph with one more arc.
    pub fn with_arc(&self, a: usize, b: usize) -> Result<Self> {
        Self::from_arcs(self.n, self.arcs().chain(std::iter::once((a, b))))
    }

    /// Relabels vertex `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::arg("permutation length differs from vertex count"));
        }
        let mut seen = 0u32;
        for &p in perm {
            self.check_vertex(p)?;
            seen |= 1 << p;
        }
        if seen != self.full_set() {
            return Err(Error::arg("not a permutation"));
        }
        Self::from_arcs(self.n, self.arcs().map(|(a, b)| (perm[a], perm[b])))
    }

    /// Vertices reachable from `start` (including `start`) along arcs.
    pub fn reachable_from(&self, start: usize) -> VertexSet {
        closure(start, &self.out_mask)
    }

    /// Vertices that can reach `target`.
    pub fn reaching(&self, target: usize) -> VertexSet {
        closure(target, &self.in_mask)
    }

    /// True iff every vertex reaches every other vertex.
    pub fn is_strongly_connected(&self) -> bool {
        let full = self.full_set();
        self.reachable_from(0) == full && self.reaching(0) == full
    }

    pub(crate) fn require_strongly_connected(&self) -> Result<()> {
        if self.is_strongly_connected() {
            Ok(())
        } else {
            Err(Error::NotStronglyConnected)
        }
    }
}

fn closure(start: usize, adj: &[VertexSet]) -> VertexSet {
    let mut seen: VertexSet = 1 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0;
        for v in bits(frontier) {
            next |= adj[v];
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen
}

pub fn is_strongly_connected(g: &Digraph) -> bool {
    g.is_strongly_connected()
}

/// Serializes as `{"n": …, "arcs": [[a, b], …]}`.
impl serde::Serialize for Digraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let arcs: Vec<(usize, usize)> = self.arcs().collect();
        let mut st = s.serialize_struct("Digraph", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("arcs", &arcs)?;
        st.end()
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, arcs=[", self.n)?;
        for (i, (a, b)) in self.arcs().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}->{b}")?;
        }
        f.write_str("])")
    }
}

/// Mask with the low `n` bits set.
pub fn full_set(n: usize) -> VertexSet {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Iterates the members of a vertex set in ascending order.
pub fn bits(mut set: VertexSet) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            None
        } else {
            let i = set.trailing_zeros() as usize;
            set &= set - 1;
            Some(i)
        }
    })
}

/// Generator families: the two last-visit-uniform families plus controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Bidirected cycle `i ↔ i+1 (mod n)`.
    Cycle,
    /// Every ordered pair.
    Complete,
    /// Bidirected path `0 – 1 – … – n−1`.
    Path,
    /// One-way cycle `i → i+1 (mod n)`.
    DirectedCycle,
}

impl Family {
    pub fn min_vertices(self) -> usize {
        match self {
            Family::Cycle | Family::DirectedCycle => 3,
            Family::Complete | Family::Path => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::Path => "path",
            Family::DirectedCycle => "directed-cycle",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle" => Ok(Family::Cycle),
            "complete" => Ok(Family::Complete),
            "path" => Ok(Family::Path),
            "directed-cycle" => Ok(Family::DirectedCycle),
            other => Err(Error::arg(format!("unknown graph family `{other}`"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn generate(kind: Family, n: usize) -> Result<Digraph> {
    if n < kind.min_vertices() {
        return Err(Error::arg(format!(
            "{kind} needs at least {} vertices, got {n}",
            kind.min_vertices()
        )));
    }
    let arcs: Vec<(usize, usize)> = match kind {
        Family::Cycle => (0..n)
            .flat_map(|i| [(i, (i + 1) % n), ((i + 1) % n, i)])
            .collect(),
        Family::Complete => (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect(),
        Family::Path => (0..n - 1).flat_map(|i| [(i, i + 1), (i + 1, i)]).collect(),
        Family::DirectedCycle => (0..n).map(|i| (i, (i + 1) % n)).collect(),
    };
    Digraph::from_arcs(n, arcs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arcs(g: &Digraph) -> Vec<(usize, usize)> {
        g.arcs().collect()
    }

    #[test]
    fn generators_match_examples() {
        let k3 = generate(Family::Complete, 3).unwrap();
        assert_eq!(arcs(&k3), vec![(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]);

        let c4 = generate(Family::Cycle, 4).unwrap();
        assert_eq!(c4.arc_count(), 8);
        for i in 0..4 {
            assert!(c4.has_arc(i, (i + 1) % 4) && c4.has_arc((i + 1) % 4, i));
        }

        let d3 = generate(Family::DirectedCycle, 3).unwrap();
        assert_eq!(arcs(&d3), vec![(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn generator_minimums() {
        assert!(generate(Family::Cycle, 2).is_err());
        assert!(generate(Family::Complete, 1).is_err());
        assert!(generate(Family::Path, 2).is_ok());
        assert!(generate(Family::Path, 25).is_err());
    }

    #[test]
    fn strong_connectivity_examples() {
        assert!(generate(Family::DirectedCycle, 3).unwrap().is_strongly_connected());
        assert!(!Digraph::from_arcs(2, [(0, 1)]).unwrap().is_strongly_connected());
        assert!(generate(Family::Path, 4).unwrap().is_strongly_connected());
        assert!(Digraph::empty(1).unwrap().is_strongly_connected());
    }

    #[test]
    fn uniform_families_are_bidirected_and_strong() {
        for n in 3..=9 {
            for kind in [Family::Cycle, Family::Complete] {
                let g = generate(kind, n).unwrap();
                assert!(g.is_strongly_connected());
                assert!(g.is_fully_bidirected());
            }
        }
    }

    #[test]
    fn arcs_dedup_and_sorted() {
        let g = Digraph::from_arcs(3, [(2, 0), (0, 2), (0, 1), (0, 2)]).unwrap();
        assert_eq!(g.out_neighbors(0), &[1, 2]);
        assert_eq!(g.arc_count(), 3);
        assert_eq!(g.in_neighbors(2).collect::<Vec<_>>(), vec![0]);
        assert_eq!(g.first_unpaired_arc(), Some((0, 1)));
    }

    #[test]
    fn rejects_bad_arcs() {
        assert!(Digraph::from_arcs(3, [(1, 1)]).is_err());
        assert_eq!(
            Digraph::from_arcs(3, [(0, 3)]).unwrap_err(),
            Error::VertexOutOfRange { vertex: 3, n: 3 }
        );
        assert!(Digraph::from_out_masks(vec![0b01, 0]).is_err());
    }

    #[test]
    fn permutation_relabels() {
        let d3 = generate(Family::DirectedCycle, 3).unwrap();
        let p = d3.permuted(&[1, 2, 0]).unwrap();
        assert_eq!(arcs(&p), vec![(0, 1), (1, 2), (2, 0)]);
        let q = Digraph::from_arcs(3, [(0, 1)]).unwrap().permuted(&[2, 0, 1]).unwrap();
        assert_eq!(arcs(&q), vec![(2, 0)]);
        assert!(d3.permuted(&[0, 0, 1]).is_err());
    }
}
