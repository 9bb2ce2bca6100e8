use serde::Serialize;

use super::Digraph;
use crate::error::{Error, Result};

/// A nonempty vertex sequence in which consecutive vertices are joined by arcs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Walk(Vec<usize>);

impl Walk {
    pub fn new(g: &Digraph, vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::arg("a walk needs at least one vertex"));
        }
        for &v in &vertices {
            g.check_vertex(v)?;
        }
        if let Some(w) = vertices.windows(2).find(|w| !g.has_arc(w[0], w[1])) {
            return Err(Error::arg(format!("walk uses missing arc {}→{}", w[0], w[1])));
        }
        Ok(Walk(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.0
    }

    pub fn start(&self) -> usize {
        self.0[0]
    }

    pub fn end(&self) -> usize {
        *self.0.last().unwrap()
    }

    /// Number of arcs traversed.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() == 1
    }

    pub fn occurrences(&self, v: usize) -> usize {
        self.0.iter().filter(|&&x| x == v).count()
    }
}

/// A walk that visits every vertex and whose final vertex is visited for
/// the first time at the final step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct CoverTour(Walk);

impl CoverTour {
    pub fn new(g: &Digraph, vertices: Vec<usize>) -> Result<Self> {
        if !validate_cover_tour(g, &vertices) {
            return Err(Error::arg(format!("{vertices:?} is not a cover tour")));
        }
        Ok(CoverTour(Walk(vertices)))
    }

    pub fn walk(&self) -> &Walk {
        &self.0
    }

    pub fn vertices(&self) -> &[usize] {
        self.0.vertices()
    }

    pub fn start(&self) -> usize {
        self.0.start()
    }

    pub fn last(&self) -> usize {
        self.0.end()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<CoverTour> for Walk {
    fn from(t: CoverTour) -> Walk {
        t.0
    }
}

pub fn validate_cover_tour(g: &Digraph, w: &[usize]) -> bool {
    let Some((&last, body)) = w.split_last() else {
        return false;
    };
    if w.iter().any(|&v| v >= g.n()) || body.contains(&last) {
        return false;
    }
    if !w.windows(2).all(|p| g.has_arc(p[0], p[1])) {
        return false;
    }
    let seen = w.iter().fold(0u32, |m, &v| m | (1 << v));
    seen == g.full_set()
}
