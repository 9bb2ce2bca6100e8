//! Brute-force canonical forms: the lexicographically smallest row-major
//! adjacency bitstring over all vertex relabelings.

use std::fmt;

use itertools::Itertools;
use serde::{Serialize, Serializer};

use super::Digraph;
use crate::error::{Error, Result};

/// Largest graph `canonical_form` accepts (`n!` permutations, `n²` bits).
pub const MAX_CANONICAL_VERTICES: usize = 8;

/// Adjacency bitstring packed MSB-first into a `u64`, so numeric order on
/// equal-`n` forms is lexicographic order on the strings.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalForm {
    n: usize,
    bits: u64,
}

impl CanonicalForm {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bit(&self, row: usize, col: usize) -> bool {
        let len = self.n * self.n;
        self.bits >> (len - 1 - (row * self.n + col)) & 1 == 1
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.n {
            for c in 0..self.n {
                f.write_str(if self.bit(r, c) { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn encode(g: &Digraph, relabel: &[usize]) -> u64 {
    // Row i of the relabeled graph is row relabel[i] of g.
    let mut bits = 0u64;
    for &a in relabel {
        let row = g.out_mask(a);
        for &b in relabel {
            bits = bits << 1 | u64::from(row >> b & 1);
        }
    }
    bits
}

pub fn canonical_form(g: &Digraph) -> Result<CanonicalForm> {
    let n = g.n();
    if n > MAX_CANONICAL_VERTICES {
        return Err(Error::TooLarge { n, max: MAX_CANONICAL_VERTICES });
    }
    let bits = (0..n)
        .permutations(n)
        .map(|p| encode(g, &p))
        .min()
        .expect("at least one permutation");
    Ok(CanonicalForm { n, bits })
}
