//! Graphs on which the replay reaches the interval construction.
//!
//! Random strongly connected graphs rarely get that far: the first `W` arc
//! is usually missing. Starting from a random graph and its first unpaired
//! arc, the missing `W` arcs are planted one at a time (recomputing `T` and
//! `U` after each) until `W` is complete with at least three `U` vertices.
//! Runs that end in any other obstruction are discarded.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{build_decomposition, Obstruction, ProofDecomposition, Replay};
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::sample::random_strongly_connected;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlantedInstance {
    pub graph: Digraph,
    pub u: usize,
    pub v: usize,
    /// Arcs added to the random base graph, in order.
    pub planted: Vec<(usize, usize)>,
    pub decomposition: ProofDecomposition,
}

/// `count` instances, reproducible from `seed`. Vertex counts are drawn
/// from 5..=7.
pub fn planted_instances(count: usize, seed: u64) -> Result<Vec<PlantedInstance>> {
    const MAX_ATTEMPTS_PER_INSTANCE: usize = 2000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > MAX_ATTEMPTS_PER_INSTANCE * count.max(1) {
            return Err(Error::internal(format!(
                "only {} planted instances after {attempts} attempts",
                out.len()
            )));
        }
        let n = rng.random_range(5..=7);
        let density = rng.random_range(0.2..0.45);
        let base = random_strongly_connected(n, density, &mut rng)?;
        if let Some(inst) = plant(base)? {
            out.push(inst);
        }
    }
    Ok(out)
}

fn plant(mut g: Digraph) -> Result<Option<PlantedInstance>> {
    let Some((v, u)) = g.first_unpaired_arc() else {
        return Ok(None);
    };
    let mut planted = Vec::new();
    for _ in 0..g.n() * g.n() {
        match build_decomposition(&g, u, v)? {
            Replay::Obstruction(Obstruction::WEdgeMissing { from, to, .. }) => {
                g = g.with_arc(from, to)?;
                planted.push((from, to));
            }
            Replay::Decomposition(dec) if dec.u_sequence.len() >= 3 => {
                return Ok(Some(PlantedInstance { graph: g, u, v, planted, decomposition: dec }));
            }
            _ => return Ok(None),
        }
    }
    Ok(None)
}
