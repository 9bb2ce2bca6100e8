//! Seeded random digraphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::{Digraph, VertexSet};
use crate::error::Result;

/// Each ordered pair becomes an arc independently with probability `density`.
pub fn random_digraph<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> Result<Digraph> {
    let masks: Vec<VertexSet> = (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| b != a && rng.random_bool(density))
                .fold(0, |m, b| m | 1 << b)
        })
        .collect();
    Digraph::from_out_masks(masks)
}

/// Rejection-samples [`random_digraph`] until the result is strongly
/// connected. `density` should be large enough for that to be likely.
pub fn random_strongly_connected<R: Rng + ?Sized>(
    n: usize,
    density: f64,
    rng: &mut R,
) -> Result<Digraph> {
    loop {
        let g = random_digraph(n, density, rng)?;
        if g.is_strongly_connected() {
            return Ok(g);
        }
    }
}

/// `count` strongly connected digraphs, reproducible from `seed`.
pub fn strongly_connected_family(n: usize, count: usize, seed: u64) -> Result<Vec<Digraph>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let density = rng.random_range(0.3..0.8);
            random_strongly_connected(n, density, &mut rng)
        })
        .collect()
}
