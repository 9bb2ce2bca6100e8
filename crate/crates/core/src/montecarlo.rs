//! Seeded simulation of random cover tours.
//!
//! Trial `i` of a run seeded with `seed` draws from
//! `ChaCha8Rng::seed_from_u64(seed + i)`, so trials are independent of
//! scheduling and a summary is a pure function of `(G, u, trials, seed)`.
//! Each step picks an out-neighbour with `random_range`, which is unbiased
//! (rejection sampling, no modulo bias).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::digraph::{validate_cover_tour, Digraph};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::rational::{to_f64, Rational};

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000_000;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial))
}

/// One cover tour from `u`, as a vertex sequence. Fails if the tour runs
/// past `max_steps`, which only happens when the graph is not strongly
/// connected.
pub fn simulate_walk<R: Rng + ?Sized>(
    g: &Digraph,
    u: usize,
    rng: &mut R,
    max_steps: u64,
) -> Result<Vec<usize>> {
    g.check_vertex(u)?;
    let full = g.full_set();
    let mut seen = 1u32 << u;
    let mut walk = vec![u];
    let mut at = u;
    let mut steps = 0u64;
    while seen != full {
        if steps == max_steps {
            return Err(Error::internal(format!(
                "cover tour from {u} exceeded {max_steps} steps"
            )));
        }
        let nbrs = g.out_neighbors(at);
        if nbrs.is_empty() {
            return Err(Error::NotStronglyConnected);
        }
        at = nbrs[rng.random_range(0..nbrs.len())];
        seen |= 1 << at;
        walk.push(at);
        steps += 1;
    }
    Ok(walk)
}

pub fn simulate_cover_tour<R: Rng + ?Sized>(g: &Digraph, u: usize, rng: &mut R) -> Result<crate::CoverTour> {
    g.require_strongly_connected()?;
    let walk = simulate_walk(g, u, rng, DEFAULT_MAX_STEPS)?;
    crate::CoverTour::new(g, walk)
}

#[derive(Clone, Debug)]
pub struct SimulationConfig {
    pub max_steps: u64,
    pub execution: Execution,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig { max_steps: DEFAULT_MAX_STEPS, execution: Execution::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialSummary {
    pub start: usize,
    pub trials: u64,
    pub seed: u64,
    /// `counts[v]` = number of tours whose last new vertex was `v`.
    pub counts: Vec<u64>,
    /// Arcs traversed, summed over all tours.
    pub total_steps: u64,
    pub max_tour_length: u64,
    /// Tours rejected by the independent cover-tour validator (always 0
    /// unless something is broken).
    pub invalid_tours: u64,
}

impl TrialSummary {
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.trials as f64).collect()
    }
}

#[derive(Clone)]
struct Partial {
    counts: Vec<u64>,
    total_steps: u64,
    max_len: u64,
    invalid: u64,
    error: Option<Error>,
}

impl Partial {
    fn new(n: usize) -> Self {
        Partial { counts: vec![0; n], total_steps: 0, max_len: 0, invalid: 0, error: None }
    }

    fn merge(mut self, other: Partial) -> Partial {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total_steps += other.total_steps;
        self.max_len = self.max_len.max(other.max_len);
        self.invalid += other.invalid;
        self.error = self.error.or(other.error);
        self
    }
}

pub fn empirical_last_visit(g: &Digraph, u: usize, trials: u64, seed: u64) -> Result<TrialSummary> {
    empirical_last_visit_with(g, u, trials, seed, &SimulationConfig::default())
}

pub fn empirical_last_visit_with(
    g: &Digraph,
    u: usize,
    trials: u64,
    seed: u64,
    cfg: &SimulationConfig,
) -> Result<TrialSummary> {
    if trials == 0 {
        return Err(Error::arg("need at least one trial"));
    }
    g.check_vertex(u)?;
    g.require_strongly_connected()?;
    let n = g.n();

    let total = par::fold_range(
        cfg.execution,
        0..trials,
        || Partial::new(n),
        |mut p, i| {
            if p.error.is_some() {
                return p;
            }
            match simulate_walk(g, u, &mut trial_rng(seed, i), cfg.max_steps) {
                Ok(walk) => {
                    if !validate_cover_tour(g, &walk) {
                        p.invalid += 1;
                    }
                    let len = walk.len() as u64 - 1;
                    p.counts[*walk.last().unwrap()] += 1;
                    p.total_steps += len;
                    p.max_len = p.max_len.max(len);
                }
                Err(e) => p.error = Some(e),
            }
            p
        },
        Partial::merge,
    );
    if let Some(e) = total.error {
        return Err(e);
    }
    Ok(TrialSummary {
        start: u,
        trials,
        seed,
        counts: total.counts,
        total_steps: total.total_steps,
        max_tour_length: total.max_len,
        invalid_tours: total.invalid,
    })
}

/// Half the L1 distance between empirical frequencies and an exact row.
pub fn tv_distance(summary: &TrialSummary, exact: &[Rational]) -> Result<f64> {
    if summary.counts.len() != exact.len() {
        return Err(Error::arg(format!(
            "summary has {} vertices, exact row has {}",
            summary.counts.len(),
            exact.len()
        )));
    }
    Ok(summary
        .frequencies()
        .iter()
        .zip(exact)
        .map(|(f, p)| (f - to_f64(p)).abs())
        .sum::<f64>()
        / 2.0)
}
