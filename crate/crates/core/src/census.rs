//! Exhaustive census of small labeled digraphs: which strongly connected
//! ones are last-visit uniform, and are they exactly the bidirected cycles
//! and complete graphs?

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::digraph::{
    canonical_form, full_set, generate, serialize_digraph, CanonicalForm, Digraph, Family,
    VertexSet,
};
use crate::engine::{ExactSolver, LastVisitSolver};
use crate::error::{Error, Result};
use crate::par::{self, Execution};

/// Largest `n` for the exhaustive census (2²⁰ labeled digraphs).
pub const MAX_EXHAUSTIVE_VERTICES: usize = 5;
/// Largest `n` for the sampled census.
pub const MAX_SAMPLED_VERTICES: usize = 7;

/// Number of labeled simple digraphs on `n` vertices, `2^(n(n−1))`.
pub fn labeled_digraph_count(n: usize) -> Result<u64> {
    if !(1..=8).contains(&n) {
        return Err(Error::arg(format!("labeled digraph count needs 1 ≤ n ≤ 8, got {n}")));
    }
    Ok(1u64 << (n * (n - 1)))
}

fn masks_from_code(n: usize, code: u64) -> [VertexSet; 8] {
    // Bit k of `code` is the k-th ordered pair (a, b), a ≠ b, row-major.
    let mut out = [0; 8];
    let mut k = 0;
    for (a, row) in out.iter_mut().enumerate().take(n) {
        for b in (0..n).filter(|&b| b != a) {
            if code >> k & 1 == 1 {
                *row |= 1 << b;
            }
            k += 1;
        }
    }
    out
}

fn strongly_connected_masks(masks: &[VertexSet]) -> bool {
    let full = full_set(masks.len());
    let reach = |forward: bool| {
        let mut seen: VertexSet = 1;
        let mut frontier: VertexSet = 1;
        while frontier != 0 {
            let mut next = 0;
            for v in crate::digraph::bits(frontier) {
                next |= if forward {
                    masks[v]
                } else {
                    masks
                        .iter()
                        .enumerate()
                        .filter(|(_, &m)| m & (1 << v) != 0)
                        .fold(0, |acc, (a, _)| acc | 1 << a)
                };
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen
    };
    reach(true) == full && reach(false) == full
}

/// The labeled digraph with adjacency code `code`.
pub fn digraph_from_mask(n: usize, code: u64) -> Result<Digraph> {
    let total = labeled_digraph_count(n)?;
    if code >= total {
        return Err(Error::arg(format!("adjacency code {code} out of range for n = {n}")));
    }
    Digraph::from_out_masks(masks_from_code(n, code)[..n].to_vec())
}

/// Every labeled simple digraph on `n` vertices, once each, by code order.
pub fn enumerate_labeled_digraphs(n: usize) -> Result<impl Iterator<Item = Digraph>> {
    if !(2..=MAX_EXHAUSTIVE_VERTICES).contains(&n) {
        return Err(Error::arg(format!("census enumeration needs 2 ≤ n ≤ 5, got {n}")));
    }
    let total = labeled_digraph_count(n)?;
    Ok((0..total).map(move |code| digraph_from_mask(n, code).expect("code in range")))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Prefilter {
    Exact,
    #[default]
    FloatThenExact,
}

impl FromStr for Prefilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Prefilter::Exact),
            "float-then-exact" | "float" => Ok(Prefilter::FloatThenExact),
            other => Err(Error::arg(format!("unknown census mode `{other}`"))),
        }
    }
}

impl fmt::Display for Prefilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Prefilter::Exact => "exact",
            Prefilter::FloatThenExact => "float-then-exact",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub prefilter: Prefilter,
    /// Max deviation of a float entry from `1/(n−1)` that still counts as a
    /// uniform candidate.
    pub tolerance: f64,
    /// Percentage of prefilter-rejected graphs re-checked exactly.
    pub audit_percent: u64,
    pub audit_seed: u64,
    pub execution: Execution,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            prefilter: Prefilter::FloatThenExact,
            tolerance: 1e-9,
            audit_percent: 1,
            audit_seed: 0x5eed_c0de,
            execution: Execution::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UniformFamily {
    Cycle,
    Complete,
    #[serde(rename = "cycle=complete")]
    CycleAndComplete,
    Other,
}

impl fmt::Display for UniformFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UniformFamily::Cycle => "cycle",
            UniformFamily::Complete => "complete",
            UniformFamily::CycleAndComplete => "cycle=complete",
            UniformFamily::Other => "other",
        })
    }
}

/// Families a passing exhaustive census must find, exactly.
pub fn expected_families(n: usize) -> BTreeSet<UniformFamily> {
    match n {
        0..=2 => [UniformFamily::Complete].into(),
        3 => [UniformFamily::CycleAndComplete].into(),
        _ => [UniformFamily::Cycle, UniformFamily::Complete].into(),
    }
}

pub fn classify(g: &Digraph) -> Result<UniformFamily> {
    let n = g.n();
    let form = canonical_form(g)?;
    let is_complete = form == canonical_form(&generate(Family::Complete, n)?)?;
    let is_cycle = n >= 3 && form == canonical_form(&generate(Family::Cycle, n)?)?;
    Ok(match (is_cycle, is_complete) {
        (true, true) => UniformFamily::CycleAndComplete,
        (true, false) => UniformFamily::Cycle,
        (false, true) => UniformFamily::Complete,
        (false, false) => UniformFamily::Other,
    })
}

/// One isomorphism class of uniform digraphs found by the census.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformClass {
    pub canonical_form: CanonicalForm,
    pub family: UniformFamily,
    pub labeled_count: u64,
    pub all_bidirected: bool,
    /// Representative in graph-text form.
    pub example: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CensusScope {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub scope: CensusScope,
    pub prefilter: Prefilter,
    pub total: u64,
    pub strongly_connected: u64,
    pub uniform: u64,
    pub classes: Vec<UniformClass>,
    /// Prefilter candidates the exact check rejected.
    pub float_false_positives: u64,
    pub audit_sampled: u64,
    /// Audited graphs the prefilter rejected but the exact check found uniform.
    pub audit_failures: Vec<u64>,
    pub wall_time_ms: u128,
}

impl CensusReport {
    pub fn families(&self) -> BTreeSet<UniformFamily> {
        self.classes.iter().map(|c| c.family).collect()
    }

    pub fn other_count(&self) -> usize {
        self.classes.iter().filter(|c| c.family == UniformFamily::Other).count()
    }

    pub fn passed(&self) -> bool {
        let structural = self.other_count() == 0
            && self.classes.iter().all(|c| c.all_bidirected)
            && self.audit_failures.is_empty();
        match self.scope {
            CensusScope::Exhaustive => structural && self.families() == expected_families(self.n),
            CensusScope::Sampled { .. } => structural,
        }
    }

    /// Everything except wall time, for determinism checks.
    pub fn same_result(&self, other: &CensusReport) -> bool {
        self.n == other.n
            && self.scope == other.scope
            && self.total == other.total
            && self.strongly_connected == other.strongly_connected
            && self.uniform == other.uniform
            && self.classes == other.classes
            && self.float_false_positives == other.float_false_positives
            && self.audit_sampled == other.audit_sampled
            && self.audit_failures == other.audit_failures
    }

    pub fn verdict_line(&self) -> String {
        let fams: Vec<String> = self.families().iter().map(ToString::to_string).collect();
        format!(
            "{}: n={} uniform families {{{}}}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.n,
            fams.join(", ")
        )
    }
}

#[derive(Default)]
struct Tally {
    strongly_connected: u64,
    uniform_codes: Vec<u64>,
    float_false_positives: u64,
    audit_sampled: u64,
    audit_failures: Vec<u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.strongly_connected += other.strongly_connected;
        self.uniform_codes.extend(other.uniform_codes);
        self.float_false_positives += other.float_false_positives;
        self.audit_sampled += other.audit_sampled;
        self.audit_failures.extend(other.audit_failures);
        self
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Exact uniformity, stopping at the first non-flat row.
fn exact_uniform(g: &Digraph) -> bool {
    let solver = ExactSolver::new(g)
        .expect("census only solves strongly connected graphs")
        .with_execution(Execution::Sequential);
    (0..g.n()).all(|u| {
        let row = solver.row(u).expect("u in range");
        let v = usize::from(u == 0);
        row.iter().enumerate().all(|(w, p)| w == u || *p == row[v])
    })
}

fn float_uniform(g: &Digraph, tol: f64) -> bool {
    LastVisitSolver::<f64>::new(g)
        .expect("census only solves strongly connected graphs")
        .with_execution(Execution::Sequential)
        .is_uniform_approx(tol)
}

fn tally_one(n: usize, code: u64, cfg: &CensusConfig, mut t: Tally) -> Tally {
    let masks = masks_from_code(n, code);
    if !strongly_connected_masks(&masks[..n]) {
        return t;
    }
    t.strongly_connected += 1;
    let g = Digraph::from_out_masks(masks[..n].to_vec()).expect("valid code");
    match cfg.prefilter {
        Prefilter::Exact => {
            if exact_uniform(&g) {
                t.uniform_codes.push(code);
            }
        }
        Prefilter::FloatThenExact => {
            if float_uniform(&g, cfg.tolerance) {
                if exact_uniform(&g) {
                    t.uniform_codes.push(code);
                } else {
                    t.float_false_positives += 1;
                }
            } else if splitmix64(code ^ cfg.audit_seed) % 100 < cfg.audit_percent {
                t.audit_sampled += 1;
                if exact_uniform(&g) {
                    t.audit_failures.push(code);
                }
            }
        }
    }
    t
}

fn summarize(
    n: usize,
    scope: CensusScope,
    total: u64,
    cfg: &CensusConfig,
    mut tally: Tally,
    started: Instant,
) -> Result<CensusReport> {
    tally.uniform_codes.sort_unstable();
    tally.uniform_codes.dedup();
    tally.audit_failures.sort_unstable();

    let mut classes: BTreeMap<CanonicalForm, UniformClass> = BTreeMap::new();
    for &code in &tally.uniform_codes {
        let g = digraph_from_mask(n, code)?;
        let form = canonical_form(&g)?;
        match classes.get_mut(&form) {
            Some(c) => {
                c.labeled_count += 1;
                c.all_bidirected &= g.is_fully_bidirected();
            }
            None => {
                classes.insert(
                    form,
                    UniformClass {
                        canonical_form: form,
                        family: classify(&g)?,
                        labeled_count: 1,
                        all_bidirected: g.is_fully_bidirected(),
                        example: serialize_digraph(&g),
                    },
                );
            }
        }
    }

    Ok(CensusReport {
        n,
        scope,
        prefilter: cfg.prefilter,
        total,
        strongly_connected: tally.strongly_connected,
        uniform: tally.uniform_codes.len() as u64,
        classes: classes.into_values().collect(),
        float_false_positives: tally.float_false_positives,
        audit_sampled: tally.audit_sampled,
        audit_failures: tally.audit_failures,
        wall_time_ms: started.elapsed().as_millis(),
    })
}

pub fn run_census(n: usize, prefilter: Prefilter) -> Result<CensusReport> {
    run_census_with(n, &CensusConfig { prefilter, ..CensusConfig::default() })
}

pub fn run_census_with(n: usize, cfg: &CensusConfig) -> Result<CensusReport> {
    if !(2..=MAX_EXHAUSTIVE_VERTICES).contains(&n) {
        return Err(Error::arg(format!("exhaustive census needs 2 ≤ n ≤ 5, got {n}")));
    }
    let started = Instant::now();
    let total = labeled_digraph_count(n)?;
    let tally = par::fold_range(
        cfg.execution,
        0..total,
        Tally::default,
        |t, code| tally_one(n, code, cfg, t),
        Tally::merge,
    );
    summarize(n, CensusScope::Exhaustive, total, cfg, tally, started)
}

/// Census over `samples` uniformly random labeled digraphs (with
/// replacement), for sizes where exhaustive enumeration is out of reach.
pub fn run_census_sample(n: usize, samples: u64, seed: u64, cfg: &CensusConfig) -> Result<CensusReport> {
    if !(2..=MAX_SAMPLED_VERTICES).contains(&n) {
        return Err(Error::arg(format!("sampled census needs 2 ≤ n ≤ 7, got {n}")));
    }
    if samples == 0 {
        return Err(Error::arg("sampled census needs at least one sample"));
    }
    let started = Instant::now();
    let total = labeled_digraph_count(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let codes: Vec<u64> = (0..samples).map(|_| rng.random_range(0..total)).collect();
    let tally = par::fold_range(
        cfg.execution,
        0..samples,
        Tally::default,
        |t, i| tally_one(n, codes[i as usize], cfg, t),
        Tally::merge,
    );
    summarize(n, CensusScope::Sampled { samples, seed }, samples, cfg, tally, started)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_labeled_digraphs(2).unwrap().count(), 4);
        assert_eq!(enumerate_labeled_digraphs(3).unwrap().count(), 64);
        assert_eq!(labeled_digraph_count(5).unwrap(), 1_048_576);
        assert!(enumerate_labeled_digraphs(1).is_err());
        assert!(enumerate_labeled_digraphs(6).is_err());
    }

    #[test]
    fn enumeration_is_exhaustive_and_distinct() {
        let all: BTreeSet<Vec<(usize, usize)>> = enumerate_labeled_digraphs(3)
            .unwrap()
            .map(|g| g.arcs().collect())
            .collect();
        assert_eq!(all.len(), 64);
    }

    #[test]
    fn code_layout_is_row_major() {
        let g = digraph_from_mask(3, 0b000001).unwrap();
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(0, 1)]);
        let g = digraph_from_mask(3, 0b000100).unwrap();
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(1, 0)]);
        assert!(digraph_from_mask(3, 64).is_err());
    }

    #[test]
    fn mask_connectivity_matches_digraph() {
        for g in enumerate_labeled_digraphs(4).unwrap() {
            let masks: Vec<u32> = (0..4).map(|v| g.out_mask(v)).collect();
            assert_eq!(strongly_connected_masks(&masks), g.is_strongly_connected());
        }
    }

    #[test]
    fn strongly_connected_counts() {
        // Labeled strongly connected digraphs: 1, 18, 1606 for n = 2, 3, 4.
        for (n, expect) in [(2, 1), (3, 18), (4, 1606)] {
            let r = run_census(n, Prefilter::FloatThenExact).unwrap();
            assert_eq!(r.strongly_connected, expect);
        }
    }

    #[test]
    fn census_small() {
        let r = run_census(2, Prefilter::Exact).unwrap();
        assert!(r.passed());
        assert_eq!(r.families(), [UniformFamily::Complete].into());

        let r = run_census(3, Prefilter::Exact).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.classes.len(), 1);
        assert_eq!(r.classes[0].family, UniformFamily::CycleAndComplete);
        assert_eq!(r.uniform, 1);
    }

    #[test]
    fn census_n4_both_modes_agree() {
        let exact = run_census(4, Prefilter::Exact).unwrap();
        let float = run_census(4, Prefilter::FloatThenExact).unwrap();
        assert!(exact.passed() && float.passed());
        assert_eq!(exact.classes, float.classes);
        assert_eq!(exact.uniform, float.uniform);
        // 3 labeled C₄ plus one K₄.
        assert_eq!(exact.uniform, 4);
        assert_eq!(float.audit_failures, Vec::<u64>::new());
        assert!(float.audit_sampled > 0);
    }

    #[test]
    fn sequential_and_parallel_reports_match() {
        let cfg = |execution| CensusConfig { execution, ..CensusConfig::default() };
        let a = run_census_with(4, &cfg(Execution::Sequential)).unwrap();
        let b = run_census_with(4, &cfg(Execution::Parallel)).unwrap();
        assert!(a.same_result(&b));
    }

    #[test]
    fn classify_families() {
        assert_eq!(classify(&generate(Family::Cycle, 5).unwrap()).unwrap(), UniformFamily::Cycle);
        assert_eq!(
            classify(&generate(Family::Complete, 3).unwrap()).unwrap(),
            UniformFamily::CycleAndComplete
        );
        assert_eq!(classify(&generate(Family::Path, 4).unwrap()).unwrap(), UniformFamily::Other);
    }

    #[test]
    fn sampled_census_is_deterministic() {
        let cfg = CensusConfig::default();
        let a = run_census_sample(6, 300, 17, &cfg).unwrap();
        let b = run_census_sample(6, 300, 17, &cfg).unwrap();
        assert!(a.same_result(&b));
        assert!(a.passed());
        assert!(run_census_sample(8, 10, 1, &cfg).is_err());
        assert!(run_census_sample(6, 0, 1, &cfg).is_err());
    }

    #[test]
    fn report_line() {
        let r = run_census(3, Prefilter::FloatThenExact).unwrap();
        assert_eq!(r.verdict_line(), "PASS: n=3 uniform families {cycle=complete}");
    }
}
