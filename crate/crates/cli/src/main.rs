//! `covertour` command-line tool.
//!
//! Exit codes: 0 success, 1 usage / I/O / parse error, 2 precondition
//! violation, 3 a check failed.

mod source;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use covertour::census::{run_census_sample, run_census_with, CensusConfig, Prefilter, MAX_EXHAUSTIVE_VERTICES};
use covertour::engine::{last_visit_matrix, last_visit_row, LastVisitMatrix, Uniformity, MAX_EXACT_VERTICES};
use covertour::lemma::{Eq1Check, Lemma1Witness, LemmaContext};
use covertour::montecarlo::{empirical_last_visit_with, tv_distance, SimulationConfig, TrialSummary};
use covertour::proof::{certify_nonbidirected_implies_nonuniform, Certification};
use covertour::{Digraph, Error};

use source::GraphSource;

#[derive(Parser)]
#[command(name = "covertour", version, about = "Last-visit distributions of random cover tours on digraphs")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Exact last-visit matrix and uniformity verdict.
    Solve(GraphSource),
    /// Seeded simulation of cover tours from one start vertex.
    Simulate(SimulateArgs),
    /// Check the out-neighbour identity and inequality at one pair.
    Lemma(LemmaArgs),
    /// Certify that a graph with an unpaired arc is not uniform.
    Prove(GraphSource),
    /// Enumerate small digraphs and list the uniform ones.
    Census(CensusArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    graph: GraphSource,
    #[arg(long, default_value_t = 0)]
    start: usize,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Abort a tour after this many steps.
    #[arg(long, default_value_t = covertour::montecarlo::DEFAULT_MAX_STEPS)]
    max_steps: u64,
}

#[derive(Args)]
struct LemmaArgs {
    #[command(flatten)]
    graph: GraphSource,
    #[arg(long)]
    u: usize,
    #[arg(long)]
    v: usize,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    n: usize,
    /// `exact` or `float-then-exact`.
    #[arg(long, default_value = "float-then-exact")]
    mode: Prefilter,
    /// Check this many random labeled digraphs instead of all of them
    /// (required for n = 6, 7).
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// What a subcommand hands back: the report, and whether its checks passed.
struct Done {
    text: String,
    json: serde_json::Value,
    passed: bool,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli.command) {
        Ok(done) => {
            match cli.format {
                Format::Text => print!("{}", done.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&done.json).expect("serializable")),
            }
            ExitCode::from(if done.passed { 0 } else { 3 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse(_) => 1,
                e if e.is_precondition() => 2,
                _ => 3,
            })
        }
    }
}

fn run(cmd: &Command) -> Result<Done, Failure> {
    match cmd {
        Command::Solve(src) => solve(&src.load()?),
        Command::Simulate(args) => simulate(&args.graph.load()?, args),
        Command::Lemma(args) => lemma(&args.graph.load()?, args.u, args.v),
        Command::Prove(src) => prove(&src.load()?),
        Command::Census(args) => census(args),
    }
}

fn to_json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("report types serialize")
}

fn verdict(u: &Uniformity) -> &'static str {
    if u.uniform {
        "UNIFORM"
    } else {
        "NOT-UNIFORM"
    }
}

fn format_matrix(m: &LastVisitMatrix) -> String {
    let cells: Vec<Vec<String>> = m.rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "  {}", line.join("  "));
    }
    out
}

fn solve(g: &Digraph) -> Result<Done, Failure> {
    let m = last_visit_matrix(g)?;
    let uni = m.uniformity();
    let mut text = format!("n = {}, {} arcs\nP(L(u,v)), row u, column v:\n", g.n(), g.arc_count());
    text += &format_matrix(&m);
    let _ = write!(text, "verdict: {}", verdict(&uni));
    if let Some((u, v, w)) = uni.counterexample {
        let _ = write!(text, " (P(L({u},{v})) = {} but P(L({u},{w})) = {})", m.get(u, v), m.get(u, w));
    }
    text.push('\n');
    let json = serde_json::json!({
        "graph": to_json(g),
        "matrix": to_json(&m),
        "uniformity": to_json(&uni),
        "verdict": verdict(&uni),
    });
    Ok(Done { text, json, passed: true })
}

fn simulate(g: &Digraph, args: &SimulateArgs) -> Result<Done, Failure> {
    let cfg = SimulationConfig { max_steps: args.max_steps, ..SimulationConfig::default() };
    let s: TrialSummary = empirical_last_visit_with(g, args.start, args.trials, args.seed, &cfg)?;
    let exact = if g.n() >= 2 && g.n() <= MAX_EXACT_VERTICES {
        Some(last_visit_row(g, args.start)?)
    } else {
        None
    };
    let tv = exact.as_ref().map(|row| tv_distance(&s, row)).transpose()?;

    let mut text = format!(
        "start {}, {} trials, seed {}; mean tour length {:.3}, longest {}\n",
        s.start,
        s.trials,
        s.seed,
        s.total_steps as f64 / s.trials as f64,
        s.max_tour_length
    );
    let freqs = s.frequencies();
    let _ = writeln!(text, "{:>6}  {:>10}  {:>9}  exact", "vertex", "count", "frequency");
    for (v, (&c, f)) in s.counts.iter().zip(&freqs).enumerate() {
        let ex = exact.as_ref().map_or(String::from("-"), |r| r[v].to_string());
        let _ = writeln!(text, "{v:>6}  {c:>10}  {f:>9.5}  {ex}");
    }
    if let Some(tv) = tv {
        let _ = writeln!(text, "TV distance to exact row: {tv:.5}");
    }
    if s.invalid_tours > 0 {
        let _ = writeln!(text, "FAIL: {} simulated tours failed validation", s.invalid_tours);
    }
    let json = serde_json::json!({
        "summary": to_json(&s),
        "frequencies": freqs,
        "exact": exact.map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()),
        "tv_distance": tv,
    });
    Ok(Done { text, json, passed: s.invalid_tours == 0 })
}

#[derive(Serialize)]
struct LemmaReport {
    identity: Eq1Check,
    witness: Option<Lemma1Witness>,
    passed: bool,
    failure: Option<String>,
}

fn lemma(g: &Digraph, u: usize, v: usize) -> Result<Done, Failure> {
    let ctx = LemmaContext::new(g)?;
    let identity = ctx.eq1(u, v)?;
    let (witness, failure) = match ctx.witness(u, v) {
        Ok(w) => (Some(w), None),
        Err(Error::CheckFailed(msg)) => (None, Some(msg)),
        Err(e) => return Err(e.into()),
    };
    let passed = identity.holds() && failure.is_none();

    let mut text = format!("pair (u, v) = ({u}, {v}), out-degree of u = {}\n", identity.degree);
    for t in &identity.terms {
        let _ = writeln!(
            text,
            "  x = {}: P(L({},{v})) = {}, P(L({}; {v},{u})) = {}",
            t.x, t.x, t.last_at_v, t.x, t.last_two_vu
        );
    }
    let _ = writeln!(
        text,
        "identity: P(L({u},{v})) = {}, right-hand side = {}, residual {}",
        identity.lhs, identity.rhs, identity.residual
    );
    if let Some(w) = &witness {
        let _ = writeln!(
            text,
            "out-neighbour x = {}: P(L({},{v})) = {} <= P(L({u},{v})) = {}, strict = {}",
            w.x, w.x, w.p_xv, w.p_uv, w.strict
        );
        match &w.witness {
            Some(walk) => {
                let _ = writeln!(text, "no-revisit cover tour: {}", join(walk.vertices()));
            }
            None => text.push_str("no-revisit cover tour: none\n"),
        }
    }
    if let Some(msg) = &failure {
        let _ = writeln!(text, "{msg}");
    }
    text.push_str(if passed { "PASS\n" } else { "FAIL\n" });
    let json = to_json(&LemmaReport { identity, witness, passed, failure });
    Ok(Done { text, json, passed })
}

fn join(vs: &[usize]) -> String {
    vs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct ProveReport {
    certification: Certification,
    verified: Option<bool>,
    exact_uniform: Option<bool>,
    passed: bool,
}

fn prove(g: &Digraph) -> Result<Done, Failure> {
    let certification = certify_nonbidirected_implies_nonuniform(g)?;
    let exact_uniform = if (2..=MAX_EXACT_VERTICES).contains(&g.n()) {
        Some(last_visit_matrix(g)?.uniformity().uniform)
    } else {
        None
    };
    let mut text = String::new();
    let (verified, passed) = match &certification {
        Certification::AllBidirected => {
            text.push_str("all-bidirected: every arc has its reverse, nothing to certify\n");
            (None, true)
        }
        Certification::NonUniform(c) => {
            let ok = c.verify(g);
            let _ = writeln!(text, "certificate: {}", c.kind.name());
            let _ = writeln!(text, "  unpaired arc: {}→{}", c.arc.0, c.arc.1);
            let _ = writeln!(text, "  obligated arc: {}→{} (absent)", c.obligated.0, c.obligated.1);
            if let Some(useq) = &c.u_sequence {
                let _ = writeln!(text, "  U: {}", join(useq));
            }
            match &c.witness {
                Some(w) => {
                    let _ = writeln!(text, "  witness tour: {}", join(w.vertices()));
                }
                None => {
                    let _ = writeln!(text, "  no cover tour from {} ends at {}", c.obligated.0, c.obligated.1);
                }
            }
            let _ = writeln!(text, "  verified: {}", if ok { "yes" } else { "NO" });
            (Some(ok), ok && exact_uniform != Some(true))
        }
    };
    if let Some(u) = exact_uniform {
        let _ = writeln!(text, "exact solver: {}", if u { "UNIFORM" } else { "NOT-UNIFORM" });
    }
    text.push_str(if passed { "PASS\n" } else { "FAIL\n" });
    let json = to_json(&ProveReport { certification, verified, exact_uniform, passed });
    Ok(Done { text, json, passed })
}

fn census(args: &CensusArgs) -> Result<Done, Failure> {
    let cfg = CensusConfig { prefilter: args.mode, ..CensusConfig::default() };
    let report = match args.samples {
        Some(samples) => run_census_sample(args.n, samples, args.seed, &cfg)?,
        None if args.n > MAX_EXHAUSTIVE_VERTICES => {
            return Err(Failure::Usage(format!(
                "exhaustive census stops at n = {MAX_EXHAUSTIVE_VERTICES}; pass --samples for n = {}",
                args.n
            )))
        }
        None => run_census_with(args.n, &cfg)?,
    };
    let mut text = format!(
        "n = {}, mode {}, {} digraphs checked, {} strongly connected, {} uniform\n",
        report.n, report.prefilter, report.total, report.strongly_connected, report.uniform
    );
    for c in &report.classes {
        let _ = writeln!(
            text,
            "  {} {} ({} labeled, bidirected: {})",
            c.canonical_form,
            c.family,
            c.labeled_count,
            if c.all_bidirected { "yes" } else { "NO" }
        );
    }
    let _ = writeln!(
        text,
        "prefilter false positives {}, audited {}, audit failures {}, {} ms",
        report.float_false_positives,
        report.audit_sampled,
        report.audit_failures.len(),
        report.wall_time_ms
    );
    let _ = writeln!(text, "{}", report.verdict_line());
    Ok(Done { text, json: to_json(&report), passed: report.passed() })
}
