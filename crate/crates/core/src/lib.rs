//! Random cover tours on small directed graphs: exact last-visit
//! distributions, seeded simulation, machine checks of the out-neighbour
//! lemma and the bidirectedness theorem, and an exhaustive census.

pub mod census;
pub mod digraph;
pub mod engine;
pub mod error;
pub mod lemma;
pub mod linalg;
pub mod montecarlo;
pub mod par;
pub mod proof;
pub mod rational;
pub mod sample;

pub use digraph::{generate, parse_digraph, serialize_digraph, CoverTour, Digraph, Family, Walk};
pub use error::{Error, Result};
pub use par::Execution;
pub use rational::Rational;
