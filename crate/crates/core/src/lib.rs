//! Random walks on graphs: simple (SRW), non-backtracking (NBRW) and
//! weighted (WRW) walks; the backtrack-erasure map that turns an SRW path
//! into a non-backtracking one; the birth-death chain traced by the erasure
//! cursor; and the contraction of degree-2 corridors into a weighted
//! multigraph. Exact rational enumeration oracles back every distributional
//! statement, and a seeded Monte Carlo harness provides recurrence
//! diagnostics on infinite graphs.

pub mod birthdeath;
pub mod contraction;
pub mod erasure;
pub mod error;
pub mod graph;
pub mod rational;
pub mod rng;
pub mod stats;
pub mod walkers;

pub use error::{Error, Result};
pub use graph::{Graph, VertexKey, WeightedMultigraph};
pub use rational::Rational;
