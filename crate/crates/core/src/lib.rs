//! Weak saturation (graph bootstrap percolation) laboratory.
//!
//! Starting from a host graph `G`, the `H`-closure repeatedly adds every
//! missing edge whose addition creates a new copy of `H`. This crate
//! computes closures with certificates, builds witness graphs and their
//! red-edge replays, constructs `H`-ladders and estimates percolation
//! thresholds of `G(n, p)` by seeded Monte Carlo.

pub mod engine;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod io;
pub mod ladder;
pub mod oracle;
pub mod pattern;
pub mod rational;
pub mod report;
pub mod witness;

pub use engine::{close, find_completion, percolates, ClosureOptions, ClosureTrace, CompiledPattern, Embedding};
pub use error::{Error, Result};
pub use graph::{Edge, EdgeSet, Graph};
pub use pattern::{analyze, PatternStats};
pub use rational::Rational;
