//! Graph sharing games T, R and TR: rules, exact solving, strategies,
//! constructions and reductions from quantified boolean formulas.

pub mod constructions;
pub mod enumerate;
pub mod error;
pub mod game;
pub mod graph;
pub mod qbf;
pub mod reductions;
pub mod solver;
pub mod strategy;
pub mod structure;
pub mod tr;
pub mod vertex_set;
pub mod weight;

pub use error::{Condition, Error, Result};
pub use game::{GameState, Player, Ruleset, Scoring, Status, Termination, Transcript, Variant};
pub use graph::WeightedGraph;
pub use solver::{Outcome, SolveOptions, SolveResult, Solver};
pub use strategy::Strategy;
pub use vertex_set::VertexSet;
pub use weight::Weight;
