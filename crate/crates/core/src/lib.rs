//! Evolution of interpretable rule-based policies for 2048.
//!
//! A policy is an ordered list of `if <condition> then <move>` rules whose
//! conditions combine ten simple board queries. Policies are evolved with
//! value, size, order and rotation mutators plus subtree recombination, scored
//! by repeated simulated games, ranked with a priority-ordered Pareto
//! comparator, and exported as pseudocode, a standalone Python module and
//! per-move explanations.

pub mod engine;
pub mod evolve;
pub mod export;
pub mod fitness;
pub mod policy;
pub mod rng;

pub use engine::{Board, Direction, GameResult};
pub use policy::{decide, Policy};
pub use rng::RandomStream;
