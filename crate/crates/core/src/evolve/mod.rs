//! Evolutionary search over policies.

mod compare;
mod config;
mod generate;
mod history;
mod operators;
mod run;

pub use compare::{lexicographic, pareto_dominance, Comparator, ComparatorMode, Objective};
pub use config::{ConfigError, EvoConfig};
pub use generate::{initial_policy, random_expr, random_predicate, random_rule};
pub use history::{history_csv, history_from_protocol, GenerationRecord, CSV_HEADER};
pub use operators::{
    mutate, mutate_const, mutate_order, mutate_rotate, mutate_size, mutate_value, recombine, MutationKind, NodeKind,
    SizeChange, SwapInfo, RECOMBINE_ATTEMPTS,
};
pub use run::{init_population, run_evolution, run_evolution_with, EvolveError, Individual, RunSummary};

pub use crate::fitness::FitnessStats;
