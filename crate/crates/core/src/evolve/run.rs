//! The generational loop.

use std::cmp::Ordering;
use std::io;

use rayon::prelude::*;
use thiserror::Error;

use super::compare::Comparator;
use super::config::{ConfigError, EvoConfig};
use super::generate::initial_policy;
use super::history::GenerationRecord;
use super::operators::{mutate, recombine};
use crate::engine::GameResult;
use crate::fitness::{play_games, FitnessStats, ProtocolRecord};
use crate::policy::Policy;
use crate::rng::{derive_seed, game_seed, RandomStream};

/// Tag mixed into the run seed for the variation-operator stream, keeping it
/// apart from the per-game seeds.
const OPERATOR_STREAM: u64 = 0x6f70_6572_6174_6f72;

#[derive(Debug, Error)]
pub enum EvolveError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("writing protocol: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub policy: Policy,
    pub fitness: Option<FitnessStats>,
    pub birth_generation: u32,
    /// Games behind `fitness`.
    pub games: Vec<GameResult>,
}

impl Individual {
    pub fn new(policy: Policy, birth_generation: u32) -> Self {
        Self {
            policy,
            fitness: None,
            birth_generation,
            games: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    /// Fittest individual seen in any generation (earliest wins ties).
    pub best: Individual,
    pub best_generation: u32,
    pub history: Vec<GenerationRecord>,
    pub generations: u32,
    pub games_played: u64,
}

/// Random initial population: one rule, one predicate each.
pub fn init_population(cfg: &EvoConfig, rng: &mut RandomStream) -> Vec<Individual> {
    (0..cfg.population_size)
        .map(|_| Individual::new(initial_policy(rng), 0))
        .collect()
}

fn tournament<'a>(pop: &'a [Individual], size: usize, cmp: &Comparator, rng: &mut RandomStream) -> &'a Individual {
    let mut best = &pop[rng.index(pop.len())];
    for _ in 1..size {
        let challenger = &pop[rng.index(pop.len())];
        let (c, b) = (challenger.fitness.as_ref(), best.fitness.as_ref());
        if cmp.compare(c.expect("evaluated"), b.expect("evaluated")) == Ordering::Greater {
            best = challenger;
        }
    }
    best
}

/// Population indices from fittest to least fit; equal fitness keeps index order.
fn ranking(pop: &[Individual], cmp: &Comparator) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pop.len()).collect();
    order.sort_by(|&a, &b| {
        let (fa, fb) = (pop[a].fitness.as_ref().unwrap(), pop[b].fitness.as_ref().unwrap());
        cmp.compare(fb, fa)
    });
    order
}

fn next_generation(
    pop: &[Individual],
    cfg: &EvoConfig,
    cmp: &Comparator,
    generation: u32,
    rng: &mut RandomStream,
) -> Vec<Individual> {
    let mut next = Vec::with_capacity(cfg.population_size);
    for &i in ranking(pop, cmp).iter().take(cfg.elitism) {
        let mut elite = pop[i].clone();
        if cfg.reevaluate_elites {
            elite.fitness = None;
            elite.games.clear();
        }
        next.push(elite);
    }
    while next.len() < cfg.population_size {
        let a = tournament(pop, cfg.tournament_size, cmp, rng);
        let children = if rng.chance(cfg.recombination_rate) {
            let b = tournament(pop, cfg.tournament_size, cmp, rng);
            let (x, y, _) = recombine(&a.policy, &b.policy, rng);
            vec![x, y]
        } else {
            vec![a.policy.clone()]
        };
        for child in children {
            if next.len() == cfg.population_size {
                break;
            }
            let (mutated, _) = mutate(&child, rng);
            next.push(Individual::new(mutated, generation + 1));
        }
    }
    next
}

/// Runs the evolution, handing every evaluation record to `sink` in
/// (generation, individual) order.
pub fn run_evolution_with(
    cfg: &EvoConfig,
    mut sink: impl FnMut(&ProtocolRecord) -> io::Result<()>,
) -> Result<RunSummary, EvolveError> {
    cfg.validate()?;
    let cmp = Comparator::new(cfg.objective_priority.clone(), cfg.comparator);
    let mut rng = RandomStream::new(derive_seed(&[cfg.seed, OPERATOR_STREAM]));
    let mut pop = init_population(cfg, &mut rng);
    let games_per_eval = cfg.games_per_eval as u64;
    let mut remaining = cfg.evaluation_budget;
    let mut history = Vec::new();
    let mut best: Option<(Individual, u32)> = None;
    let mut generation = 0u32;

    loop {
        let pending: Vec<usize> = (0..pop.len()).filter(|&i| pop[i].fitness.is_none()).collect();
        let cost = pending.len() as u64 * games_per_eval;
        if cost > remaining {
            break;
        }
        let seeds = |i: usize| -> Vec<u64> {
            (0..games_per_eval)
                .map(|g| game_seed(cfg.seed, generation as u64, i as u64, g))
                .collect()
        };
        let results: Vec<Vec<GameResult>> = if cfg.parallel {
            pending
                .par_iter()
                .map(|&i| play_games(&pop[i].policy, &seeds(i)))
                .collect()
        } else {
            pending.iter().map(|&i| play_games(&pop[i].policy, &seeds(i))).collect()
        };
        remaining -= cost;
        for (&i, games) in pending.iter().zip(results) {
            pop[i].fitness = Some(FitnessStats::from_games(&games));
            pop[i].games = games;
        }

        let mut stats = Vec::with_capacity(pop.len());
        for (i, ind) in pop.iter().enumerate() {
            let mut record = ProtocolRecord::new(generation, i as u32, &ind.games);
            record.cached = !pending.contains(&i);
            sink(&record)?;
            stats.push(ind.fitness.expect("evaluated"));
        }
        let record = GenerationRecord::from_stats(generation, &stats, &cmp);
        let champion = &pop[record.best_index as usize];
        let improved = match &best {
            None => true,
            Some((b, _)) => cmp.compare(&stats[record.best_index as usize], b.fitness.as_ref().unwrap()) == Ordering::Greater,
        };
        if improved {
            best = Some((champion.clone(), generation));
        }
        history.push(record);

        pop = next_generation(&pop, cfg, &cmp, generation, &mut rng);
        generation += 1;
    }

    let (best, best_generation) = best.expect("at least one generation fits the budget");
    Ok(RunSummary {
        best,
        best_generation,
        history,
        generations: generation,
        games_played: cfg.evaluation_budget - remaining,
    })
}

pub fn run_evolution(cfg: &EvoConfig) -> Result<RunSummary, EvolveError> {
    run_evolution_with(cfg, |_| Ok(()))
}
