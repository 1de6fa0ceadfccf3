//! Run configuration and its flat `key = value` file format.
//!
//! ```text
//! # comments start with '#'
//! population_size = 100
//! games_per_eval = 6
//! evaluation_budget = 200000
//! seed = 1
//! recombination_rate = 0.7
//! tournament_size = 2
//! elitism = 1
//! objective_priority = avg_tile, max_tile, avg_score
//! comparator = pareto          # or: lexicographic
//! reevaluate_elites = true
//! parallel = true
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use super::compare::{ComparatorMode, Objective};

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("invalid value for {key}: {value:?}")]
    Value { key: String, value: String },
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read config: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvoConfig {
    pub population_size: usize,
    pub games_per_eval: usize,
    /// Total number of simulated games the run may spend.
    pub evaluation_budget: u64,
    pub seed: u64,
    pub recombination_rate: f64,
    pub tournament_size: usize,
    pub elitism: usize,
    pub objective_priority: Vec<Objective>,
    pub comparator: ComparatorMode,
    /// Re-play elites every generation instead of reusing their fitness.
    pub reevaluate_elites: bool,
    pub parallel: bool,
}

impl Default for EvoConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            games_per_eval: 6,
            evaluation_budget: 200_000,
            seed: 0,
            recombination_rate: 0.7,
            tournament_size: 2,
            elitism: 1,
            objective_priority: Objective::DEFAULT_PRIORITY.to_vec(),
            comparator: ComparatorMode::Pareto,
            reevaluate_elites: true,
            parallel: true,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::Value {
        key: key.to_string(),
        value: value.to_string(),
    })
}

impl EvoConfig {
    pub fn parse(text: &str) -> Result<EvoConfig, ConfigError> {
        let mut cfg = EvoConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                message: format!("expected `key = value`, got {line:?}"),
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<EvoConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "population_size" => self.population_size = parse_value(key, value)?,
            "games_per_eval" => self.games_per_eval = parse_value(key, value)?,
            "evaluation_budget" => self.evaluation_budget = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "recombination_rate" => self.recombination_rate = parse_value(key, value)?,
            "tournament_size" => self.tournament_size = parse_value(key, value)?,
            "elitism" => self.elitism = parse_value(key, value)?,
            "objective_priority" => {
                self.objective_priority = value
                    .split(',')
                    .map(|s| parse_value(key, s.trim()))
                    .collect::<Result<_, _>>()?
            }
            "comparator" => self.comparator = parse_value(key, value)?,
            "reevaluate_elites" => self.reevaluate_elites = parse_value(key, value)?,
            "parallel" => self.parallel = parse_value(key, value)?,
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |m: String| Err(ConfigError::Invalid(m));
        if self.population_size < 2 {
            return fail(format!("population_size must be at least 2, got {}", self.population_size));
        }
        if self.games_per_eval < 1 {
            return fail("games_per_eval must be at least 1".into());
        }
        let generation_cost = self.generation_cost();
        if self.evaluation_budget < generation_cost {
            return fail(format!(
                "evaluation_budget {} is smaller than one generation ({} games)",
                self.evaluation_budget, generation_cost
            ));
        }
        if !(0.0..=1.0).contains(&self.recombination_rate) {
            return fail(format!("recombination_rate must be in [0, 1], got {}", self.recombination_rate));
        }
        if self.tournament_size < 1 {
            return fail("tournament_size must be at least 1".into());
        }
        if self.elitism >= self.population_size {
            return fail(format!(
                "elitism {} must be smaller than population_size {}",
                self.elitism, self.population_size
            ));
        }
        if self.objective_priority.is_empty() {
            return fail("objective_priority must list at least one objective".into());
        }
        for (i, o) in self.objective_priority.iter().enumerate() {
            if self.objective_priority[..i].contains(o) {
                return fail(format!("objective {o} listed twice"));
            }
        }
        Ok(())
    }

    /// Games needed to evaluate a whole population.
    pub fn generation_cost(&self) -> u64 {
        self.population_size as u64 * self.games_per_eval as u64
    }
}

impl fmt::Display for EvoConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "population_size = {}", self.population_size)?;
        writeln!(f, "games_per_eval = {}", self.games_per_eval)?;
        writeln!(f, "evaluation_budget = {}", self.evaluation_budget)?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "recombination_rate = {}", self.recombination_rate)?;
        writeln!(f, "tournament_size = {}", self.tournament_size)?;
        writeln!(f, "elitism = {}", self.elitism)?;
        let priority: Vec<_> = self.objective_priority.iter().map(|o| o.to_string()).collect();
        writeln!(f, "objective_priority = {}", priority.join(", "))?;
        writeln!(f, "comparator = {}", self.comparator)?;
        writeln!(f, "reevaluate_elites = {}", self.reevaluate_elites)?;
        writeln!(f, "parallel = {}", self.parallel)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_setup() {
        let cfg = EvoConfig::default();
        assert_eq!(cfg.population_size, 100);
        assert_eq!(cfg.games_per_eval, 6);
        assert_eq!(cfg.evaluation_budget, 200_000);
        assert_eq!(cfg.recombination_rate, 0.7);
        assert_eq!(cfg.tournament_size, 2);
        assert_eq!(cfg.elitism, 1);
        assert!(cfg.reevaluate_elites);
        assert_eq!(EvoConfig::parse("").unwrap(), cfg);
    }

    #[test]
    fn parses_all_keys() {
        let text = "
            # desk-scale run
            population_size = 10
            games_per_eval = 2   # two games
            evaluation_budget = 400
            seed = 42
            recombination_rate = 0.5
            tournament_size = 3
            elitism = 2
            objective_priority = max_tile, avg_score
            comparator = lexicographic
            reevaluate_elites = false
            parallel = false
        ";
        let cfg = EvoConfig::parse(text).unwrap();
        assert_eq!(cfg.population_size, 10);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.objective_priority, vec![Objective::MaxTile, Objective::AvgScore]);
        assert_eq!(cfg.comparator, ComparatorMode::Lexicographic);
        assert!(!cfg.reevaluate_elites);
        assert_eq!(EvoConfig::parse(&cfg.to_string()).unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(EvoConfig::parse("population_size 10"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(EvoConfig::parse("colour = red"), Err(ConfigError::UnknownKey(_))));
        assert!(matches!(EvoConfig::parse("seed = -1"), Err(ConfigError::Value { .. })));
        assert!(matches!(EvoConfig::parse("population_size = 1"), Err(ConfigError::Invalid(_))));
        assert!(matches!(EvoConfig::parse("evaluation_budget = 599"), Err(ConfigError::Invalid(_))));
        assert!(matches!(EvoConfig::parse("objective_priority = avg_tile, avg_tile"), Err(ConfigError::Invalid(_))));
        assert!(matches!(EvoConfig::parse("elitism = 100"), Err(ConfigError::Invalid(_))));
    }
}
