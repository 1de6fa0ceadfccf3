//! Priority-ordered Pareto comparison of fitness statistics.
//!
//! All objectives are maximised. If one side Pareto-dominates the other over
//! the listed objectives it wins; otherwise the objectives are compared
//! lexicographically in priority order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::fitness::FitnessStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    MinTile,
    MaxTile,
    AvgTile,
    MinScore,
    MaxScore,
    AvgScore,
}

impl Objective {
    pub const ALL: [Objective; 6] = [
        Objective::MinTile,
        Objective::MaxTile,
        Objective::AvgTile,
        Objective::MinScore,
        Objective::MaxScore,
        Objective::AvgScore,
    ];

    /// avg(highest tile), then max(highest tile), then avg(total score).
    pub const DEFAULT_PRIORITY: [Objective; 3] = [Objective::AvgTile, Objective::MaxTile, Objective::AvgScore];

    pub fn value(self, s: &FitnessStats) -> f64 {
        match self {
            Objective::MinTile => s.highest_tile.min as f64,
            Objective::MaxTile => s.highest_tile.max as f64,
            Objective::AvgTile => s.highest_tile.avg,
            Objective::MinScore => s.total_score.min as f64,
            Objective::MaxScore => s.total_score.max as f64,
            Objective::AvgScore => s.total_score.avg,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::MinTile => "min_tile",
            Objective::MaxTile => "max_tile",
            Objective::AvgTile => "avg_tile",
            Objective::MinScore => "min_score",
            Objective::MaxScore => "max_score",
            Objective::AvgScore => "avg_score",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Objective::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| format!("unknown objective {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComparatorMode {
    /// Dominance first, priority order for incomparable pairs.
    #[default]
    Pareto,
    /// Priority order only.
    Lexicographic,
}

impl fmt::Display for ComparatorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComparatorMode::Pareto => "pareto",
            ComparatorMode::Lexicographic => "lexicographic",
        })
    }
}

impl FromStr for ComparatorMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pareto" => Ok(ComparatorMode::Pareto),
            "lexicographic" => Ok(ComparatorMode::Lexicographic),
            other => Err(format!("unknown comparator {other:?}")),
        }
    }
}

/// `Greater` when `a` dominates `b`, `Less` when `b` dominates `a`.
pub fn pareto_dominance(a: &FitnessStats, b: &FitnessStats, objectives: &[Objective]) -> Option<Ordering> {
    let mut a_better = false;
    let mut b_better = false;
    for o in objectives {
        match o.value(a).total_cmp(&o.value(b)) {
            Ordering::Greater => a_better = true,
            Ordering::Less => b_better = true,
            Ordering::Equal => {}
        }
    }
    match (a_better, b_better) {
        (true, false) => Some(Ordering::Greater),
        (false, true) => Some(Ordering::Less),
        _ => None,
    }
}

pub fn lexicographic(a: &FitnessStats, b: &FitnessStats, priority: &[Objective]) -> Ordering {
    priority
        .iter()
        .map(|o| o.value(a).total_cmp(&o.value(b)))
        .find(|ord| ord.is_ne())
        .unwrap_or(Ordering::Equal)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparator {
    pub priority: Vec<Objective>,
    pub mode: ComparatorMode,
}

impl Default for Comparator {
    fn default() -> Self {
        Self {
            priority: Objective::DEFAULT_PRIORITY.to_vec(),
            mode: ComparatorMode::Pareto,
        }
    }
}

impl Comparator {
    pub fn new(priority: Vec<Objective>, mode: ComparatorMode) -> Self {
        Self { priority, mode }
    }

    /// `Greater` means `a` is the fitter of the two.
    pub fn compare(&self, a: &FitnessStats, b: &FitnessStats) -> Ordering {
        if self.mode == ComparatorMode::Pareto {
            if let Some(ord) = pareto_dominance(a, b, &self.priority) {
                return ord;
            }
        }
        lexicographic(a, b, &self.priority)
    }

    /// Index of the fittest entry; ties go to the lowest index.
    pub fn best_index(&self, stats: &[FitnessStats]) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, s) in stats.iter().enumerate() {
            match best {
                Some(b) if self.compare(s, &stats[b]) != Ordering::Greater => {}
                _ => best = Some(i),
            }
        }
        best
    }
}
