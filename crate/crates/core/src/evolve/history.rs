//! Per-generation summary series and its CSV form.

use std::fmt::Write as _;

use super::compare::Comparator;
use crate::fitness::{FitnessStats, ProtocolRecord};

pub const CSV_HEADER: &str = "generation,best_max_tile,best_avg_tile,gen_mean_max_tile,gen_mean_avg_tile,best_avg_score";

/// One row of the history: the generation's best individual and the
/// population means of the highest-tile statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationRecord {
    pub generation: u32,
    pub best_index: u32,
    pub best_max_tile: u64,
    pub best_avg_tile: f64,
    pub gen_mean_max_tile: f64,
    pub gen_mean_avg_tile: f64,
    pub best_avg_score: f64,
}

impl GenerationRecord {
    /// Panics on an empty generation.
    pub fn from_stats(generation: u32, stats: &[FitnessStats], comparator: &Comparator) -> Self {
        let best_index = comparator.best_index(stats).expect("non-empty generation");
        let best = &stats[best_index];
        let n = stats.len() as f64;
        GenerationRecord {
            generation,
            best_index: best_index as u32,
            best_max_tile: best.highest_tile.max,
            best_avg_tile: best.highest_tile.avg,
            gen_mean_max_tile: stats.iter().map(|s| s.highest_tile.max as f64).sum::<f64>() / n,
            gen_mean_avg_tile: stats.iter().map(|s| s.highest_tile.avg).sum::<f64>() / n,
            best_avg_score: best.total_score.avg,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.generation,
            self.best_max_tile,
            self.best_avg_tile,
            self.gen_mean_max_tile,
            self.gen_mean_avg_tile,
            self.best_avg_score
        )
    }
}

pub fn history_csv(records: &[GenerationRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(out, "{}", r.csv_row()).expect("string write");
    }
    out
}

/// Rebuilds the history from protocol records. Records are grouped by
/// generation and ordered by individual index; stats are recomputed from the
/// logged games.
pub fn history_from_protocol(records: &[ProtocolRecord], comparator: &Comparator) -> Vec<GenerationRecord> {
    let mut by_gen: std::collections::BTreeMap<u32, Vec<&ProtocolRecord>> = Default::default();
    for r in records {
        by_gen.entry(r.gen).or_default().push(r);
    }
    by_gen
        .into_iter()
        .map(|(gen, mut recs)| {
            recs.sort_by_key(|r| r.ind);
            let stats: Vec<_> = recs.iter().map(|r| r.recomputed_stats()).collect();
            GenerationRecord::from_stats(gen, &stats, comparator)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::GameResult;

    fn game(tile: u32, score: u64) -> GameResult {
        GameResult {
            seed: 0,
            total_score: score,
            highest_tile: tile,
            moves: 10,
            reached_2048: false,
        }
    }

    #[test]
    fn record_from_stats() {
        let stats = [
            FitnessStats::from_games(&[game(64, 500), game(128, 900)]),
            FitnessStats::from_games(&[game(256, 2000), game(128, 1000)]),
        ];
        let r = GenerationRecord::from_stats(3, &stats, &Comparator::default());
        assert_eq!(r.best_index, 1);
        assert_eq!(r.best_max_tile, 256);
        assert_eq!(r.best_avg_tile, 192.0);
        assert_eq!(r.gen_mean_max_tile, 192.0);
        assert_eq!(r.gen_mean_avg_tile, 144.0);
        assert_eq!(r.best_avg_score, 1500.0);
        assert_eq!(r.csv_row(), "3,256,192,192,144,1500");
    }

    #[test]
    fn csv_has_fixed_header() {
        let csv = history_csv(&[]);
        assert_eq!(csv, format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn protocol_order_does_not_matter() {
        let recs = vec![
            ProtocolRecord::new(1, 1, &[game(8, 10)]),
            ProtocolRecord::new(0, 0, &[game(4, 5)]),
            ProtocolRecord::new(1, 0, &[game(16, 30)]),
            ProtocolRecord::new(0, 1, &[game(2, 1)]),
        ];
        let h = history_from_protocol(&recs, &Comparator::default());
        assert_eq!(h.len(), 2);
        assert_eq!(h[0].generation, 0);
        assert_eq!(h[0].best_max_tile, 4);
        assert_eq!(h[1].best_index, 0);
        assert_eq!(h[1].best_max_tile, 16);
    }
}
