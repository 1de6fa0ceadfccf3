//! Game simulation and fitness statistics for a single policy.

mod protocol;

use serde::{Deserialize, Serialize};

use crate::engine::{new_game, spawn_tile, Board, Direction, GameResult};
use crate::policy::{decide_recorded, NoRecord, Policy, PolicyError, QueryContext};
use crate::rng::RandomStream;

pub use protocol::{parse_protocol, read_protocol, GameRecord, ProtocolError, ProtocolRecord, ProtocolWriter};

/// Games stop after this many moves even if moves remain.
pub const MOVE_CAP: u32 = 10_000;

/// Plays one game from `seed`, calling `on_move` with each pre-move board and
/// the chosen direction.
pub fn play_game_traced(policy: &Policy, seed: u64, mut on_move: impl FnMut(&Board, Direction)) -> GameResult {
    let mut rng = RandomStream::new(seed);
    let mut board = new_game(&mut rng);
    let mut total_score = 0u64;
    let mut moves = 0u32;
    while moves < MOVE_CAP {
        let ctx = QueryContext::new(&board);
        let decision = match decide_recorded(policy, &ctx, false, &mut NoRecord) {
            Ok(d) => d,
            Err(PolicyError::NoLegalMove) => break,
            Err(e) => unreachable!("decide failed: {e}"),
        };
        on_move(&board, decision.direction);
        let outcome = *ctx.outcome(decision.direction);
        total_score += outcome.gain as u64;
        moves += 1;
        board = spawn_tile(&outcome.board, &mut rng).expect("a legal move leaves an empty cell");
    }
    let highest_tile = board.max_tile();
    GameResult {
        seed,
        total_score,
        highest_tile,
        moves,
        reached_2048: highest_tile >= 2048,
    }
}

pub fn play_game(policy: &Policy, seed: u64) -> GameResult {
    play_game_traced(policy, seed, |_, _| {})
}

pub fn play_games(policy: &Policy, seeds: &[u64]) -> Vec<GameResult> {
    seeds.iter().map(|&s| play_game(policy, s)).collect()
}

/// Minimum, maximum and mean of one objective over a set of games.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub min: u64,
    pub max: u64,
    #[serde(serialize_with = "protocol::serialize_avg")]
    pub avg: f64,
}

impl Summary {
    /// Panics on an empty input.
    pub fn of(values: impl IntoIterator<Item = u64>) -> Summary {
        let mut min = u64::MAX;
        let mut max = 0;
        let mut sum = 0u64;
        let mut n = 0u64;
        for v in values {
            min = min.min(v);
            max = max.max(v);
            sum += v;
            n += 1;
        }
        assert!(n > 0, "summary of no values");
        Summary {
            min,
            max,
            avg: sum as f64 / n as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessStats {
    pub games: u32,
    pub highest_tile: Summary,
    pub total_score: Summary,
}

impl FitnessStats {
    pub fn from_games(games: &[GameResult]) -> FitnessStats {
        FitnessStats {
            games: games.len() as u32,
            highest_tile: Summary::of(games.iter().map(|g| g.highest_tile as u64)),
            total_score: Summary::of(games.iter().map(|g| g.total_score)),
        }
    }
}

/// Plays one game per seed and summarises them.
pub fn evaluate(policy: &Policy, seeds: &[u64]) -> FitnessStats {
    FitnessStats::from_games(&play_games(policy, seeds))
}
