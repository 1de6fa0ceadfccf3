//! 2048 game mechanics on a 4x4 board.
//!
//! Boards hold tile values directly (0 = empty). Moves never spawn; spawning
//! is a separate step so that queries can look at pre-spawn positions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::RandomStream;

pub const SIDE: usize = 4;
pub const CELLS: usize = SIDE * SIDE;
/// Largest tile reachable on a 4x4 board.
pub const MAX_TILE: u32 = 1 << 17;
/// Probability that a spawned tile is a 4.
pub const FOUR_PROBABILITY: f64 = 0.1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("cell {index} holds {value}, expected 0 or a power of two between 2 and {MAX_TILE}")]
    InvalidTile { index: usize, value: u64 },
    #[error("expected {CELLS} cells, got {0}")]
    WrongCellCount(usize),
    #[error("cannot parse cell {0:?}")]
    Parse(String),
    #[error("spawn requested on a full board")]
    BoardFull,
}

/// Move direction. Declaration order is the rotation cycle
/// UP -> RIGHT -> DOWN -> LEFT, which is also the fallback order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Direction {
    Up,
    Right,
    Down,
    Left,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Up, Direction::Right, Direction::Down, Direction::Left];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Direction {
        Self::ALL[i % 4]
    }

    /// The next direction clockwise, applied `k` times.
    pub fn rotated(self, k: usize) -> Direction {
        Self::from_index(self.index() + k)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Up => "UP",
            Direction::Right => "RIGHT",
            Direction::Down => "DOWN",
            Direction::Left => "LEFT",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "UP" => Ok(Direction::Up),
            "RIGHT" => Ok(Direction::Right),
            "DOWN" => Ok(Direction::Down),
            "LEFT" => Ok(Direction::Left),
            other => Err(format!("unknown direction {other:?}")),
        }
    }
}

/// Small set of directions, stored as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MoveSet(u8);

impl MoveSet {
    pub fn insert(&mut self, d: Direction) {
        self.0 |= 1 << d.index();
    }

    pub fn contains(self, d: Direction) -> bool {
        self.0 & (1 << d.index()) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Members in fallback order.
    pub fn iter(self) -> impl Iterator<Item = Direction> {
        Direction::ALL.into_iter().filter(move |d| self.contains(*d))
    }

    pub fn first(self) -> Option<Direction> {
        self.iter().next()
    }
}

fn is_tile(v: u64) -> bool {
    v == 0 || (v >= 2 && v <= MAX_TILE as u64 && v.is_power_of_two())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Board {
    cells: [u32; CELLS],
}

impl Board {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_cells(cells: [u32; CELLS]) -> Result<Self, EngineError> {
        for (index, &v) in cells.iter().enumerate() {
            if !is_tile(v as u64) {
                return Err(EngineError::InvalidTile { index, value: v as u64 });
            }
        }
        Ok(Self { cells })
    }

    pub fn from_slice(values: &[u64]) -> Result<Self, EngineError> {
        if values.len() != CELLS {
            return Err(EngineError::WrongCellCount(values.len()));
        }
        let mut cells = [0u32; CELLS];
        for (index, &v) in values.iter().enumerate() {
            if !is_tile(v) {
                return Err(EngineError::InvalidTile { index, value: v });
            }
            cells[index] = v as u32;
        }
        Ok(Self { cells })
    }

    pub fn from_rows(rows: [[u32; SIDE]; SIDE]) -> Result<Self, EngineError> {
        let mut cells = [0u32; CELLS];
        for (r, row) in rows.iter().enumerate() {
            cells[r * SIDE..(r + 1) * SIDE].copy_from_slice(row);
        }
        Self::from_cells(cells)
    }

    pub fn cells(&self) -> &[u32; CELLS] {
        &self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.cells[row * SIDE + col]
    }

    pub fn empty_count(&self) -> u32 {
        self.cells.iter().filter(|&&v| v == 0).count() as u32
    }

    pub fn max_tile(&self) -> u32 {
        self.cells.iter().copied().max().unwrap_or(0)
    }

    pub fn tile_sum(&self) -> u64 {
        self.cells.iter().map(|&v| v as u64).sum()
    }

    /// Rotation by 90 degrees clockwise: the top row becomes the right column.
    pub fn rotate_cw(&self) -> Board {
        let mut cells = [0u32; CELLS];
        for r in 0..SIDE {
            for c in 0..SIDE {
                cells[c * SIDE + (SIDE - 1 - r)] = self.cells[r * SIDE + c];
            }
        }
        Board { cells }
    }
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.cells.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Board {
    type Err = EngineError;

    /// Parses 16 whitespace-separated integers, row-major.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .split_whitespace()
            .map(|t| t.parse::<u64>().map_err(|_| EngineError::Parse(t.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Board::from_slice(&values)
    }
}

/// Result of sliding the board, before any tile is spawned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoveOutcome {
    pub board: Board,
    pub gain: u32,
    pub merges: u32,
    pub changed: bool,
}

/// Slides a row toward index 0, merging each equal adjacent pair once.
/// Returns the new row and the sum of the merged tiles.
pub fn shift_merge_row(row: [u32; SIDE]) -> ([u32; SIDE], u32) {
    let (out, gain, _) = merge_line(row);
    (out, gain)
}

#[inline]
fn merge_line(row: [u32; SIDE]) -> ([u32; SIDE], u32, u32) {
    let mut out = [0u32; SIDE];
    let mut gain = 0;
    let mut merges = 0;
    let mut len = 0;
    let mut pending = 0u32;
    for v in row {
        if v == 0 {
            continue;
        }
        if pending == v {
            out[len] = v * 2;
            len += 1;
            gain += v * 2;
            merges += 1;
            pending = 0;
        } else {
            if pending != 0 {
                out[len] = pending;
                len += 1;
            }
            pending = v;
        }
    }
    if pending != 0 {
        out[len] = pending;
    }
    (out, gain, merges)
}

/// Cell indices of line `i`, ordered from the edge the tiles move toward.
#[inline]
fn line_indices(dir: Direction, i: usize) -> [usize; SIDE] {
    let mut idx = [0usize; SIDE];
    for (k, slot) in idx.iter_mut().enumerate() {
        *slot = match dir {
            Direction::Left => i * SIDE + k,
            Direction::Right => i * SIDE + (SIDE - 1 - k),
            Direction::Up => k * SIDE + i,
            Direction::Down => (SIDE - 1 - k) * SIDE + i,
        };
    }
    idx
}

pub fn apply_move(board: &Board, dir: Direction) -> MoveOutcome {
    let mut cells = board.cells;
    let mut gain = 0;
    let mut merges = 0;
    for i in 0..SIDE {
        let idx = line_indices(dir, i);
        let line = idx.map(|j| board.cells[j]);
        let (merged, g, m) = merge_line(line);
        for (k, &j) in idx.iter().enumerate() {
            cells[j] = merged[k];
        }
        gain += g;
        merges += m;
    }
    debug_assert!(cells.iter().all(|&v| v <= MAX_TILE));
    let changed = cells != board.cells;
    MoveOutcome {
        board: Board { cells },
        gain,
        merges,
        changed,
    }
}

/// Places a 2 (p = 0.9) or 4 (p = 0.1) on a uniformly chosen empty cell.
pub fn spawn_tile(board: &Board, rng: &mut RandomStream) -> Result<Board, EngineError> {
    let empties = board.empty_count();
    if empties == 0 {
        return Err(EngineError::BoardFull);
    }
    let target = rng.below(empties as u64) as usize;
    let value = if rng.chance(FOUR_PROBABILITY) { 4 } else { 2 };
    let mut cells = board.cells;
    let slot = cells
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == 0)
        .nth(target)
        .map(|(i, _)| i)
        .expect("target below empty count");
    cells[slot] = value;
    Ok(Board { cells })
}

pub fn legal_moves(board: &Board) -> MoveSet {
    let mut set = MoveSet::default();
    for d in Direction::ALL {
        if apply_move(board, d).changed {
            set.insert(d);
        }
    }
    set
}

pub fn is_game_over(board: &Board) -> bool {
    legal_moves(board).is_empty()
}

pub fn new_game(rng: &mut RandomStream) -> Board {
    let first = spawn_tile(&Board::empty(), rng).expect("empty board has room");
    spawn_tile(&first, rng).expect("one tile leaves room")
}

/// Outcome of one complete game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameResult {
    pub seed: u64,
    pub total_score: u64,
    pub highest_tile: u32,
    pub moves: u32,
    pub reached_2048: bool,
}
