//! The ten board-state query functions.
//!
//! | id                    | args   | result | meaning                                               |
//! |-----------------------|--------|--------|-------------------------------------------------------|
//! | `canMoveInDirection`  | d      | bool   | move `d` is legal                                     |
//! | `canMoveInDirections` | d1, d2 | bool   | `d1` legal, then `d2` legal on the pre-spawn result   |
//! | `scoreGain`           | d      | num    | score gained by `d` (0 if illegal)                    |
//! | `scoreGains`          | d1, d2 | num    | gain of `d1` plus gain of `d2` after it (0 if `d1` illegal) |
//! | `willBeSorted`        | d      | bool   | after `d`, tiles non-increasing along the snake path  |
//! | `emptyCellGain`*      | d      | num    | empty cells after `d` minus before (0 if illegal)     |
//! | `emptyCells`*         |        | num    | number of empty cells                                 |
//! | `maxTile`*            |        | num    | highest tile value                                    |
//! | `maxTileInCorner`*    |        | bool   | a highest tile sits in a corner                       |
//! | `mergeCount`*         | d      | num    | number of merges `d` causes (0 if illegal)            |
//!
//! Starred queries are reconstructions; only the first five are known by
//! name. The snake path runs row 0 left to right, row 1 right to left, and so
//! on; empty cells are skipped.

use std::cell::OnceCell;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ast::QueryCall;
use crate::engine::{apply_move, Board, Direction, MoveOutcome, CELLS, SIDE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum QueryId {
    CanMoveInDirection,
    CanMoveInDirections,
    ScoreGain,
    ScoreGains,
    WillBeSorted,
    EmptyCellGain,
    EmptyCells,
    MaxTile,
    MaxTileInCorner,
    MergeCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReturnKind {
    Bool,
    Num,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QueryValue {
    Bool(bool),
    Num(i64),
}

impl fmt::Display for QueryValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryValue::Bool(b) => write!(f, "{b}"),
            QueryValue::Num(n) => write!(f, "{n}"),
        }
    }
}

impl QueryId {
    pub const ALL: [QueryId; 10] = [
        QueryId::CanMoveInDirection,
        QueryId::CanMoveInDirections,
        QueryId::ScoreGain,
        QueryId::ScoreGains,
        QueryId::WillBeSorted,
        QueryId::EmptyCellGain,
        QueryId::EmptyCells,
        QueryId::MaxTile,
        QueryId::MaxTileInCorner,
        QueryId::MergeCount,
    ];

    pub fn arity(self) -> usize {
        match self {
            QueryId::CanMoveInDirections | QueryId::ScoreGains => 2,
            QueryId::CanMoveInDirection
            | QueryId::ScoreGain
            | QueryId::WillBeSorted
            | QueryId::EmptyCellGain
            | QueryId::MergeCount => 1,
            QueryId::EmptyCells | QueryId::MaxTile | QueryId::MaxTileInCorner => 0,
        }
    }

    pub fn returns(self) -> ReturnKind {
        match self {
            QueryId::CanMoveInDirection
            | QueryId::CanMoveInDirections
            | QueryId::WillBeSorted
            | QueryId::MaxTileInCorner => ReturnKind::Bool,
            _ => ReturnKind::Num,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QueryId::CanMoveInDirection => "canMoveInDirection",
            QueryId::CanMoveInDirections => "canMoveInDirections",
            QueryId::ScoreGain => "scoreGain",
            QueryId::ScoreGains => "scoreGains",
            QueryId::WillBeSorted => "willBeSorted",
            QueryId::EmptyCellGain => "emptyCellGain",
            QueryId::EmptyCells => "emptyCells",
            QueryId::MaxTile => "maxTile",
            QueryId::MaxTileInCorner => "maxTileInCorner",
            QueryId::MergeCount => "mergeCount",
        }
    }

    /// Other queries with the same arity and result kind.
    pub fn siblings(self) -> Vec<QueryId> {
        Self::ALL
            .into_iter()
            .filter(|q| *q != self && q.arity() == self.arity() && q.returns() == self.returns())
            .collect()
    }
}

/// Board positions along the snake path.
const SNAKE: [usize; CELLS] = {
    let mut path = [0usize; CELLS];
    let mut k = 0;
    while k < CELLS {
        let row = k / SIDE;
        let step = k % SIDE;
        let col = if row.is_multiple_of(2) { step } else { SIDE - 1 - step };
        path[k] = row * SIDE + col;
        k += 1;
    }
    path
};

pub fn is_snake_sorted(board: &Board) -> bool {
    let mut prev = u32::MAX;
    for &i in &SNAKE {
        let v = board.cells()[i];
        if v == 0 {
            continue;
        }
        if v > prev {
            return false;
        }
        prev = v;
    }
    true
}

pub fn max_tile_in_corner(board: &Board) -> bool {
    let max = board.max_tile();
    let c = board.cells();
    max > 0 && [0, SIDE - 1, CELLS - SIDE, CELLS - 1].iter().any(|&i| c[i] == max)
}

/// Query evaluation over one board, caching the four single-move outcomes.
pub struct QueryContext<'a> {
    board: &'a Board,
    moves: [OnceCell<MoveOutcome>; 4],
}

impl<'a> QueryContext<'a> {
    pub fn new(board: &'a Board) -> Self {
        Self {
            board,
            moves: Default::default(),
        }
    }

    pub fn board(&self) -> &Board {
        self.board
    }

    pub fn outcome(&self, d: Direction) -> &MoveOutcome {
        self.moves[d.index()].get_or_init(|| apply_move(self.board, d))
    }

    pub fn is_legal(&self, d: Direction) -> bool {
        self.outcome(d).changed
    }

    pub fn eval(&self, call: &QueryCall) -> QueryValue {
        use QueryValue::{Bool, Num};
        let arg = |i: usize| call.args[i];
        match call.id {
            QueryId::CanMoveInDirection => Bool(self.is_legal(arg(0))),
            QueryId::CanMoveInDirections => {
                let first = self.outcome(arg(0));
                Bool(first.changed && apply_move(&first.board, arg(1)).changed)
            }
            QueryId::ScoreGain => Num(self.outcome(arg(0)).gain as i64),
            QueryId::ScoreGains => {
                let first = self.outcome(arg(0));
                if !first.changed {
                    return Num(0);
                }
                Num(first.gain as i64 + apply_move(&first.board, arg(1)).gain as i64)
            }
            QueryId::WillBeSorted => Bool(is_snake_sorted(&self.outcome(arg(0)).board)),
            QueryId::EmptyCellGain => {
                let out = self.outcome(arg(0));
                if !out.changed {
                    return Num(0);
                }
                Num(out.board.empty_count() as i64 - self.board.empty_count() as i64)
            }
            QueryId::EmptyCells => Num(self.board.empty_count() as i64),
            QueryId::MaxTile => Num(self.board.max_tile() as i64),
            QueryId::MaxTileInCorner => Bool(max_tile_in_corner(self.board)),
            QueryId::MergeCount => Num(self.outcome(arg(0)).merges as i64),
        }
    }
}

/// Evaluates one query call on a board.
pub fn eval_query(call: &QueryCall, board: &Board) -> QueryValue {
    QueryContext::new(board).eval(call)
}
