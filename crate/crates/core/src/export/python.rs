//! Standalone Python module implementing a policy.
//!
//! The module defines `decide(board)` over a row-major list of 16 ints and
//! returns "UP", "DOWN", "LEFT" or "RIGHT". It carries its own copy of the
//! move rules and the ten queries so it can be read and run on its own.

use std::fmt::Write as _;

use crate::policy::{BoolExpr, CmpOp, NumExpr, Policy, Predicate, QueryCall};

const PRELUDE: &str = r#"UP, RIGHT, DOWN, LEFT = "UP", "RIGHT", "DOWN", "LEFT"
FALLBACK_ORDER = (UP, RIGHT, DOWN, LEFT)
SNAKE = (0, 1, 2, 3, 7, 6, 5, 4, 8, 9, 10, 11, 15, 14, 13, 12)
CORNERS = (0, 3, 12, 15)


def _merge_line(line):
    tiles = [v for v in line if v]
    out, gain, merges, i = [], 0, 0, 0
    while i < len(tiles):
        if i + 1 < len(tiles) and tiles[i] == tiles[i + 1]:
            out.append(tiles[i] * 2)
            gain += tiles[i] * 2
            merges += 1
            i += 2
        else:
            out.append(tiles[i])
            i += 1
    return out + [0] * (4 - len(out)), gain, merges


def _line(direction, i):
    if direction == LEFT:
        return [i * 4 + k for k in range(4)]
    if direction == RIGHT:
        return [i * 4 + 3 - k for k in range(4)]
    if direction == UP:
        return [k * 4 + i for k in range(4)]
    return [(3 - k) * 4 + i for k in range(4)]


def _move(board, direction):
    """(board after move, score gain, merge count, changed); no spawn."""
    cells = list(board)
    gain = merges = 0
    for i in range(4):
        idx = _line(direction, i)
        merged, g, m = _merge_line([board[j] for j in idx])
        for k, j in enumerate(idx):
            cells[j] = merged[k]
        gain += g
        merges += m
    return cells, gain, merges, cells != list(board)


def canMoveInDirection(board, d):
    return _move(board, d)[3]


def canMoveInDirections(board, d1, d2):
    after, _, _, changed = _move(board, d1)
    return changed and _move(after, d2)[3]


def scoreGain(board, d):
    return _move(board, d)[1]


def scoreGains(board, d1, d2):
    after, gain, _, changed = _move(board, d1)
    if not changed:
        return 0
    return gain + _move(after, d2)[1]


def willBeSorted(board, d):
    after = _move(board, d)[0]
    tiles = [after[i] for i in SNAKE if after[i]]
    return all(a >= b for a, b in zip(tiles, tiles[1:]))


def emptyCellGain(board, d):
    after, _, _, changed = _move(board, d)
    if not changed:
        return 0
    return after.count(0) - list(board).count(0)


def emptyCells(board):
    return list(board).count(0)


def maxTile(board):
    return max(board)


def maxTileInCorner(board):
    top = max(board)
    return top > 0 and any(board[i] == top for i in CORNERS)


def mergeCount(board, d):
    return _move(board, d)[2]
"#;

fn py_call(call: &QueryCall) -> String {
    let mut s = format!("{}(board", call.id.name());
    for d in &call.args {
        write!(s, ", {}", d.as_str()).unwrap();
    }
    s.push(')');
    s
}

fn py_num(e: &NumExpr) -> String {
    match e {
        NumExpr::Const(v) => v.to_string(),
        NumExpr::Query(call) => py_call(call),
    }
}

fn py_op(op: CmpOp) -> &'static str {
    match op {
        CmpOp::Lt => "<",
        CmpOp::Le => "<=",
        CmpOp::Gt => ">",
        CmpOp::Ge => ">=",
        CmpOp::Eq => "==",
    }
}

fn py_condition(e: &BoolExpr) -> String {
    match e {
        BoolExpr::AllOf(c) => format!("({})", c.iter().map(py_condition).collect::<Vec<_>>().join(" and ")),
        BoolExpr::AnyOf(c) => format!("({})", c.iter().map(py_condition).collect::<Vec<_>>().join(" or ")),
        BoolExpr::Not(child) => format!("(not {})", py_condition(child)),
        BoolExpr::Leaf(Predicate::BoolQuery(call)) => py_call(call),
        BoolExpr::Leaf(Predicate::Compare(c)) => {
            format!("({} {} {})", py_num(&c.lhs), py_op(c.op), py_num(&c.rhs))
        }
    }
}

pub fn emit_executable(policy: &Policy) -> String {
    let mut out = String::new();
    out.push_str("\"\"\"Rule-based 2048 policy.\n\n");
    out.push_str("decide(board) takes 16 ints in row-major order and returns the move.\n");
    out.push_str("The first rule whose condition holds and whose move is legal wins;\n");
    out.push_str("otherwise the first legal move in the order UP, RIGHT, DOWN, LEFT.\n\"\"\"\n\n");
    out.push_str(PRELUDE);
    out.push_str("\n\ndef decide(board):\n    board = list(board)\n");
    for (i, rule) in policy.rules.iter().enumerate() {
        writeln!(out, "    # rule {i}").unwrap();
        writeln!(
            out,
            "    if {} and canMoveInDirection(board, {}):",
            py_condition(&rule.condition),
            rule.action.as_str()
        )
        .unwrap();
        writeln!(out, "        return {}", rule.action.as_str()).unwrap();
    }
    out.push_str("    for d in FALLBACK_ORDER:\n");
    out.push_str("        if canMoveInDirection(board, d):\n");
    out.push_str("            return d\n");
    out.push_str("    raise ValueError(\"no legal move\")\n");
    out
}
