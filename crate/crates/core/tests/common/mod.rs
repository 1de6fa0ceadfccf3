//! Shared test helpers: random inputs and independent reference
//! implementations that do not go through the crate's own code paths.

#![allow(dead_code)]

use std::cmp::Ordering;

use policy2048::engine::{apply_move, Board, Direction, GameResult, CELLS};
use policy2048::evolve::{
    initial_policy, mutate, mutate_order, mutate_rotate, mutate_size, mutate_value, pareto_dominance, random_rule,
    Comparator, FitnessStats, MutationKind,
};
use policy2048::policy::{
    BoolExpr, CmpOp, NumExpr, Policy, Predicate, QueryCall, QueryId, ReturnKind, MAX_CHILDREN, MAX_CONST, MAX_DEPTH,
    MAX_RULES,
};
use policy2048::rng::RandomStream;

/// Board with each cell empty (p = 0.35) or a tile 2..=2048.
pub fn random_board(rng: &mut RandomStream) -> Board {
    let mut cells = [0u32; CELLS];
    for c in cells.iter_mut() {
        if !rng.chance(0.35) {
            *c = 2 << rng.index(11);
        }
    }
    Board::from_cells(cells).unwrap()
}

/// Board built from a small alphabet so that merges are frequent.
pub fn dense_board(rng: &mut RandomStream) -> Board {
    let mut cells = [0u32; CELLS];
    for c in cells.iter_mut() {
        *c = [0, 2, 4, 8][rng.index(4)];
    }
    Board::from_cells(cells).unwrap()
}

pub fn random_policy(rng: &mut RandomStream) -> Policy {
    let n = 1 + rng.index(6);
    Policy::new((0..n).map(|_| random_rule(MAX_DEPTH, rng)).collect()).unwrap()
}

/// A policy produced by the same path the evolution uses.
pub fn evolved_like_policy(rng: &mut RandomStream, steps: usize) -> Policy {
    let mut p = initial_policy(rng);
    for _ in 0..steps {
        p = mutate(&p, rng).0;
    }
    p
}

// ---------------------------------------------------------------------------
// Reference engine

/// Moves tiles one cell at a time toward index 0, as in a hand-played game,
/// tracking which cells already merged this move.
pub fn reference_row(row: [u32; 4]) -> ([u32; 4], u32) {
    let mut cells = row;
    let mut merged = [false; 4];
    let mut gain = 0;
    for start in 1..4 {
        if cells[start] == 0 {
            continue;
        }
        let mut pos = start;
        while pos > 0 {
            if cells[pos - 1] == 0 {
                cells[pos - 1] = cells[pos];
                cells[pos] = 0;
                merged.swap(pos - 1, pos);
                pos -= 1;
            } else if cells[pos - 1] == cells[pos] && !merged[pos - 1] && !merged[pos] {
                cells[pos - 1] *= 2;
                cells[pos] = 0;
                merged[pos - 1] = true;
                gain += cells[pos - 1];
                break;
            } else {
                break;
            }
        }
    }
    (cells, gain)
}

fn rotate_cw(cells: [u32; 16]) -> [u32; 16] {
    let mut out = [0; 16];
    for r in 0..4 {
        for c in 0..4 {
            out[c * 4 + (3 - r)] = cells[r * 4 + c];
        }
    }
    out
}

fn rotate_times(mut cells: [u32; 16], k: usize) -> [u32; 16] {
    for _ in 0..k % 4 {
        cells = rotate_cw(cells);
    }
    cells
}

/// Reference move: rotate so the move becomes LEFT, merge rows, rotate back.
/// Returns (cells after, gain, merges).
pub fn reference_move(board: &Board, dir: Direction) -> ([u32; 16], u32, u32) {
    // Clockwise quarter turns that turn `dir` into LEFT.
    let k = match dir {
        Direction::Left => 0,
        Direction::Down => 1,
        Direction::Right => 2,
        Direction::Up => 3,
    };
    let turned = rotate_times(*board.cells(), k);
    let mut out = [0u32; 16];
    let mut gain = 0;
    let mut merges = 0;
    for r in 0..4 {
        let row = [turned[r * 4], turned[r * 4 + 1], turned[r * 4 + 2], turned[r * 4 + 3]];
        let (merged, g) = reference_row(row);
        out[r * 4..r * 4 + 4].copy_from_slice(&merged);
        gain += g;
        let before = row.iter().filter(|&&v| v != 0).count();
        let after = merged.iter().filter(|&&v| v != 0).count();
        merges += (before - after) as u32;
    }
    (rotate_times(out, 4 - k), gain, merges)
}

pub fn reference_legal(board: &Board, dir: Direction) -> bool {
    reference_move(board, dir).0 != *board.cells()
}

// ---------------------------------------------------------------------------
// Reference interpreter

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RefValue {
    B(bool),
    N(i64),
}

fn after(board: &Board, d: Direction) -> Board {
    Board::from_cells(reference_move(board, d).0).unwrap()
}

fn snake_sorted(cells: &[u32; 16]) -> bool {
    let mut seq = Vec::new();
    for r in 0..4 {
        let cols: Vec<usize> = if r % 2 == 0 { (0..4).collect() } else { (0..4).rev().collect() };
        for c in cols {
            if cells[r * 4 + c] != 0 {
                seq.push(cells[r * 4 + c]);
            }
        }
    }
    seq.windows(2).all(|w| w[0] >= w[1])
}

fn empties(cells: &[u32; 16]) -> i64 {
    cells.iter().filter(|&&v| v == 0).count() as i64
}

pub fn reference_query(call: &QueryCall, board: &Board) -> RefValue {
    use RefValue::{B, N};
    let a = &call.args;
    match call.id {
        QueryId::CanMoveInDirection => B(reference_legal(board, a[0])),
        QueryId::CanMoveInDirections => B(reference_legal(board, a[0]) && reference_legal(&after(board, a[0]), a[1])),
        QueryId::ScoreGain => N(if reference_legal(board, a[0]) { reference_move(board, a[0]).1 as i64 } else { 0 }),
        QueryId::ScoreGains => {
            if !reference_legal(board, a[0]) {
                return N(0);
            }
            let first = reference_move(board, a[0]).1 as i64;
            let mid = after(board, a[0]);
            let second = if reference_legal(&mid, a[1]) { reference_move(&mid, a[1]).1 as i64 } else { 0 };
            N(first + second)
        }
        QueryId::WillBeSorted => B(snake_sorted(&reference_move(board, a[0]).0)),
        QueryId::EmptyCellGain => {
            if !reference_legal(board, a[0]) {
                return N(0);
            }
            N(empties(&reference_move(board, a[0]).0) - empties(board.cells()))
        }
        QueryId::EmptyCells => N(empties(board.cells())),
        QueryId::MaxTile => N(*board.cells().iter().max().unwrap() as i64),
        QueryId::MaxTileInCorner => {
            let c = board.cells();
            let m = *c.iter().max().unwrap();
            B(m > 0 && [c[0], c[3], c[12], c[15]].contains(&m))
        }
        QueryId::MergeCount => N(if reference_legal(board, a[0]) { reference_move(board, a[0]).2 as i64 } else { 0 }),
    }
}

fn ref_num(e: &NumExpr, board: &Board) -> i64 {
    match e {
        NumExpr::Const(v) => *v as i64,
        NumExpr::Query(call) => match reference_query(call, board) {
            RefValue::N(n) => n,
            RefValue::B(_) => panic!("numeric query expected"),
        },
    }
}

/// Full tree walk without short-circuiting.
pub fn reference_condition(e: &BoolExpr, board: &Board) -> bool {
    match e {
        BoolExpr::AllOf(c) => c.iter().map(|x| reference_condition(x, board)).fold(true, |a, b| a & b),
        BoolExpr::AnyOf(c) => c.iter().map(|x| reference_condition(x, board)).fold(false, |a, b| a | b),
        BoolExpr::Not(x) => !reference_condition(x, board),
        BoolExpr::Leaf(Predicate::BoolQuery(call)) => match reference_query(call, board) {
            RefValue::B(b) => b,
            RefValue::N(_) => panic!("boolean query expected"),
        },
        BoolExpr::Leaf(Predicate::Compare(c)) => {
            let (l, r) = (ref_num(&c.lhs, board), ref_num(&c.rhs, board));
            match c.op {
                CmpOp::Lt => l < r,
                CmpOp::Le => l <= r,
                CmpOp::Gt => l > r,
                CmpOp::Ge => l >= r,
                CmpOp::Eq => l == r,
            }
        }
    }
}

/// First rule whose condition holds with a legal action, else the first
/// legal direction in UP, RIGHT, DOWN, LEFT order.
pub fn reference_decide(policy: &Policy, board: &Board) -> Option<(Direction, Option<usize>)> {
    let order = [Direction::Up, Direction::Right, Direction::Down, Direction::Left];
    let fallback = order.into_iter().find(|&d| reference_legal(board, d))?;
    for (i, rule) in policy.rules.iter().enumerate() {
        if reference_condition(&rule.condition, board) && reference_legal(board, rule.action) {
            return Some((rule.action, Some(i)));
        }
    }
    Some((fallback, None))
}

/// Sanity check that the reference move agrees with the engine on one case,
/// used by tests that rely on both.
pub fn engine_agrees(board: &Board, dir: Direction) -> bool {
    let out = apply_move(board, dir);
    let (cells, gain, _) = reference_move(board, dir);
    out.board.cells() == &cells && out.gain == gain
}

// ---------------------------------------------------------------------------
// Policy invariants, checked without Policy::validate

fn expr_problems(e: &BoolExpr, depth: usize, out: &mut Vec<String>) {
    if depth > MAX_DEPTH {
        out.push(format!("depth {depth} exceeds {MAX_DEPTH}"));
    }
    let call_ok = |call: &QueryCall, want_bool: bool, out: &mut Vec<String>| {
        if call.args.len() != call.id.arity() {
            out.push(format!("{:?} has {} args", call.id, call.args.len()));
        }
        if (call.id.returns() == ReturnKind::Bool) != want_bool {
            out.push(format!("{:?} used with the wrong result kind", call.id));
        }
    };
    match e {
        BoolExpr::AllOf(c) | BoolExpr::AnyOf(c) => {
            if c.is_empty() || c.len() > MAX_CHILDREN {
                out.push(format!("{} children", c.len()));
            }
            for x in c {
                expr_problems(x, depth + 1, out);
            }
        }
        BoolExpr::Not(x) => expr_problems(x, depth + 1, out),
        BoolExpr::Leaf(Predicate::BoolQuery(call)) => call_ok(call, true, out),
        BoolExpr::Leaf(Predicate::Compare(c)) => {
            for side in [&c.lhs, &c.rhs] {
                match side {
                    NumExpr::Const(v) if *v > MAX_CONST => out.push(format!("constant {v}")),
                    NumExpr::Const(_) => {}
                    NumExpr::Query(call) => call_ok(call, false, out),
                }
            }
        }
    }
}

/// Every cap and typing rule of a policy, as a list of violations.
pub fn invariant_problems(policy: &Policy) -> Vec<String> {
    let mut out = Vec::new();
    if policy.rules.is_empty() || policy.rules.len() > MAX_RULES {
        out.push(format!("{} rules", policy.rules.len()));
    }
    for rule in &policy.rules {
        expr_problems(&rule.condition, 1, &mut out);
    }
    match Policy::from_json(&policy.to_json()) {
        Ok(back) if back == *policy => {}
        _ => out.push("JSON form does not round-trip".into()),
    }
    out
}

// ---------------------------------------------------------------------------
// Operator checks

fn leaf_shape(e: &BoolExpr) -> String {
    match e {
        BoolExpr::AllOf(c) => format!("all({})", c.iter().map(leaf_shape).collect::<Vec<_>>().join(",")),
        BoolExpr::AnyOf(c) => format!("any({})", c.iter().map(leaf_shape).collect::<Vec<_>>().join(",")),
        BoolExpr::Not(x) => format!("not({})", leaf_shape(x)),
        BoolExpr::Leaf(Predicate::BoolQuery(_)) => "q".into(),
        BoolExpr::Leaf(Predicate::Compare(_)) => "c".into(),
    }
}

/// Tree shape with all leaf contents erased.
pub fn shape(policy: &Policy) -> Vec<String> {
    policy.rules.iter().map(|r| leaf_shape(&r.condition)).collect()
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

/// Checks that `child` could have come from `kind` applied to `parent`.
pub fn consistent_with(kind: MutationKind, parent: &Policy, child: &Policy) -> Result<(), String> {
    let ok = match kind {
        MutationKind::Value => shape(parent) == shape(child) && parent != child,
        MutationKind::Size => {
            let (pr, cr) = (parent.rules.len(), child.rules.len());
            pr.abs_diff(cr) == 1 || (pr == cr && parent.node_count() != child.node_count())
        }
        MutationKind::Order => {
            parent.rules.len() == child.rules.len()
                && parent.node_count() == child.node_count()
                && sorted(parent.directions()) == sorted(child.directions())
                && sorted(shape(parent).join("|").chars().collect()) == sorted(shape(child).join("|").chars().collect::<Vec<_>>())
        }
        MutationKind::Rotate => (1..4).any(|k| parent.rotated(k) == *child),
    };
    if ok {
        Ok(())
    } else {
        Err(format!("{kind:?} cannot produce {} from {}", child.to_json(), parent.to_json()))
    }
}

/// Applies `op` `n` times along random walks of policies and checks every
/// result against the invariants. Returns the number of applications.
pub fn check_operator(
    n: usize,
    seed: u64,
    mut op: impl FnMut(&Policy, &Policy, &mut RandomStream) -> Result<Vec<Policy>, String>,
) -> Result<usize, String> {
    let mut rng = RandomStream::new(seed);
    let mut current = evolved_like_policy(&mut rng, 5);
    for i in 0..n {
        if i % 40 == 0 {
            let steps = rng.index(30);
            current = evolved_like_policy(&mut rng, steps);
        }
        let steps = rng.index(30);
        let other = evolved_like_policy(&mut rng, steps);
        let out = op(&current, &other, &mut rng)?;
        for p in &out {
            let problems = invariant_problems(p);
            if !problems.is_empty() {
                return Err(format!("application {i}: {problems:?} in {}", p.to_json()));
            }
        }
        current = out.into_iter().next().unwrap_or(current);
    }
    Ok(n)
}

/// One application of `mutate`, replayed to show that it consumed the stream
/// of exactly one mutator and nothing else.
pub fn check_mutate_once(parent: &Policy, rng: &mut RandomStream) -> Result<MutationKind, String> {
    let mut replay = rng.clone();
    let (child, kind) = mutate(parent, rng);
    let applicable: Vec<_> = MutationKind::ALL.into_iter().filter(|k| k.is_applicable(parent)).collect();
    let chosen = applicable[replay.index(applicable.len())];
    if chosen != kind {
        return Err(format!("reported {kind:?}, selected {chosen:?}"));
    }
    let single = match kind {
        MutationKind::Value => mutate_value(parent, &mut replay),
        MutationKind::Size => mutate_size(parent, &mut replay).0,
        MutationKind::Order => mutate_order(parent, &mut replay).ok_or("order not applicable")?,
        MutationKind::Rotate => mutate_rotate(parent, &mut replay).0,
    };
    if single != child {
        return Err(format!("{kind:?} alone gives a different child"));
    }
    if replay.next_u64() != rng.clone().next_u64() {
        return Err(format!("{kind:?}: mutate drew extra random numbers"));
    }
    consistent_with(kind, parent, &child)?;
    Ok(kind)
}

// ---------------------------------------------------------------------------
// Fitness statistics

/// Stats over 1..=4 games drawn from small pools so ties are common.
pub fn random_stats(rng: &mut RandomStream) -> FitnessStats {
    let n = 1 + rng.index(4);
    let games: Vec<GameResult> = (0..n)
        .map(|_| GameResult {
            seed: 0,
            total_score: [500, 1000, 2000, 4000][rng.index(4)],
            highest_tile: [128, 256, 512][rng.index(3)],
            moves: 1,
            reached_2048: false,
        })
        .collect();
    FitnessStats::from_games(&games)
}

/// Reflexivity, antisymmetry, transitivity and agreement with Pareto
/// dominance over `n` random triples.
pub fn check_comparator(cmp: &Comparator, n: usize, seed: u64) -> Result<(), String> {
    let mut rng = RandomStream::new(seed);
    for _ in 0..n {
        let [a, b, c] = [random_stats(&mut rng), random_stats(&mut rng), random_stats(&mut rng)];
        for x in [&a, &b, &c] {
            if cmp.compare(x, x) != Ordering::Equal {
                return Err(format!("not reflexive on {x:?}"));
            }
        }
        for (x, y) in [(&a, &b), (&b, &c), (&a, &c)] {
            if cmp.compare(x, y) != cmp.compare(y, x).reverse() {
                return Err(format!("not antisymmetric on {x:?} {y:?}"));
            }
            if let Some(ord) = pareto_dominance(x, y, &cmp.priority) {
                if cmp.compare(x, y) != ord {
                    return Err(format!("disagrees with dominance on {x:?} {y:?}"));
                }
            }
        }
        let (ab, bc, ac) = (cmp.compare(&a, &b), cmp.compare(&b, &c), cmp.compare(&a, &c));
        if ab != Ordering::Less && bc != Ordering::Less {
            let expect = if ab == Ordering::Equal && bc == Ordering::Equal { Ordering::Equal } else { Ordering::Greater };
            if ac != expect {
                return Err(format!("not transitive on {a:?} {b:?} {c:?}"));
            }
        }
        if ab != Ordering::Greater && bc != Ordering::Greater {
            let expect = if ab == Ordering::Equal && bc == Ordering::Equal { Ordering::Equal } else { Ordering::Less };
            if ac != expect {
                return Err(format!("not transitive on {a:?} {b:?} {c:?}"));
            }
        }
    }
    Ok(())
}
