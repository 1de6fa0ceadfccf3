//! Random construction of policy fragments.

use crate::engine::Direction;
use crate::policy::{
    BoolExpr, CmpOp, Comparison, NumExpr, Policy, Predicate, QueryCall, QueryId, ReturnKind, Rule, MAX_CONST,
};
use crate::rng::RandomStream;

/// Chance that a grown subtree stops at a predicate before the depth limit.
const LEAF_PROBABILITY: f64 = 0.6;

pub fn random_direction(rng: &mut RandomStream) -> Direction {
    Direction::ALL[rng.index(4)]
}

pub fn random_const(rng: &mut RandomStream) -> u32 {
    rng.range_inclusive(0, MAX_CONST as i64) as u32
}

pub fn random_call(id: QueryId, rng: &mut RandomStream) -> QueryCall {
    let args = (0..id.arity()).map(|_| random_direction(rng)).collect();
    QueryCall::new(id, args).expect("arity matches")
}

fn numeric_queries() -> impl Iterator<Item = QueryId> {
    QueryId::ALL.into_iter().filter(|q| q.returns() == ReturnKind::Num)
}

pub fn random_num_expr(rng: &mut RandomStream) -> NumExpr {
    if rng.chance(0.5) {
        NumExpr::Const(random_const(rng))
    } else {
        let ids: Vec<_> = numeric_queries().collect();
        NumExpr::Query(random_call(*rng.choose(&ids), rng))
    }
}

/// A single predicate. The query is drawn uniformly from all ten; numeric
/// queries become the left side of a comparison.
pub fn random_predicate(rng: &mut RandomStream) -> Predicate {
    let id = *rng.choose(&QueryId::ALL);
    match id.returns() {
        ReturnKind::Bool => Predicate::BoolQuery(random_call(id, rng)),
        ReturnKind::Num => Predicate::Compare(Comparison {
            lhs: NumExpr::Query(random_call(id, rng)),
            op: *rng.choose(&CmpOp::ALL),
            rhs: random_num_expr(rng),
        }),
    }
}

/// A condition of depth at most `max_depth`, grown top-down.
pub fn random_expr(max_depth: usize, rng: &mut RandomStream) -> BoolExpr {
    if max_depth <= 1 || rng.chance(LEAF_PROBABILITY) {
        return BoolExpr::Leaf(random_predicate(rng));
    }
    match rng.index(3) {
        0 => BoolExpr::AllOf(random_children(max_depth - 1, rng)),
        1 => BoolExpr::AnyOf(random_children(max_depth - 1, rng)),
        _ => BoolExpr::Not(Box::new(random_expr(max_depth - 1, rng))),
    }
}

fn random_children(max_depth: usize, rng: &mut RandomStream) -> Vec<BoolExpr> {
    let n = 1 + rng.index(2);
    (0..n).map(|_| random_expr(max_depth, rng)).collect()
}

pub fn random_rule(max_depth: usize, rng: &mut RandomStream) -> Rule {
    Rule {
        condition: random_expr(max_depth, rng),
        action: random_direction(rng),
    }
}

/// One rule whose condition is a single predicate.
pub fn initial_policy(rng: &mut RandomStream) -> Policy {
    Policy::new(vec![Rule {
        condition: BoolExpr::Leaf(random_predicate(rng)),
        action: random_direction(rng),
    }])
    .expect("single-leaf policy is valid")
}
