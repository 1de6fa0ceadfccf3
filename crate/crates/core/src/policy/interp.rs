//! Rule interpreter.
//!
//! Evaluation is parameterised over a [`Recorder`] so that the plain decision
//! path and the explanation path run the same code.

use serde::{Deserialize, Serialize};

use super::ast::{BoolExpr, NumExpr, Policy, Predicate};
use super::query::{QueryContext, QueryValue};
use super::PolicyError;
use crate::engine::{Board, Direction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub direction: Direction,
    /// Index of the rule that fired; `None` means the fallback was used.
    pub fired_rule: Option<usize>,
}

/// Observer of the interpreter's work.
pub trait Recorder {
    /// When false, `all`/`any` nodes may stop at the first decisive child.
    const EVALUATE_ALL: bool;

    fn leaf(&mut self, _rule: usize, _pred: &Predicate, _operands: &[QueryValue], _result: bool) {}

    fn rule(&mut self, _rule: usize, _condition: bool, _action_legal: bool) {}
}

pub struct NoRecord;

impl Recorder for NoRecord {
    const EVALUATE_ALL: bool = false;
}

fn eval_num(e: &NumExpr, ctx: &QueryContext<'_>) -> i64 {
    match e {
        NumExpr::Const(v) => *v as i64,
        NumExpr::Query(call) => match ctx.eval(call) {
            QueryValue::Num(n) => n,
            QueryValue::Bool(b) => b as i64,
        },
    }
}

fn eval_predicate<R: Recorder>(p: &Predicate, ctx: &QueryContext<'_>, rule: usize, rec: &mut R) -> bool {
    match p {
        Predicate::BoolQuery(call) => {
            let value = ctx.eval(call);
            let result = matches!(value, QueryValue::Bool(true));
            rec.leaf(rule, p, &[value], result);
            result
        }
        Predicate::Compare(c) => {
            let lhs = eval_num(&c.lhs, ctx);
            let rhs = eval_num(&c.rhs, ctx);
            let result = c.op.apply(lhs, rhs);
            rec.leaf(rule, p, &[QueryValue::Num(lhs), QueryValue::Num(rhs)], result);
            result
        }
    }
}

pub(crate) fn eval_expr<R: Recorder>(e: &BoolExpr, ctx: &QueryContext<'_>, rule: usize, rec: &mut R) -> bool {
    match e {
        BoolExpr::AllOf(children) => {
            let mut all = true;
            for c in children {
                all &= eval_expr(c, ctx, rule, rec);
                if !all && !R::EVALUATE_ALL {
                    break;
                }
            }
            all
        }
        BoolExpr::AnyOf(children) => {
            let mut any = false;
            for c in children {
                any |= eval_expr(c, ctx, rule, rec);
                if any && !R::EVALUATE_ALL {
                    break;
                }
            }
            any
        }
        BoolExpr::Not(child) => !eval_expr(child, ctx, rule, rec),
        BoolExpr::Leaf(p) => eval_predicate(p, ctx, rule, rec),
    }
}

pub fn eval_condition(expr: &BoolExpr, board: &Board) -> bool {
    eval_expr(expr, &QueryContext::new(board), 0, &mut NoRecord)
}

/// Scans rules in order; evaluation stops at the firing rule unless
/// `all_rules` is set.
pub fn decide_recorded<R: Recorder>(
    policy: &Policy,
    ctx: &QueryContext<'_>,
    all_rules: bool,
    rec: &mut R,
) -> Result<Decision, PolicyError> {
    let fallback = Direction::ALL
        .into_iter()
        .find(|&d| ctx.is_legal(d))
        .ok_or(PolicyError::NoLegalMove)?;
    let mut fired = None;
    for (i, rule) in policy.rules.iter().enumerate() {
        let holds = eval_expr(&rule.condition, ctx, i, rec);
        let legal = ctx.is_legal(rule.action);
        rec.rule(i, holds, legal);
        if holds && legal && fired.is_none() {
            fired = Some(i);
            if !all_rules {
                break;
            }
        }
    }
    Ok(match fired {
        Some(i) => Decision {
            direction: policy.rules[i].action,
            fired_rule: Some(i),
        },
        None => Decision {
            direction: fallback,
            fired_rule: None,
        },
    })
}

/// Picks the move for `board`. Fails only when no move is legal.
pub fn decide(policy: &Policy, board: &Board) -> Result<Decision, PolicyError> {
    decide_recorded(policy, &QueryContext::new(board), false, &mut NoRecord)
}
