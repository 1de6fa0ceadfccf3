//! Rule-based policies: the AST, its JSON form, the ten query functions and
//! the interpreter.

mod ast;
mod interp;
mod query;

use thiserror::Error;

pub use ast::{
    BoolExpr, CmpOp, Comparison, NumExpr, Policy, Predicate, QueryCall, Rule, MAX_CHILDREN, MAX_CONST,
    MAX_DEPTH, MAX_RULES,
};
pub use interp::{decide, decide_recorded, eval_condition, Decision, NoRecord, Recorder};
pub use query::{eval_query, is_snake_sorted, max_tile_in_corner, QueryContext, QueryId, QueryValue, ReturnKind};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolicyError {
    #[error("policy must have between 1 and {MAX_RULES} rules, has {0}")]
    RuleCount(usize),
    #[error("rule {rule} has condition depth {depth}, limit is {MAX_DEPTH}")]
    TooDeep { rule: usize, depth: usize },
    #[error("all/any node must have between 1 and {MAX_CHILDREN} children, has {0}")]
    ChildCount(usize),
    #[error("constant {0} outside 0..={MAX_CONST}")]
    ConstRange(u32),
    #[error("{query} takes {expected} direction argument(s), got {got}")]
    Arity { query: &'static str, expected: usize, got: usize },
    #[error("{query} used where the other result kind is required")]
    Kind { query: &'static str },
    #[error("invalid policy document: {0}")]
    Json(String),
    #[error("no legal move")]
    NoLegalMove,
}
