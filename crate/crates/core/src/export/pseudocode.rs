//! Readable text form of a policy.

use std::fmt::Write as _;

use crate::policy::{BoolExpr, NumExpr, Policy, Predicate, QueryCall};

pub fn render_call(call: &QueryCall) -> String {
    let args: Vec<_> = call.args.iter().map(|d| d.as_str()).collect();
    format!("{}({})", call.id.name(), args.join(", "))
}

pub fn render_num(e: &NumExpr) -> String {
    match e {
        NumExpr::Const(v) => v.to_string(),
        NumExpr::Query(call) => render_call(call),
    }
}

pub fn render_predicate(p: &Predicate) -> String {
    match p {
        Predicate::BoolQuery(call) => render_call(call),
        Predicate::Compare(c) => format!("{} {} {}", render_num(&c.lhs), c.op.symbol(), render_num(&c.rhs)),
    }
}

fn render_nested(e: &BoolExpr) -> String {
    match e {
        BoolExpr::AllOf(c) | BoolExpr::AnyOf(c) if c.len() > 1 => format!("({})", render_condition(e)),
        BoolExpr::Leaf(Predicate::Compare(_)) => format!("({})", render_condition(e)),
        _ => render_condition(e),
    }
}

/// Infix rendering with `and`, `or` and `not`.
pub fn render_condition(e: &BoolExpr) -> String {
    match e {
        BoolExpr::AllOf(c) => c.iter().map(render_nested).collect::<Vec<_>>().join(" and "),
        BoolExpr::AnyOf(c) => c.iter().map(render_nested).collect::<Vec<_>>().join(" or "),
        BoolExpr::Not(child) => format!("not {}", render_nested(child)),
        BoolExpr::Leaf(p) => render_predicate(p),
    }
}

pub fn emit_pseudocode(policy: &Policy) -> String {
    let mut out = String::new();
    for rule in &policy.rules {
        writeln!(out, "if {}:", render_condition(&rule.condition)).unwrap();
        writeln!(out, "    move {}", rule.action).unwrap();
    }
    out.push_str("otherwise:\n    move first legal of UP, RIGHT, DOWN, LEFT\n");
    out
}
