//! Per-move explanations: which rules were checked, what every query returned
//! and why the chosen move won.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::pseudocode::{render_condition, render_predicate};
use crate::engine::{Board, Direction};
use crate::policy::{decide_recorded, Policy, PolicyError, Predicate, QueryContext, QueryValue, Recorder};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafValue {
    pub leaf: String,
    /// The query result, or both comparison operands.
    pub operands: Vec<QueryValue>,
    pub result: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleTrace {
    pub rule_index: usize,
    pub evaluated: bool,
    /// Absent for rules after the firing rule in a short explanation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_value: Option<bool>,
    pub leaf_values: Vec<LeafValue>,
    pub action: Direction,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action_legal: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplanationTrace {
    pub board: String,
    pub rules: Vec<RuleTrace>,
    pub fired: Option<usize>,
    pub fallback_used: bool,
    pub chosen: Direction,
}

struct TraceRecorder {
    rules: Vec<RuleTrace>,
}

impl Recorder for TraceRecorder {
    const EVALUATE_ALL: bool = true;

    fn leaf(&mut self, rule: usize, pred: &Predicate, operands: &[QueryValue], result: bool) {
        self.rules[rule].leaf_values.push(LeafValue {
            leaf: render_predicate(pred),
            operands: operands.to_vec(),
            result,
        });
    }

    fn rule(&mut self, rule: usize, condition: bool, action_legal: bool) {
        let r = &mut self.rules[rule];
        r.evaluated = true;
        r.condition_value = Some(condition);
        r.action_legal = Some(action_legal);
    }
}

/// Explains the move `policy` makes on `board`. Rules are evaluated up to
/// the firing one, or all of them when `full` is set.
pub fn explain(policy: &Policy, board: &Board, full: bool) -> Result<ExplanationTrace, PolicyError> {
    let mut rec = TraceRecorder {
        rules: policy
            .rules
            .iter()
            .enumerate()
            .map(|(i, r)| RuleTrace {
                rule_index: i,
                evaluated: false,
                condition_value: None,
                leaf_values: Vec::new(),
                action: r.action,
                action_legal: None,
            })
            .collect(),
    };
    let decision = decide_recorded(policy, &QueryContext::new(board), full, &mut rec)?;
    Ok(ExplanationTrace {
        board: board.to_string(),
        rules: rec.rules,
        fired: decision.fired_rule,
        fallback_used: decision.fired_rule.is_none(),
        chosen: decision.direction,
    })
}

/// Multi-line human-readable form of a trace.
pub fn render_explanation(policy: &Policy, trace: &ExplanationTrace) -> String {
    let mut out = String::new();
    writeln!(out, "board: {}", trace.board).unwrap();
    for (rule, t) in policy.rules.iter().zip(&trace.rules) {
        writeln!(out, "rule {}: if {} -> {}", t.rule_index, render_condition(&rule.condition), t.action).unwrap();
        if !t.evaluated {
            writeln!(out, "  not evaluated").unwrap();
            continue;
        }
        for leaf in &t.leaf_values {
            let values: Vec<_> = leaf.operands.iter().map(|v| v.to_string()).collect();
            writeln!(out, "  {} [{}] = {}", leaf.leaf, values.join(", "), leaf.result).unwrap();
        }
        let cond = t.condition_value.unwrap_or(false);
        let legal = t.action_legal.unwrap_or(false);
        let verdict = match (cond, legal) {
            (true, true) if trace.fired == Some(t.rule_index) => "fires",
            (true, true) => "would fire, but an earlier rule fired",
            (true, false) => "skipped, move not legal",
            _ => "condition false",
        };
        writeln!(out, "  condition {cond}, {} {}: {verdict}", t.action, if legal { "legal" } else { "illegal" }).unwrap();
    }
    match trace.fired {
        Some(i) => writeln!(out, "chosen: {} (rule {i})", trace.chosen).unwrap(),
        None => writeln!(out, "chosen: {} (fallback: first legal of UP, RIGHT, DOWN, LEFT)", trace.chosen).unwrap(),
    }
    out
}
