use serde::{Deserialize, Serialize};

use super::query::{QueryId, ReturnKind};
use super::PolicyError;
use crate::engine::Direction;

pub const MAX_RULES: usize = 12;
pub const MAX_DEPTH: usize = 4;
pub const MAX_CHILDREN: usize = 4;
pub const MAX_CONST: u32 = 4096;

/// A query function applied to its direction arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QueryCallRepr")]
pub struct QueryCall {
    #[serde(rename = "fn")]
    pub id: QueryId,
    pub args: Vec<Direction>,
}

#[derive(Deserialize)]
struct QueryCallRepr {
    #[serde(rename = "fn")]
    id: QueryId,
    #[serde(default)]
    args: Vec<Direction>,
}

impl TryFrom<QueryCallRepr> for QueryCall {
    type Error = PolicyError;

    fn try_from(r: QueryCallRepr) -> Result<Self, Self::Error> {
        QueryCall::new(r.id, r.args)
    }
}

impl QueryCall {
    pub fn new(id: QueryId, args: Vec<Direction>) -> Result<Self, PolicyError> {
        if args.len() != id.arity() {
            return Err(PolicyError::Arity {
                query: id.name(),
                expected: id.arity(),
                got: args.len(),
            });
        }
        Ok(Self { id, args })
    }

    /// Panics on an arity mismatch; for literals in code and tests.
    pub fn of(id: QueryId, args: &[Direction]) -> Self {
        Self::new(id, args.to_vec()).expect("arity")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "==")]
    Eq,
}

impl CmpOp {
    pub const ALL: [CmpOp; 5] = [CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge, CmpOp::Eq];

    pub fn apply(self, lhs: i64, rhs: i64) -> bool {
        match self {
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
            CmpOp::Eq => lhs == rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "==",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumExpr {
    Query(QueryCall),
    Const(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Comparison {
    pub lhs: NumExpr,
    pub op: CmpOp,
    pub rhs: NumExpr,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Predicate {
    #[serde(rename = "query")]
    BoolQuery(QueryCall),
    #[serde(rename = "cmp")]
    Compare(Comparison),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoolExpr {
    #[serde(rename = "all")]
    AllOf(Vec<BoolExpr>),
    #[serde(rename = "any")]
    AnyOf(Vec<BoolExpr>),
    #[serde(rename = "not")]
    Not(Box<BoolExpr>),
    #[serde(untagged)]
    Leaf(Predicate),
}

impl BoolExpr {
    /// Height of the tree; a lone predicate has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            BoolExpr::AllOf(children) | BoolExpr::AnyOf(children) => {
                1 + children.iter().map(BoolExpr::depth).max().unwrap_or(0)
            }
            BoolExpr::Not(child) => 1 + child.depth(),
            BoolExpr::Leaf(_) => 1,
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            BoolExpr::AllOf(children) | BoolExpr::AnyOf(children) => {
                1 + children.iter().map(BoolExpr::node_count).sum::<usize>()
            }
            BoolExpr::Not(child) => 1 + child.node_count(),
            BoolExpr::Leaf(_) => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rule {
    #[serde(rename = "if")]
    pub condition: BoolExpr,
    #[serde(rename = "then")]
    pub action: Direction,
}

/// Ordered rule list; the first rule whose condition holds and whose action
/// is legal decides the move.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolicyRepr")]
pub struct Policy {
    pub rules: Vec<Rule>,
}

#[derive(Deserialize)]
struct PolicyRepr {
    rules: Vec<Rule>,
}

impl TryFrom<PolicyRepr> for Policy {
    type Error = PolicyError;

    fn try_from(r: PolicyRepr) -> Result<Self, Self::Error> {
        let policy = Policy { rules: r.rules };
        policy.validate()?;
        Ok(policy)
    }
}

impl Policy {
    pub fn new(rules: Vec<Rule>) -> Result<Self, PolicyError> {
        let policy = Policy { rules };
        policy.validate()?;
        Ok(policy)
    }

    pub fn from_json(text: &str) -> Result<Self, PolicyError> {
        serde_json::from_str(text).map_err(|e| PolicyError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("policy serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("policy serializes")
    }

    /// Checks every structural invariant: rule count, depth, child counts,
    /// constant range, query arity and operand kinds.
    pub fn validate(&self) -> Result<(), PolicyError> {
        if self.rules.is_empty() || self.rules.len() > MAX_RULES {
            return Err(PolicyError::RuleCount(self.rules.len()));
        }
        for (i, rule) in self.rules.iter().enumerate() {
            let depth = rule.condition.depth();
            if depth > MAX_DEPTH {
                return Err(PolicyError::TooDeep { rule: i, depth });
            }
            validate_bool(&rule.condition)?;
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.rules.iter().map(|r| 1 + r.condition.node_count()).sum()
    }

    /// Every direction literal, in traversal order.
    pub fn directions(&self) -> Vec<Direction> {
        let mut out = Vec::new();
        for rule in &self.rules {
            collect_bool_dirs(&rule.condition, &mut out);
            out.push(rule.action);
        }
        out
    }

    /// Applies the clockwise direction cycle `k` times to every direction
    /// literal.
    pub fn rotated(&self, k: usize) -> Policy {
        let mut p = self.clone();
        for rule in &mut p.rules {
            rule.action = rule.action.rotated(k);
            rotate_bool(&mut rule.condition, k);
        }
        p
    }
}

fn validate_call(call: &QueryCall, want: ReturnKind) -> Result<(), PolicyError> {
    if call.args.len() != call.id.arity() {
        return Err(PolicyError::Arity {
            query: call.id.name(),
            expected: call.id.arity(),
            got: call.args.len(),
        });
    }
    if call.id.returns() != want {
        return Err(PolicyError::Kind { query: call.id.name() });
    }
    Ok(())
}

fn validate_num(e: &NumExpr) -> Result<(), PolicyError> {
    match e {
        NumExpr::Query(call) => validate_call(call, ReturnKind::Num),
        NumExpr::Const(v) if *v > MAX_CONST => Err(PolicyError::ConstRange(*v)),
        NumExpr::Const(_) => Ok(()),
    }
}

fn validate_bool(e: &BoolExpr) -> Result<(), PolicyError> {
    match e {
        BoolExpr::AllOf(children) | BoolExpr::AnyOf(children) => {
            if children.is_empty() || children.len() > MAX_CHILDREN {
                return Err(PolicyError::ChildCount(children.len()));
            }
            children.iter().try_for_each(validate_bool)
        }
        BoolExpr::Not(child) => validate_bool(child),
        BoolExpr::Leaf(Predicate::BoolQuery(call)) => validate_call(call, ReturnKind::Bool),
        BoolExpr::Leaf(Predicate::Compare(c)) => {
            validate_num(&c.lhs)?;
            validate_num(&c.rhs)
        }
    }
}

fn collect_num_dirs(e: &NumExpr, out: &mut Vec<Direction>) {
    if let NumExpr::Query(call) = e {
        out.extend_from_slice(&call.args);
    }
}

fn collect_bool_dirs(e: &BoolExpr, out: &mut Vec<Direction>) {
    match e {
        BoolExpr::AllOf(children) | BoolExpr::AnyOf(children) => {
            children.iter().for_each(|c| collect_bool_dirs(c, out))
        }
        BoolExpr::Not(child) => collect_bool_dirs(child, out),
        BoolExpr::Leaf(Predicate::BoolQuery(call)) => out.extend_from_slice(&call.args),
        BoolExpr::Leaf(Predicate::Compare(c)) => {
            collect_num_dirs(&c.lhs, out);
            collect_num_dirs(&c.rhs, out);
        }
    }
}

fn rotate_call(call: &mut QueryCall, k: usize) {
    for d in &mut call.args {
        *d = d.rotated(k);
    }
}

fn rotate_num(e: &mut NumExpr, k: usize) {
    if let NumExpr::Query(call) = e {
        rotate_call(call, k);
    }
}

fn rotate_bool(e: &mut BoolExpr, k: usize) {
    match e {
        BoolExpr::AllOf(children) | BoolExpr::AnyOf(children) => {
            children.iter_mut().for_each(|c| rotate_bool(c, k))
        }
        BoolExpr::Not(child) => rotate_bool(child, k),
        BoolExpr::Leaf(Predicate::BoolQuery(call)) => rotate_call(call, k),
        BoolExpr::Leaf(Predicate::Compare(c)) => {
            rotate_num(&mut c.lhs, k);
            rotate_num(&mut c.rhs, k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Direction::*;

    fn sample() -> Policy {
        Policy::new(vec![
            Rule {
                condition: BoolExpr::AllOf(vec![
                    BoolExpr::Leaf(Predicate::Compare(Comparison {
                        lhs: NumExpr::Query(QueryCall::of(QueryId::ScoreGain, &[Left])),
                        op: CmpOp::Ge,
                        rhs: NumExpr::Query(QueryCall::of(QueryId::ScoreGain, &[Right])),
                    })),
                    BoolExpr::Not(Box::new(BoolExpr::Leaf(Predicate::BoolQuery(QueryCall::of(
                        QueryId::MaxTileInCorner,
                        &[],
                    ))))),
                ]),
                action: Left,
            },
            Rule {
                condition: BoolExpr::Leaf(Predicate::Compare(Comparison {
                    lhs: NumExpr::Query(QueryCall::of(QueryId::EmptyCells, &[])),
                    op: CmpOp::Lt,
                    rhs: NumExpr::Const(3),
                })),
                action: Down,
            },
        ])
        .unwrap()
    }

    #[test]
    fn json_shape_is_node_tagged() {
        let json = sample().to_json();
        assert!(json.starts_with(r#"{"rules":[{"if":{"all":[{"cmp":{"lhs":{"query":{"fn":"scoreGain","args":["LEFT"]}},"op":">=""#), "{json}");
        assert!(json.contains(r#"{"not":{"query":{"fn":"maxTileInCorner","args":[]}}}"#), "{json}");
        assert!(json.contains(r#""rhs":{"const":3}"#), "{json}");
        assert!(json.contains(r#""then":"DOWN""#), "{json}");
    }

    #[test]
    fn json_round_trip() {
        let p = sample();
        assert_eq!(Policy::from_json(&p.to_json()).unwrap(), p);
        assert_eq!(Policy::from_json(&p.to_json_pretty()).unwrap(), p);
    }

    #[test]
    fn rejects_malformed_documents() {
        let bad_arity = r#"{"rules":[{"if":{"query":{"fn":"canMoveInDirection","args":[]}},"then":"UP"}]}"#;
        assert!(Policy::from_json(bad_arity).is_err());
        let bad_kind = r#"{"rules":[{"if":{"query":{"fn":"scoreGain","args":["UP"]}},"then":"UP"}]}"#;
        assert!(Policy::from_json(bad_kind).is_err());
        let empty = r#"{"rules":[]}"#;
        assert!(Policy::from_json(empty).is_err());
        let empty_all = r#"{"rules":[{"if":{"all":[]},"then":"UP"}]}"#;
        assert!(Policy::from_json(empty_all).is_err());
        let big_const = r#"{"rules":[{"if":{"cmp":{"lhs":{"const":5000},"op":"<","rhs":{"const":1}}},"then":"UP"}]}"#;
        assert!(Policy::from_json(big_const).is_err());
        let deep = r#"{"rules":[{"if":{"not":{"not":{"not":{"not":{"query":{"fn":"maxTileInCorner"}}}}}},"then":"UP"}]}"#;
        assert!(matches!(Policy::from_json(deep), Err(PolicyError::Json(_))));
    }

    #[test]
    fn depth_and_rotation() {
        let p = sample();
        assert_eq!(p.rules[0].condition.depth(), 3);
        assert_eq!(p.rules[1].condition.depth(), 1);
        let r = p.rotated(1);
        assert_eq!(r.directions(), vec![Up, Down, Up, Left]);
        assert_eq!(p.rotated(4), p);
    }
}
