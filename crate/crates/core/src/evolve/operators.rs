//! Variation operators: four mutators and subtree recombination.
//!
//! Every operator returns a policy that passes [`Policy::validate`].

use serde::Serialize;

use super::generate::{random_expr, random_rule};
use crate::engine::Direction;
use crate::policy::{
    BoolExpr, CmpOp, NumExpr, Policy, Predicate, QueryCall, Rule, MAX_CHILDREN, MAX_CONST, MAX_DEPTH, MAX_RULES,
};
use crate::rng::RandomStream;

/// Swap attempts before recombination gives up and returns the parents.
pub const RECOMBINE_ATTEMPTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MutationKind {
    Value,
    Size,
    Order,
    Rotate,
}

impl MutationKind {
    pub const ALL: [MutationKind; 4] = [MutationKind::Value, MutationKind::Size, MutationKind::Order, MutationKind::Rotate];

    pub fn is_applicable(self, policy: &Policy) -> bool {
        match self {
            MutationKind::Order => !swappable_arrays(policy).is_empty(),
            _ => true,
        }
    }
}

// ---------------------------------------------------------------------------
// Leaf traversal

enum Leaf<'a> {
    Const(&'a mut u32),
    Op(&'a mut CmpOp),
    Dir(&'a mut Direction),
    Call(&'a mut QueryCall),
}

fn visit_num<'a>(e: &'a mut NumExpr, f: &mut impl FnMut(Leaf<'a>)) {
    match e {
        NumExpr::Const(v) => f(Leaf::Const(v)),
        NumExpr::Query(call) => f(Leaf::Call(call)),
    }
}

fn visit_bool<'a>(e: &'a mut BoolExpr, f: &mut impl FnMut(Leaf<'a>)) {
    match e {
        BoolExpr::AllOf(children) | BoolExpr::AnyOf(children) => {
            for c in children.iter_mut() {
                visit_bool(c, f);
            }
        }
        BoolExpr::Not(child) => visit_bool(child, f),
        BoolExpr::Leaf(Predicate::BoolQuery(call)) => f(Leaf::Call(call)),
        BoolExpr::Leaf(Predicate::Compare(c)) => {
            visit_num(&mut c.lhs, f);
            f(Leaf::Op(&mut c.op));
            visit_num(&mut c.rhs, f);
        }
    }
}

fn visit_leaves<'a>(policy: &'a mut Policy, f: &mut impl FnMut(Leaf<'a>)) {
    for rule in policy.rules.iter_mut() {
        visit_bool(&mut rule.condition, f);
        f(Leaf::Dir(&mut rule.action));
    }
}

/// Mutable value sites a leaf contributes: each direction argument, plus the
/// query id when an interchangeable query exists.
fn site_count(leaf: &Leaf<'_>) -> usize {
    match leaf {
        Leaf::Call(call) => call.args.len() + usize::from(!call.id.siblings().is_empty()),
        _ => 1,
    }
}

fn other_direction(d: Direction, rng: &mut RandomStream) -> Direction {
    d.rotated(1 + rng.index(3))
}

/// New constant: half the time within ±25% of the old value, otherwise
/// anywhere in range. Always differs from `old`.
pub fn mutate_const(old: u32, rng: &mut RandomStream) -> u32 {
    if rng.chance(0.5) {
        let lo = ((old as f64) * 0.75).ceil() as i64;
        let hi = (((old as f64) * 1.25).floor() as i64).min(MAX_CONST as i64);
        if hi > lo {
            // Draw from the window with `old` removed.
            let v = rng.range_inclusive(lo, hi - 1);
            return if v >= old as i64 { v as u32 + 1 } else { v as u32 };
        }
    }
    let v = rng.range_inclusive(0, MAX_CONST as i64 - 1) as u32;
    if v >= old {
        v + 1
    } else {
        v
    }
}

fn mutate_site(leaf: Leaf<'_>, sub: usize, rng: &mut RandomStream) {
    match leaf {
        Leaf::Const(v) => *v = mutate_const(*v, rng),
        Leaf::Op(op) => {
            let others: Vec<_> = CmpOp::ALL.into_iter().filter(|o| o != op).collect();
            *op = *rng.choose(&others);
        }
        Leaf::Dir(d) => *d = other_direction(*d, rng),
        Leaf::Call(call) => {
            if sub < call.args.len() {
                call.args[sub] = other_direction(call.args[sub], rng);
            } else {
                call.id = *rng.choose(&call.id.siblings());
            }
        }
    }
}

/// Changes exactly one value leaf: a constant, a comparison operator, a
/// direction literal, or a query id (to another query of the same signature).
pub fn mutate_value(policy: &Policy, rng: &mut RandomStream) -> Policy {
    let mut out = policy.clone();
    let mut total = 0;
    visit_leaves(&mut out, &mut |leaf| total += site_count(&leaf));
    let target = rng.index(total);
    let mut seen = 0;
    let mut chosen = None;
    visit_leaves(&mut out, &mut |leaf| {
        let n = site_count(&leaf);
        if chosen.is_none() && target < seen + n {
            chosen = Some((leaf, target - seen));
        }
        seen += n;
    });
    let (leaf, sub) = chosen.expect("target within site count");
    mutate_site(leaf, sub, rng);
    out
}

// ---------------------------------------------------------------------------
// Structural addressing

/// Location of a condition node: rule index plus child indices from the rule's
/// root condition (`Not` has the single child 0).
#[derive(Debug, Clone, PartialEq, Eq)]
struct BoolPath {
    rule: usize,
    steps: Vec<usize>,
}

fn bool_at<'a>(policy: &'a Policy, path: &BoolPath) -> &'a BoolExpr {
    let mut node = &policy.rules[path.rule].condition;
    for &s in &path.steps {
        node = match node {
            BoolExpr::AllOf(c) | BoolExpr::AnyOf(c) => &c[s],
            BoolExpr::Not(c) => c,
            BoolExpr::Leaf(_) => unreachable!("path runs through a leaf"),
        };
    }
    node
}

fn bool_at_mut<'a>(policy: &'a mut Policy, path: &BoolPath) -> &'a mut BoolExpr {
    let mut node = &mut policy.rules[path.rule].condition;
    for &s in &path.steps {
        node = match node {
            BoolExpr::AllOf(c) | BoolExpr::AnyOf(c) => &mut c[s],
            BoolExpr::Not(c) => c,
            BoolExpr::Leaf(_) => unreachable!("path runs through a leaf"),
        };
    }
    node
}

fn collect_bool_paths(e: &BoolExpr, path: &mut BoolPath, out: &mut Vec<BoolPath>) {
    out.push(path.clone());
    match e {
        BoolExpr::AllOf(children) | BoolExpr::AnyOf(children) => {
            for (i, c) in children.iter().enumerate() {
                path.steps.push(i);
                collect_bool_paths(c, path, out);
                path.steps.pop();
            }
        }
        BoolExpr::Not(child) => {
            path.steps.push(0);
            collect_bool_paths(child, path, out);
            path.steps.pop();
        }
        BoolExpr::Leaf(_) => {}
    }
}

/// Every condition node, in pre-order.
fn bool_paths(policy: &Policy) -> Vec<BoolPath> {
    let mut out = Vec::new();
    for (rule, r) in policy.rules.iter().enumerate() {
        let mut path = BoolPath { rule, steps: Vec::new() };
        collect_bool_paths(&r.condition, &mut path, &mut out);
    }
    out
}

/// A resizable array: the rule list or the children of an all/any node.
#[derive(Debug, Clone, PartialEq, Eq)]
enum ArraySite {
    Rules,
    Children(BoolPath),
}

fn array_sites(policy: &Policy) -> Vec<(ArraySite, usize)> {
    let mut out = vec![(ArraySite::Rules, policy.rules.len())];
    for path in bool_paths(policy) {
        if let BoolExpr::AllOf(c) | BoolExpr::AnyOf(c) = bool_at(policy, &path) {
            let len = c.len();
            out.push((ArraySite::Children(path), len));
        }
    }
    out
}

fn swappable_arrays(policy: &Policy) -> Vec<ArraySite> {
    array_sites(policy)
        .into_iter()
        .filter(|(_, len)| *len >= 2)
        .map(|(site, _)| site)
        .collect()
}

fn children_mut<'a>(policy: &'a mut Policy, path: &BoolPath) -> &'a mut Vec<BoolExpr> {
    match bool_at_mut(policy, path) {
        BoolExpr::AllOf(c) | BoolExpr::AnyOf(c) => c,
        _ => unreachable!("array site is an all/any node"),
    }
}

// ---------------------------------------------------------------------------
// size, order and rotation

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeChange {
    Added,
    Removed,
}

/// Adds a fresh random element to, or removes one from, a randomly chosen
/// array. Add and remove are equally likely; at a length bound the feasible
/// option is taken.
pub fn mutate_size(policy: &Policy, rng: &mut RandomStream) -> (Policy, SizeChange) {
    let sites = array_sites(policy);
    let (site, len) = sites[rng.index(sites.len())].clone();
    let cap = match site {
        ArraySite::Rules => MAX_RULES,
        ArraySite::Children(_) => MAX_CHILDREN,
    };
    let want_add = rng.chance(0.5);
    let add = if len <= 1 {
        true
    } else if len >= cap {
        false
    } else {
        want_add
    };
    let mut out = policy.clone();
    match site {
        ArraySite::Rules => {
            if add {
                let at = rng.index(len + 1);
                let rule = random_rule(MAX_DEPTH, rng);
                out.rules.insert(at, rule);
            } else {
                out.rules.remove(rng.index(len));
            }
        }
        ArraySite::Children(path) => {
            // Children sit one level below the all/any node.
            let level = path.steps.len() + 2;
            let items = children_mut(&mut out, &path);
            if add {
                let at = rng.index(len + 1);
                items.insert(at, random_expr(MAX_DEPTH + 1 - level, rng));
            } else {
                items.remove(rng.index(len));
            }
        }
    }
    debug_assert!(out.validate().is_ok());
    (out, if add { SizeChange::Added } else { SizeChange::Removed })
}

/// Swaps two distinct positions of one array with at least two elements.
/// Returns `None` when no such array exists.
pub fn mutate_order(policy: &Policy, rng: &mut RandomStream) -> Option<Policy> {
    let sites = swappable_arrays(policy);
    if sites.is_empty() {
        return None;
    }
    let site = &sites[rng.index(sites.len())];
    let mut out = policy.clone();
    let len = match site {
        ArraySite::Rules => out.rules.len(),
        ArraySite::Children(path) => children_mut(&mut out, path).len(),
    };
    let i = rng.index(len);
    let j = (i + 1 + rng.index(len - 1)) % len;
    match site {
        ArraySite::Rules => out.rules.swap(i, j),
        ArraySite::Children(path) => children_mut(&mut out, path).swap(i, j),
    }
    Some(out)
}

/// Applies the direction cycle UP -> RIGHT -> DOWN -> LEFT `k` times
/// (k uniform in 1..=3) to every direction literal. Returns `k`.
pub fn mutate_rotate(policy: &Policy, rng: &mut RandomStream) -> (Policy, usize) {
    let k = 1 + rng.index(3);
    (policy.rotated(k), k)
}

/// Applies exactly one mutator, chosen uniformly among the applicable ones.
pub fn mutate(policy: &Policy, rng: &mut RandomStream) -> (Policy, MutationKind) {
    let applicable: Vec<_> = MutationKind::ALL
        .into_iter()
        .filter(|k| k.is_applicable(policy))
        .collect();
    let kind = applicable[rng.index(applicable.len())];
    let out = match kind {
        MutationKind::Value => mutate_value(policy, rng),
        MutationKind::Size => mutate_size(policy, rng).0,
        MutationKind::Order => mutate_order(policy, rng).expect("order mutation applicable"),
        MutationKind::Rotate => mutate_rotate(policy, rng).0,
    };
    (out, kind)
}

// ---------------------------------------------------------------------------
// recombination

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Rule,
    Bool,
    Num,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum NodeAddr {
    Rule(usize),
    Bool(BoolPath),
    /// Comparison leaf at the path; `rhs` selects the operand.
    Num(BoolPath, bool),
}

impl NodeAddr {
    fn kind(&self) -> NodeKind {
        match self {
            NodeAddr::Rule(_) => NodeKind::Rule,
            NodeAddr::Bool(_) => NodeKind::Bool,
            NodeAddr::Num(..) => NodeKind::Num,
        }
    }
}

fn node_addrs(policy: &Policy) -> Vec<NodeAddr> {
    let mut out: Vec<NodeAddr> = (0..policy.rules.len()).map(NodeAddr::Rule).collect();
    for path in bool_paths(policy) {
        if let BoolExpr::Leaf(Predicate::Compare(_)) = bool_at(policy, &path) {
            out.push(NodeAddr::Num(path.clone(), false));
            out.push(NodeAddr::Num(path.clone(), true));
        }
        out.push(NodeAddr::Bool(path));
    }
    out
}

enum Subtree {
    Rule(Rule),
    Bool(BoolExpr),
    Num(NumExpr),
}

fn num_at_mut<'a>(policy: &'a mut Policy, path: &BoolPath, rhs: bool) -> &'a mut NumExpr {
    match bool_at_mut(policy, path) {
        BoolExpr::Leaf(Predicate::Compare(c)) => {
            if rhs {
                &mut c.rhs
            } else {
                &mut c.lhs
            }
        }
        _ => unreachable!("numeric address points at a comparison"),
    }
}

fn replace(policy: &mut Policy, addr: &NodeAddr, with: Subtree) -> Subtree {
    match (addr, with) {
        (NodeAddr::Rule(i), Subtree::Rule(r)) => Subtree::Rule(std::mem::replace(&mut policy.rules[*i], r)),
        (NodeAddr::Bool(p), Subtree::Bool(e)) => Subtree::Bool(std::mem::replace(bool_at_mut(policy, p), e)),
        (NodeAddr::Num(p, rhs), Subtree::Num(e)) => Subtree::Num(std::mem::replace(num_at_mut(policy, p, *rhs), e)),
        _ => unreachable!("kind mismatch"),
    }
}

fn take(policy: &Policy, addr: &NodeAddr) -> Subtree {
    let mut copy = policy.clone();
    let placeholder = match addr {
        NodeAddr::Rule(_) => Subtree::Rule(policy.rules[0].clone()),
        NodeAddr::Bool(_) => Subtree::Bool(BoolExpr::AllOf(Vec::new())),
        NodeAddr::Num(..) => Subtree::Num(NumExpr::Const(0)),
    };
    replace(&mut copy, addr, placeholder)
}

/// Outcome of a recombination attempt, for inspection in tests and logs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwapInfo {
    pub kind: NodeKind,
    pub attempts: usize,
}

/// Swaps a random subtree of `a` with a random subtree of the same kind in
/// `b`. Pairs that would break a size or depth limit are redrawn, up to
/// [`RECOMBINE_ATTEMPTS`] times; after that the parents are returned unchanged.
pub fn recombine(a: &Policy, b: &Policy, rng: &mut RandomStream) -> (Policy, Policy, Option<SwapInfo>) {
    let addrs_a = node_addrs(a);
    let addrs_b = node_addrs(b);
    for attempt in 1..=RECOMBINE_ATTEMPTS {
        let pick_a = &addrs_a[rng.index(addrs_a.len())];
        let kind = pick_a.kind();
        let matching: Vec<_> = addrs_b.iter().filter(|x| x.kind() == kind).collect();
        if matching.is_empty() {
            continue;
        }
        let pick_b = matching[rng.index(matching.len())];
        let mut child_a = a.clone();
        let mut child_b = b.clone();
        replace(&mut child_a, pick_a, take(b, pick_b));
        replace(&mut child_b, pick_b, take(a, pick_a));
        if child_a.validate().is_ok() && child_b.validate().is_ok() {
            return (child_a, child_b, Some(SwapInfo { kind, attempts: attempt }));
        }
    }
    (a.clone(), b.clone(), None)
}
