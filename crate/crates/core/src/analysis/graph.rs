//! Predicate dependency graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::syntax::{Aggregate, BodyElem, Condition, Head, Pred, Program, RelOp, Rule, Sign};

/// A node of the dependency graph: a predicate, or ⊥ for constraints.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Pred(Pred),
    Bottom,
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Pred(p) => write!(f, "{p}"),
            Node::Bottom => f.write_str("#false"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

/// The rule (by index and line) that gives rise to an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Witness {
    pub rule: usize,
    pub line: usize,
    pub polarity: Polarity,
}

/// Whether an aggregate can lose support when its elements become true.
fn aggregate_polarity(sign: Sign, a: &Aggregate) -> Polarity {
    let upper = matches!(&a.bounds.right, Some((RelOp::Le | RelOp::Lt | RelOp::Eq | RelOp::Ne, _)))
        || matches!(&a.bounds.left, Some((_, RelOp::Ge | RelOp::Gt | RelOp::Eq | RelOp::Ne)));
    if sign == Sign::Negative || upper {
        Polarity::Negative
    } else {
        Polarity::Positive
    }
}

fn flip(p: Polarity, negate: bool) -> Polarity {
    if negate {
        Polarity::Negative
    } else {
        p
    }
}

fn condition_uses(cond: &[Condition], base: Polarity, out: &mut Vec<(Pred, Polarity)>) {
    for c in cond {
        if let Condition::Lit(l) = c {
            out.push((l.atom.predicate(), flip(base, l.is_negative())));
        }
    }
}

/// Predicates a rule's body refers to, with the polarity of each use.
pub fn body_uses(rule: &Rule) -> Vec<(Pred, Polarity)> {
    let mut out = Vec::new();
    if let Head::Choice(c) = &rule.head {
        for e in &c.elements {
            condition_uses(&e.condition, Polarity::Positive, &mut out);
        }
    }
    for b in &rule.body {
        match b {
            BodyElem::Lit(l) => {
                out.push((l.atom.predicate(), if l.is_negative() { Polarity::Negative } else { Polarity::Positive }))
            }
            BodyElem::Cmp(_) => {}
            BodyElem::Agg { sign, aggregate } => {
                let base = aggregate_polarity(*sign, aggregate);
                for e in &aggregate.elements {
                    out.push((e.literal.atom.predicate(), flip(base, e.literal.is_negative())));
                    condition_uses(&e.condition, base, &mut out);
                }
            }
        }
    }
    out
}

/// Nodes a rule defines: its head predicates, or ⊥.
pub fn head_nodes(rule: &Rule) -> Vec<Node> {
    match &rule.head {
        Head::Falsum => vec![Node::Bottom],
        _ => {
            let mut v: Vec<Node> = rule.head_atoms().iter().map(|a| Node::Pred(a.predicate())).collect();
            v.dedup();
            v
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct DependencyGraph {
    /// Nodes in order of first occurrence in the program.
    pub nodes: Vec<Node>,
    /// `(p, q)` when `p` depends directly on `q`.
    pub edges: BTreeMap<(Node, Node), Vec<Witness>>,
}

impl DependencyGraph {
    pub fn build(p: &Program) -> Self {
        let mut g = DependencyGraph::default();
        let mut seen = BTreeSet::new();
        let mut add = |g: &mut DependencyGraph, n: Node| {
            if seen.insert(n.clone()) {
                g.nodes.push(n);
            }
        };
        for (i, rule) in p.rules.iter().enumerate() {
            let heads = head_nodes(rule);
            for h in &heads {
                add(&mut g, h.clone());
            }
            for (q, polarity) in body_uses(rule) {
                add(&mut g, Node::Pred(q.clone()));
                for h in &heads {
                    g.edges.entry((h.clone(), Node::Pred(q.clone()))).or_default().push(Witness {
                        rule: i,
                        line: rule.line,
                        polarity,
                    });
                }
            }
        }
        g
    }

    /// Direct dependencies of `p`.
    pub fn direct(&self, p: &Node) -> BTreeSet<Node> {
        self.edges.keys().filter(|(a, _)| a == p).map(|(_, b)| b.clone()).collect()
    }

    /// Everything `p` depends on, transitively.
    pub fn depends(&self, p: &Node) -> BTreeSet<Node> {
        let mut out = BTreeSet::new();
        let mut todo: Vec<Node> = self.direct(p).into_iter().collect();
        while let Some(n) = todo.pop() {
            if out.insert(n.clone()) {
                todo.extend(self.direct(&n));
            }
        }
        out
    }

    pub fn depends_on(&self, p: &Node, q: &Node) -> bool {
        self.depends(p).contains(q)
    }

    pub fn mutually_dependent(&self, p: &Node, q: &Node) -> bool {
        self.depends_on(p, q) && self.depends_on(q, p)
    }
}

pub fn dependency_graph(p: &Program) -> DependencyGraph {
    DependencyGraph::build(p)
}

/// Indices of the rules defining `node`.
pub fn definitions(p: &Program, node: &Node) -> Result<Vec<usize>, super::AnalysisError> {
    if let Node::Pred(pred) = node {
        if p.signature.get(&pred.name) != Some(&pred.arity) {
            return Err(super::AnalysisError::UnknownPredicate(pred.to_string()));
        }
    }
    Ok(p.rules.iter().enumerate().filter(|(_, r)| head_nodes(r).contains(node)).map(|(i, _)| i).collect())
}
