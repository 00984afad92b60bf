//! Stratification by strongly connected components.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use super::graph::{head_nodes, DependencyGraph, Node};
use crate::syntax::{Pred, Program, RuleKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StratumKind {
    Facts,
    Choices,
    Normal,
    Constraints,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub kind: StratumKind,
    /// Rule indices in source order.
    pub rules: Vec<usize>,
    /// Predicates defined here, in order of first definition.
    pub predicates: Vec<Pred>,
}

impl Stratum {
    pub fn lines(&self, p: &Program) -> BTreeSet<usize> {
        self.rules.iter().map(|&i| p.rules[i].line).collect()
    }
}

/// An ordered partition of a program's rules.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stratification {
    pub strata: Vec<Stratum>,
    /// Index of the stratum holding each predicate's definition.
    pub predicate_level: BTreeMap<Pred, usize>,
    /// Component id of every node; nodes in one component are mutually
    /// dependent.
    pub component: BTreeMap<Node, usize>,
}

pub fn render_lines(lines: &BTreeSet<usize>) -> String {
    if lines.is_empty() {
        return "∅".into();
    }
    let items: Vec<String> = lines.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(","))
}

impl Stratification {
    pub fn lines(&self, p: &Program) -> Vec<BTreeSet<usize>> {
        self.strata.iter().map(|s| s.lines(p)).collect()
    }

    /// `({1,2,3},{5},...)` using source line numbers.
    pub fn render(&self, p: &Program) -> String {
        let parts: Vec<String> = self.lines(p).iter().map(render_lines).collect();
        format!("({})", parts.join(","))
    }

    pub fn same_component(&self, a: &Node, b: &Node) -> bool {
        match (self.component.get(a), self.component.get(b)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }

    /// Stratum index of each rule.
    pub fn rule_levels(&self, rules: usize) -> Vec<usize> {
        let mut out = vec![0; rules];
        for (i, s) in self.strata.iter().enumerate() {
            for &r in &s.rules {
                out[r] = i;
            }
        }
        out
    }
}

/// Phase of a component: facts, then choices, then normal rules.
fn own_phase(p: &Program, rules: &[usize]) -> u8 {
    let mut phase = 0;
    for &i in rules {
        phase = phase.max(match p.rules[i].kind() {
            RuleKind::Fact => 0,
            RuleKind::Choice => 1,
            _ => 2,
        });
    }
    phase
}

/// Computes the stratification.
///
/// Components of the dependency graph (predicates sharing a choice head are
/// merged) are assigned a phase: 0 for facts only, 1 when choices are
/// involved, 2 for normal rules; a component's phase is raised to that of
/// anything it depends on. Within a phase, a component is placed one level
/// above the highest same-phase component it depends on, and components
/// with equal phase and level share a stratum. Constraints come last, those
/// with aggregates first.
pub fn stratify(p: &Program) -> Stratification {
    let dg = DependencyGraph::build(p);
    let mut graph: DiGraph<Node, ()> = DiGraph::new();
    let mut index: BTreeMap<Node, NodeIndex> = BTreeMap::new();
    for n in &dg.nodes {
        index.insert(n.clone(), graph.add_node(n.clone()));
    }
    for (a, b) in dg.edges.keys() {
        graph.add_edge(index[a], index[b], ());
    }
    for rule in &p.rules {
        let heads = head_nodes(rule);
        for w in heads.windows(2) {
            graph.add_edge(index[&w[0]], index[&w[1]], ());
            graph.add_edge(index[&w[1]], index[&w[0]], ());
        }
    }

    let mut defs: BTreeMap<Node, Vec<usize>> = BTreeMap::new();
    for (i, r) in p.rules.iter().enumerate() {
        for h in head_nodes(r) {
            defs.entry(h).or_default().push(i);
        }
    }

    // dependencies come before their dependents
    let sccs = tarjan_scc(&graph);
    let mut component = BTreeMap::new();
    for (c, scc) in sccs.iter().enumerate() {
        for &n in scc {
            component.insert(graph[n].clone(), c);
        }
    }
    let mut eff = vec![0u8; sccs.len()];
    let mut depth = vec![0usize; sccs.len()];
    let mut comp_rules: Vec<Vec<usize>> = vec![Vec::new(); sccs.len()];
    for (c, scc) in sccs.iter().enumerate() {
        let mut rules: Vec<usize> =
            scc.iter().flat_map(|&n| defs.get(&graph[n]).cloned().unwrap_or_default()).collect();
        rules.sort_unstable();
        rules.dedup();
        let deps: BTreeSet<usize> =
            scc.iter().flat_map(|&n| graph.neighbors(n)).map(|m| component[&graph[m]]).filter(|&d| d != c).collect();
        let mut phase = own_phase(p, &rules);
        for &d in &deps {
            phase = phase.max(eff[d]);
        }
        eff[c] = phase;
        depth[c] = deps.iter().filter(|&&d| eff[d] == phase).map(|&d| depth[d] + 1).max().unwrap_or(0);
        comp_rules[c] = rules;
    }

    let mut groups: BTreeMap<(u8, usize), Vec<usize>> = BTreeMap::new();
    for (c, scc) in sccs.iter().enumerate() {
        if scc.iter().any(|&n| graph[n] == Node::Bottom) || comp_rules[c].is_empty() {
            continue;
        }
        let key = if eff[c] == 0 { (0, 0) } else { (eff[c], depth[c]) };
        groups.entry(key).or_default().extend(comp_rules[c].iter().copied());
    }

    let mut strata = Vec::new();
    for ((phase, _), mut rules) in groups {
        rules.sort_unstable();
        rules.dedup();
        let kind = match phase {
            0 => StratumKind::Facts,
            1 => StratumKind::Choices,
            _ => StratumKind::Normal,
        };
        strata.push(Stratum { kind, rules, predicates: Vec::new() });
    }
    let constraints: Vec<usize> = defs.get(&Node::Bottom).cloned().unwrap_or_default();
    let (with_agg, plain): (Vec<usize>, Vec<usize>) =
        constraints.into_iter().partition(|&i| p.rules[i].has_aggregate());
    for group in [with_agg, plain] {
        if !group.is_empty() {
            strata.push(Stratum { kind: StratumKind::Constraints, rules: group, predicates: Vec::new() });
        }
    }

    let mut predicate_level = BTreeMap::new();
    for (level, s) in strata.iter_mut().enumerate() {
        for &i in &s.rules {
            for h in head_nodes(&p.rules[i]) {
                if let Node::Pred(pred) = h {
                    if !s.predicates.contains(&pred) {
                        s.predicates.push(pred.clone());
                    }
                    predicate_level.insert(pred, level);
                }
            }
        }
    }
    Stratification { strata, predicate_level, component }
}
