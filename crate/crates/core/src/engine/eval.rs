//! Fixpoints: T_P, stratified evaluation and the well-founded model.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use super::ground::{Conj, GroundAggregate, GroundProgram, GroundRule};
use super::table::AtomId;
use super::EngineError;
use crate::ht::AtomSet;
use crate::syntax::{
    Aggregate, AggregateFunction, Atom, BodyElem, Choice, Condition, Element, Head, Literal, Program, Rule, Sign,
};

impl GroundProgram {
    /// F_C: atoms of bodiless choices that are not facts, in id order.
    pub fn choice_atoms(&self) -> Vec<AtomId> {
        let facts: BTreeSet<AtomId> = self.facts.iter().copied().collect();
        let set: BTreeSet<AtomId> = self
            .choices
            .iter()
            .filter(|c| c.pos.is_empty() && c.neg.is_empty() && !facts.contains(&c.atom))
            .map(|c| c.atom)
            .collect();
        set.into_iter().collect()
    }

    /// Bodiless choices, definite rules; constraints of any kind.
    pub fn is_austere(&self) -> bool {
        self.choices.iter().all(|c| c.pos.is_empty() && c.neg.is_empty()) && self.rules.iter().all(|r| r.neg.is_empty())
    }

    pub fn names(&self, set: &FixedBitSet) -> AtomSet {
        set.ones().filter(|&i| !self.table.is_hidden(i)).map(|i| self.table.name(i).to_string()).collect()
    }

    /// Visible atoms, restricted to `#show` predicates when present.
    pub fn vocabulary(&self) -> AtomSet {
        self.table.visible().filter(|&i| self.shown(i)).map(|i| self.table.name(i).to_string()).collect()
    }

    pub fn shown(&self, id: AtomId) -> bool {
        if self.table.is_hidden(id) {
            return false;
        }
        match &self.show {
            None => true,
            Some(preds) => {
                let a = self.table.atom(id);
                preds.iter().any(|p| p.name == a.pred && p.arity == a.args.len())
            }
        }
    }

    pub fn project(&self, set: &FixedBitSet) -> AtomSet {
        set.ones().filter(|&i| self.shown(i)).map(|i| self.table.name(i).to_string()).collect()
    }

    fn ids(&self, names: &AtomSet) -> Result<Vec<AtomId>, EngineError> {
        names.iter().map(|n| self.table.id_of(n).ok_or_else(|| EngineError::UnknownAtom(n.clone()))).collect()
    }

    /// F ∪ C′ ∪ D: the chosen atoms become facts; choices, constraints and
    /// the minimize statement are dropped.
    pub fn with_choices(&self, chosen: &[AtomId]) -> GroundProgram {
        let mut facts = self.facts.clone();
        for &c in chosen {
            if !facts.contains(&c) {
                facts.push(c);
            }
        }
        GroundProgram {
            table: self.table.clone(),
            facts,
            rules: self.rules.clone(),
            show: self.show.clone(),
            ..Default::default()
        }
    }

    pub fn with_chosen_names(&self, chosen: &AtomSet) -> Result<GroundProgram, EngineError> {
        Ok(self.with_choices(&self.ids(chosen)?))
    }

    fn atom_of(&self, id: AtomId) -> Atom {
        self.table.atom(id).to_atom()
    }

    fn literals(&self, c: &Conj) -> Vec<Literal> {
        c.pos
            .iter()
            .map(|&a| Literal::pos(self.atom_of(a)))
            .chain(c.neg.iter().map(|&a| Literal::neg(self.atom_of(a))))
            .collect()
    }

    fn aggregate_ast(&self, a: &GroundAggregate) -> BodyElem {
        let mut elements = Vec::new();
        for e in &a.elements {
            let lit = if e.negated { Literal::neg(self.atom_of(e.atom)) } else { Literal::pos(self.atom_of(e.atom)) };
            for c in &e.conditions {
                elements.push(Element::new(lit.clone(), self.literals(c).into_iter().map(Condition::Lit).collect()));
            }
        }
        let aggregate =
            Aggregate { function: AggregateFunction::Count, keyword: true, elements, bounds: a.bounds.clone() };
        BodyElem::Agg { sign: if a.negated { Sign::Negative } else { Sign::Positive }, aggregate }
    }

    /// The ground program as source rules, without the minimize statement.
    /// Hidden atoms must not occur.
    pub fn to_program(&self) -> Program {
        let mut rules = Vec::new();
        for &f in &self.facts {
            rules.push(Rule::fact(self.atom_of(f)));
        }
        for c in &self.choices {
            let body = self.literals(&Conj { pos: c.pos.clone(), neg: c.neg.clone() });
            let head = Head::Choice(Choice::plain(vec![Element::atom(self.atom_of(c.atom))]));
            rules.push(Rule::new(head, body.into_iter().map(BodyElem::Lit).collect()).at_line(c.line));
        }
        for r in &self.rules {
            let body = self.literals(&Conj { pos: r.pos.clone(), neg: r.neg.clone() });
            rules.push(Rule::normal(self.atom_of(r.head), body).at_line(r.line));
        }
        for c in &self.constraints {
            let mut body: Vec<BodyElem> = self
                .literals(&Conj { pos: c.pos.clone(), neg: c.neg.clone() })
                .into_iter()
                .map(BodyElem::Lit)
                .collect();
            body.extend(c.aggregates.iter().map(|a| self.aggregate_ast(a)));
            rules.push(Rule::constraint(body).at_line(c.line));
        }
        Program::new(rules, Vec::new()).expect("ground atoms keep their arities")
    }
}

/// Rules indexed by their positive body atoms.
pub(crate) struct Evaluator<'g> {
    pub g: &'g GroundProgram,
    watch: Vec<Vec<usize>>,
}

impl<'g> Evaluator<'g> {
    pub fn new(g: &'g GroundProgram) -> Self {
        let mut watch = vec![Vec::new(); g.table.len()];
        for (i, r) in g.rules.iter().enumerate() {
            for &a in &r.pos {
                watch[a].push(i);
            }
        }
        Evaluator { g, watch }
    }

    pub fn empty(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.g.table.len())
    }

    /// Least model of the rules over `base`, reading `not a` as true iff
    /// `neg_ok(a)`.
    pub fn lfp(&self, base: &FixedBitSet, neg_ok: &dyn Fn(AtomId) -> bool) -> FixedBitSet {
        let rules = &self.g.rules;
        let mut model = base.clone();
        let mut missing: Vec<usize> = rules.iter().map(|r| r.pos.len()).collect();
        let mut queue: Vec<AtomId> = model.ones().collect();
        let enabled = |r: &GroundRule| r.neg.iter().all(|&a| neg_ok(a));
        let fire = |r: &GroundRule, model: &mut FixedBitSet, queue: &mut Vec<AtomId>| {
            if !model.contains(r.head) && enabled(r) {
                model.insert(r.head);
                queue.push(r.head);
            }
        };
        for r in rules.iter().filter(|r| r.pos.is_empty()) {
            fire(r, &mut model, &mut queue);
        }
        while let Some(a) = queue.pop() {
            for &i in &self.watch[a] {
                missing[i] -= 1;
                if missing[i] == 0 {
                    fire(&rules[i], &mut model, &mut queue);
                }
            }
        }
        model
    }

    pub fn facts(&self) -> FixedBitSet {
        let mut s = self.empty();
        for &f in &self.g.facts {
            s.insert(f);
        }
        s
    }

    /// Alternating fixpoint from `lower_base ⊆ upper_base`.
    pub fn alternate(&self, lower_base: &FixedBitSet, upper_base: &FixedBitSet) -> (FixedBitSet, FixedBitSet) {
        let mut k = self.empty();
        let mut u = self.lfp(upper_base, &|_| true);
        loop {
            let k2 = self.lfp(lower_base, &|a| !u.contains(a));
            let u2 = self.lfp(upper_base, &|a| !k2.contains(a));
            if k2 == k && u2 == u {
                return (k, u);
            }
            k = k2;
            u = u2;
        }
    }
}

fn require_definite(g: &GroundProgram) -> Result<(), EngineError> {
    match g.rules.iter().find(|r| !r.neg.is_empty()) {
        Some(r) => Err(EngineError::NotDefinite { line: r.line }),
        None => Ok(()),
    }
}

/// One application of T_P for the facts and rules of `g` (choices and
/// constraints are not part of it).
pub fn tp_step(g: &GroundProgram, x: &AtomSet) -> Result<AtomSet, EngineError> {
    require_definite(g)?;
    let holds = |a: AtomId| x.contains(g.table.name(a));
    let mut out = AtomSet::new();
    for &f in &g.facts {
        out.insert(g.table.name(f).to_string());
    }
    for r in &g.rules {
        if r.pos.iter().all(|&a| holds(a)) {
            out.insert(g.table.name(r.head).to_string());
        }
    }
    Ok(out)
}

/// Least fixpoint of T_P for the facts and rules of `g`.
pub fn least_fixpoint(g: &GroundProgram) -> Result<AtomSet, EngineError> {
    require_definite(g)?;
    let ev = Evaluator::new(g);
    Ok(g.names(&ev.lfp(&ev.facts(), &|_| true)))
}

fn require_normal(g: &GroundProgram) -> Result<(), EngineError> {
    if let Some(c) = g.choices.first() {
        return Err(EngineError::NotNormal(format!("choice rule at line {}", c.line)));
    }
    Ok(())
}

/// Atom-level components in dependency order, and whether negation stays
/// between components.
pub(crate) fn atom_components(g: &GroundProgram) -> (Vec<Vec<AtomId>>, Option<(AtomId, usize)>) {
    let mut graph: DiGraph<AtomId, ()> = DiGraph::with_capacity(g.table.len(), 0);
    let nodes: Vec<_> = (0..g.table.len()).map(|i| graph.add_node(i)).collect();
    for r in &g.rules {
        for &b in r.pos.iter().chain(&r.neg) {
            graph.add_edge(nodes[r.head], nodes[b], ());
        }
    }
    let sccs: Vec<Vec<AtomId>> =
        tarjan_scc(&graph).into_iter().map(|c| c.into_iter().map(|n| graph[n]).collect()).collect();
    let mut comp = vec![0; g.table.len()];
    for (i, c) in sccs.iter().enumerate() {
        for &a in c {
            comp[a] = i;
        }
    }
    let violation = g.rules.iter().find_map(|r| r.neg.iter().find(|&&b| comp[b] == comp[r.head]).map(|&b| (b, r.line)));
    (sccs, violation)
}

/// The unique stable model of a program with stratified negation, computed
/// component by component.
pub fn stratified_model(g: &GroundProgram) -> Result<AtomSet, EngineError> {
    require_normal(g)?;
    let (sccs, violation) = atom_components(g);
    if let Some((atom, line)) = violation {
        return Err(EngineError::Stratification { line, atom: g.table.name(atom).to_string() });
    }
    let mut by_head: HashMap<AtomId, Vec<&GroundRule>> = HashMap::new();
    for r in &g.rules {
        by_head.entry(r.head).or_default().push(r);
    }
    let ev = Evaluator::new(g);
    let mut model = ev.facts();
    for comp in &sccs {
        loop {
            let mut changed = false;
            for a in comp {
                if model.contains(*a) {
                    continue;
                }
                let fires = by_head.get(a).is_some_and(|rs| {
                    rs.iter()
                        .any(|r| r.pos.iter().all(|&p| model.contains(p)) && r.neg.iter().all(|&n| !model.contains(n)))
                });
                if fires {
                    model.insert(*a);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
    Ok(g.names(&model))
}

/// A three-valued interpretation over every atom of the table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThreeValuedModel {
    pub true_set: AtomSet,
    pub false_set: AtomSet,
    pub unknown_set: AtomSet,
}

impl ThreeValuedModel {
    pub fn is_total(&self) -> bool {
        self.unknown_set.is_empty()
    }
}

/// Well-founded model of the facts and rules by the alternating fixpoint.
pub fn well_founded_model(g: &GroundProgram) -> Result<ThreeValuedModel, EngineError> {
    require_normal(g)?;
    let ev = Evaluator::new(g);
    let facts = ev.facts();
    let (k, u) = ev.alternate(&facts, &facts);
    let mut m = ThreeValuedModel { true_set: AtomSet::new(), false_set: AtomSet::new(), unknown_set: AtomSet::new() };
    for i in 0..g.table.len() {
        let name = g.table.name(i).to_string();
        if k.contains(i) {
            m.true_set.insert(name);
        } else if u.contains(i) {
            m.unknown_set.insert(name);
        } else {
            m.false_set.insert(name);
        }
    }
    Ok(m)
}
