//! Candidate enumeration and depth-first search over choice atoms.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::eval::{atom_components, Evaluator};
use super::ground::{
    ground, Conj, GroundAggregate, GroundChoice, GroundConstraint, GroundElement, GroundProgram, GroundRule,
};
use super::table::AtomId;
use super::{EngineError, SolveOptions};
use crate::ht::{AtomSet, ModelSet};
use crate::syntax::{Head, Program, Value};
use crate::transform::{constraint_id, debug_transform, VIOLATION_PREDICATE};

use super::ground::match_value;

type Truth = Option<bool>;

fn and3(a: Truth, b: Truth) -> Truth {
    match (a, b) {
        (Some(false), _) | (_, Some(false)) => Some(false),
        (Some(true), Some(true)) => Some(true),
        _ => None,
    }
}

/// Truth of an aggregate whose count lies in `lo..=hi`.
fn verdict(a: &GroundAggregate, lo: usize, hi: usize) -> Truth {
    let admitted = (lo..=hi).filter(|&n| a.admits(n)).count();
    let t = if admitted == hi - lo + 1 {
        Some(true)
    } else if admitted == 0 {
        Some(false)
    } else {
        None
    };
    t.map(|v| v != a.negated)
}

/// Three-valued view of a partial model: `k` is certainly true, atoms
/// outside `u` are certainly false.
struct View<'a> {
    k: &'a FixedBitSet,
    u: &'a FixedBitSet,
}

impl View<'_> {
    fn atom(&self, a: AtomId) -> Truth {
        if self.k.contains(a) {
            Some(true)
        } else if !self.u.contains(a) {
            Some(false)
        } else {
            None
        }
    }

    fn conj(&self, pos: &[AtomId], neg: &[AtomId]) -> Truth {
        let mut t = Some(true);
        for &a in pos {
            t = and3(t, self.atom(a));
        }
        for &a in neg {
            t = and3(t, self.atom(a).map(|v| !v));
        }
        t
    }

    fn any(&self, cs: &[Conj]) -> Truth {
        let mut t = Some(false);
        for c in cs {
            match self.conj(&c.pos, &c.neg) {
                Some(true) => return Some(true),
                None => t = None,
                Some(false) => {}
            }
        }
        t
    }

    fn element(&self, e: &GroundElement) -> Truth {
        and3(self.atom(e.atom).map(|v| v != e.negated), self.any(&e.conditions))
    }

    fn counts(&self, a: &GroundAggregate) -> (usize, usize) {
        let (mut lo, mut hi) = (0, 0);
        for e in &a.elements {
            match self.element(e) {
                Some(true) => {
                    lo += 1;
                    hi += 1;
                }
                None => hi += 1,
                Some(false) => {}
            }
        }
        (lo, hi)
    }

    fn aggregate(&self, a: &GroundAggregate) -> Truth {
        let (lo, hi) = self.counts(a);
        verdict(a, lo, hi)
    }

    fn constraint(&self, c: &GroundConstraint) -> Truth {
        let mut t = self.conj(&c.pos, &c.neg);
        for a in &c.aggregates {
            if t == Some(false) {
                break;
            }
            t = and3(t, self.aggregate(a));
        }
        t
    }

    fn violated(&self, g: &GroundProgram) -> bool {
        g.constraints.iter().any(|c| self.constraint(c) == Some(true))
    }

    /// Sum of the weights of tuples whose condition certainly holds.
    fn cost(&self, g: &GroundProgram) -> i64 {
        g.minimize.iter().filter(|w| self.any(&w.conditions) == Some(true)).map(|w| w.weight).sum()
    }
}

/// Rewrites the program so that every choice is bodiless and negation is
/// stratified at the level of atoms; the added atoms are hidden.
fn prepare(g: &GroundProgram) -> GroundProgram {
    let mut p = g.clone();
    p.choices.clear();
    for (i, c) in g.choices.iter().enumerate() {
        if c.pos.is_empty() && c.neg.is_empty() {
            p.choices.push(c.clone());
            continue;
        }
        let pick = p.table.fresh_hidden(format!("__pick{i}"));
        let support = p.table.fresh_hidden(format!("__support{i}"));
        p.choices.push(GroundChoice { atom: pick, pos: vec![], neg: vec![], line: c.line });
        let mut pos = c.pos.clone();
        pos.push(pick);
        p.rules.push(GroundRule { head: c.atom, pos, neg: c.neg.clone(), line: c.line });
        p.rules.push(GroundRule { head: support, pos: c.pos.clone(), neg: c.neg.clone(), line: c.line });
        p.constraints.push(GroundConstraint { pos: vec![pick], neg: vec![support], aggregates: vec![], line: c.line });
    }
    if p.rules.iter().all(|r| r.neg.is_empty()) {
        return p;
    }
    let (sccs, violation) = atom_components(&p);
    if violation.is_none() {
        return p;
    }
    let mut comp = vec![0; p.table.len()];
    for (i, c) in sccs.iter().enumerate() {
        for &a in c {
            comp[a] = i;
        }
    }
    // guess the complement of each atom negated inside its own component
    let mut guess: HashMap<AtomId, AtomId> = HashMap::new();
    let mut rules = std::mem::take(&mut p.rules);
    for r in &mut rules {
        let (inner, outer): (Vec<AtomId>, Vec<AtomId>) = r.neg.iter().partition(|&&b| comp[b] == comp[r.head]);
        for b in inner {
            let x = *guess.entry(b).or_insert_with(|| {
                let x = p.table.fresh_hidden(format!("__guess_not_{}", p.table.name(b)));
                p.choices.push(GroundChoice { atom: x, pos: vec![], neg: vec![], line: r.line });
                p.constraints.push(GroundConstraint { pos: vec![b, x], neg: vec![], aggregates: vec![], line: r.line });
                p.constraints.push(GroundConstraint { pos: vec![], neg: vec![b, x], aggregates: vec![], line: r.line });
                x
            });
            r.pos.push(x);
        }
        r.neg = outer;
    }
    p.rules = rules;
    p
}

fn check_cap(count: usize, opts: &SolveOptions) -> Result<(), EngineError> {
    if count > opts.max_choices {
        return Err(EngineError::TooManyChoices { count, cap: opts.max_choices });
    }
    Ok(())
}

struct Search<'g> {
    g: &'g GroundProgram,
    ev: Evaluator<'g>,
    branch: Vec<AtomId>,
    /// Atoms that no rule derives.
    pure: Vec<bool>,
    optimizing: bool,
    prune_cost: bool,
    limit: usize,
    best: Option<i64>,
    found: Vec<(AtomSet, i64)>,
    seen: HashSet<AtomSet>,
}

impl<'g> Search<'g> {
    fn new(g: &'g GroundProgram, optimizing: bool, limit: usize) -> Self {
        let mut pure = vec![true; g.table.len()];
        for r in &g.rules {
            pure[r.head] = false;
        }
        Search {
            pure,
            g,
            ev: Evaluator::new(g),
            branch: g.choice_atoms(),
            optimizing,
            prune_cost: g.minimize.iter().all(|w| w.weight >= 0),
            limit,
            best: None,
            found: Vec::new(),
            seen: HashSet::new(),
        }
    }

    fn done(&self) -> bool {
        !self.optimizing && self.limit > 0 && self.seen.len() >= self.limit
    }

    fn run(&mut self) {
        let t = self.ev.facts();
        let mut open = self.ev.empty();
        for &a in &self.branch {
            open.insert(a);
        }
        self.dfs(t, open);
    }

    /// Values of open choice atoms without which some constraint would
    /// certainly be violated; `None` on a conflict.
    fn implied(&self, view: &View, open: &FixedBitSet) -> Option<Vec<(AtomId, bool)>> {
        let free = |a: AtomId| open.contains(a) && self.pure[a];
        let mut out: Vec<(AtomId, bool)> = Vec::new();
        for c in &self.g.constraints {
            let mut unknown = Vec::new();
            let mut blocked = false;
            for (a, pos) in c.pos.iter().map(|&a| (a, true)).chain(c.neg.iter().map(|&a| (a, false))) {
                match view.atom(a).map(|v| v == pos) {
                    Some(false) => {
                        blocked = true;
                        break;
                    }
                    Some(true) => {}
                    None => unknown.push((a, pos)),
                }
            }
            if blocked || unknown.len() > 1 {
                continue;
            }
            let aggs: Vec<Truth> = c.aggregates.iter().map(|a| view.aggregate(a)).collect();
            if aggs.contains(&Some(false)) {
                continue;
            }
            let undecided: Vec<usize> = (0..aggs.len()).filter(|&i| aggs[i].is_none()).collect();
            match (unknown.first(), undecided.as_slice()) {
                (Some(&(a, pos)), []) if free(a) => out.push((a, !pos)),
                (None, [i]) => {
                    let agg = &c.aggregates[*i];
                    let (lo, hi) = view.counts(agg);
                    for e in &agg.elements {
                        if !free(e.atom)
                            || view.any(&e.conditions) != Some(true)
                            || agg.elements.iter().filter(|x| x.atom == e.atom).count() > 1
                        {
                            continue;
                        }
                        let with = verdict(agg, lo + 1, hi) == Some(true);
                        let without = verdict(agg, lo, hi - 1) == Some(true);
                        match (with, without) {
                            (true, true) => return None,
                            (true, false) => out.push((e.atom, e.negated)),
                            (false, true) => out.push((e.atom, !e.negated)),
                            (false, false) => {}
                        }
                    }
                }
                _ => {}
            }
        }
        out.sort_unstable();
        out.dedup();
        if out.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        Some(out)
    }

    fn dfs(&mut self, mut t: FixedBitSet, mut open: FixedBitSet) {
        let (k, u) = loop {
            let mut upper = t.clone();
            upper.union_with(&open);
            let (k, u) = self.ev.alternate(&t, &upper);
            let view = View { k: &k, u: &u };
            if view.violated(self.g) {
                return;
            }
            match self.implied(&view, &open) {
                None => return,
                Some(forced) if forced.is_empty() => break (k, u),
                Some(forced) => {
                    for (a, v) in forced {
                        open.set(a, false);
                        t.set(a, v);
                    }
                }
            }
        };
        let view = View { k: &k, u: &u };
        if self.optimizing && self.prune_cost {
            if let Some(b) = self.best {
                if view.cost(self.g) > b {
                    return;
                }
            }
        }
        let Some(&a) = self.branch.iter().find(|&&a| open.contains(a)) else {
            if k != u {
                return;
            }
            let cost = view.cost(self.g);
            let shown = self.g.project(&k);
            if self.optimizing {
                if self.best.is_some_and(|b| cost > b) {
                    return;
                }
                if self.best.is_none_or(|b| cost < b) {
                    self.best = Some(cost);
                    self.found.clear();
                    self.seen.clear();
                }
            }
            if self.seen.insert(shown.clone()) {
                self.found.push((shown, cost));
            }
            return;
        };
        open.set(a, false);
        self.dfs(t.clone(), open.clone());
        if self.done() {
            return;
        }
        t.insert(a);
        self.dfs(t, open);
    }
}

fn search(
    g: &GroundProgram,
    opts: &SolveOptions,
    optimizing: bool,
) -> Result<(GroundProgram, Vec<(AtomSet, i64)>), EngineError> {
    let p = prepare(g);
    let mut s = Search::new(&p, optimizing, opts.max_models);
    check_cap(s.branch.len(), opts)?;
    s.run();
    let found = std::mem::take(&mut s.found);
    Ok((p, found))
}

/// Stable models, projected to the shown atoms.
pub fn stable_models(g: &GroundProgram, opts: &SolveOptions) -> Result<ModelSet, EngineError> {
    let (_, found) = search(g, opts, false)?;
    Ok(ModelSet::new(g.vocabulary(), found.into_iter().map(|(m, _)| m)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Optimum {
    pub models: ModelSet,
    /// `None` when there is no stable model.
    pub cost: Option<i64>,
}

/// Stable models of least cost; every tie is kept.
pub fn optimize(g: &GroundProgram, opts: &SolveOptions) -> Result<Optimum, EngineError> {
    let (_, found) = search(g, &SolveOptions { max_models: 0, ..*opts }, true)?;
    let cost = found.iter().map(|(_, c)| *c).min();
    let mut models = ModelSet::new(g.vocabulary(), found.into_iter().filter(|(_, c)| Some(*c) == cost).map(|(m, _)| m));
    if opts.max_models > 0 {
        models.models.truncate(opts.max_models);
    }
    Ok(Optimum { models, cost })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub model: AtomSet,
    /// The first choice set producing the model.
    pub choice: AtomSet,
    /// How many choice sets produce it.
    pub multiplicity: usize,
    /// Whether the model passes every integrity constraint.
    pub consistent: bool,
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The least fixpoint for every subset of the choice atoms, by subset size
/// and then lexicographically on atom ids.
pub fn candidate_models(g: &GroundProgram, opts: &SolveOptions) -> Result<Vec<Candidate>, EngineError> {
    if !g.is_austere() {
        let line = g
            .choices
            .iter()
            .find(|c| !c.pos.is_empty() || !c.neg.is_empty())
            .map(|c| c.line)
            .or_else(|| g.rules.iter().find(|r| !r.neg.is_empty()).map(|r| r.line))
            .unwrap_or(0);
        return Err(EngineError::NotAustere(format!("line {line}")));
    }
    let fc = g.choice_atoms();
    check_cap(fc.len(), opts)?;
    let ev = Evaluator::new(g);
    let facts = ev.facts();
    let mut out: Vec<Candidate> = Vec::new();
    let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
    for k in 0..=fc.len() {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            let mut base = facts.clone();
            for &i in &combo {
                base.insert(fc[i]);
            }
            let m = ev.lfp(&base, &|_| true);
            match index.get(&m) {
                Some(&i) => out[i].multiplicity += 1,
                None => {
                    let view = View { k: &m, u: &m };
                    out.push(Candidate {
                        model: g.names(&m),
                        choice: combo.iter().map(|&i| g.table.name(fc[i]).to_string()).collect(),
                        multiplicity: 1,
                        consistent: !view.violated(g),
                    });
                    index.insert(m, out.len() - 1);
                }
            }
            if !next_combination(&mut combo, fc.len()) {
                break;
            }
        }
    }
    Ok(out)
}

/// A violated constraint instance: the `ic` atom, the constraint it comes
/// from and the variable bindings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub atom: String,
    pub line: usize,
    pub constraint: String,
    pub bindings: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DebugResult {
    /// Models including their `ic` atoms.
    pub models: ModelSet,
    pub violations: Vec<Vec<Violation>>,
    pub cost: Option<i64>,
}

impl DebugResult {
    /// The models without `ic` atoms.
    pub fn projected(&self) -> ModelSet {
        let prefix = format!("{VIOLATION_PREDICATE}(");
        let strip = |m: &AtomSet| m.iter().filter(|a| !a.starts_with(&prefix)).cloned().collect::<AtomSet>();
        ModelSet::new(strip(&self.models.vocabulary), self.models.models.iter().map(strip))
    }
}

/// Solves with every integrity constraint relaxed into a violation atom,
/// keeping the models with the fewest violations.
pub fn debug_solve(p: &Program, opts: &SolveOptions) -> Result<DebugResult, EngineError> {
    let relaxed = debug_transform(p)?;
    let g = ground(&relaxed)?;
    let best = optimize(&g, opts)?;
    let sources: Vec<_> =
        p.rules.iter().filter(|r| matches!(r.head, Head::Falsum)).map(|r| (constraint_id(r), r)).collect();
    let explain = |name: &String| -> Option<Violation> {
        let id = g.table.id_of(name)?;
        let atom = g.table.atom(id);
        if atom.pred != VIOLATION_PREDICATE || atom.args.len() != 1 {
            return None;
        }
        let v: &Value = &atom.args[0];
        sources.iter().find_map(|(t, r)| {
            match_value(t, v).map(|b| Violation {
                atom: name.clone(),
                line: r.line,
                constraint: r.to_string(),
                bindings: b.into_iter().map(|(k, v)| (k, v.to_string())).collect(),
            })
        })
    };
    let violations = best.models.models.iter().map(|m| m.iter().filter_map(explain).collect()).collect();
    Ok(DebugResult { models: best.models, violations, cost: best.cost })
}
