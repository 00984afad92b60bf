//! Austere, easy and stratified-negation classes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use super::graph::{head_nodes, DependencyGraph, Node, Polarity};
use super::strata::{render_lines, stratify, Stratification, StratumKind};
use super::{Diagnostic, Severity};
use crate::syntax::{BodyElem, Condition, Head, Pred, Program, RuleKind};

fn lines_of(p: &Program, rules: &[usize]) -> BTreeSet<usize> {
    rules.iter().map(|&i| p.rules[i].line).collect()
}

fn diag(p: &Program, i: usize, severity: Severity, message: String) -> Diagnostic {
    let r = &p.rules[i];
    Diagnostic::new(severity, r.line, r.to_string(), message)
}

/// Result of [`check_stratified_negation`].
#[derive(Clone, Debug, Serialize)]
pub struct NegationReport {
    pub ok: bool,
    pub diagnostics: Vec<Diagnostic>,
}

/// Whether every predicate used negatively is defined in a strictly lower
/// stratum than the rule using it.
pub fn check_stratified_negation(p: &Program) -> NegationReport {
    let st = stratify(p);
    negation_report(p, &st, &DependencyGraph::build(p))
}

fn negation_report(p: &Program, st: &Stratification, dg: &DependencyGraph) -> NegationReport {
    let levels = st.rule_levels(p.rules.len());
    let mut seen = BTreeSet::new();
    let mut diagnostics = Vec::new();
    for ((_, q), witnesses) in &dg.edges {
        let Node::Pred(qp) = q else { continue };
        for w in witnesses.iter().filter(|w| w.polarity == Polarity::Negative) {
            let bad = st.predicate_level.get(qp).is_some_and(|&lq| lq >= levels[w.rule]);
            if bad && seen.insert((w.rule, qp.clone())) {
                diagnostics.push(diag(
                    p,
                    w.rule,
                    Severity::Error,
                    format!("`{qp}` is used negatively but not defined in a lower stratum"),
                ));
            }
        }
    }
    diagnostics.sort_by_key(|d| d.line);
    NegationReport { ok: diagnostics.is_empty(), diagnostics }
}

/// Result of [`check_austere`]: rule indices per part.
#[derive(Clone, Debug, Default, Serialize)]
pub struct AustereReport {
    pub ok: bool,
    pub facts: Vec<usize>,
    pub choices: Vec<usize>,
    pub definite: Vec<usize>,
    pub constraints: Vec<usize>,
    pub diagnostics: Vec<Diagnostic>,
}

fn positive_only(body: &[BodyElem]) -> bool {
    body.iter().all(|b| match b {
        BodyElem::Lit(l) => !l.is_negative(),
        BodyElem::Cmp(_) => true,
        BodyElem::Agg { .. } => false,
    })
}

/// Whether the program has the shape (F, C, D, I).
///
/// A choice qualifies when it is unbounded and its body and element
/// conditions only mention comparisons and predicates defined by facts
/// alone, so that grounding turns it into bodiless choices.
pub fn check_austere(p: &Program) -> AustereReport {
    let mut fact_only: BTreeMap<Pred, bool> = BTreeMap::new();
    for r in &p.rules {
        for a in r.head_atoms() {
            *fact_only.entry(a.predicate()).or_insert(true) &= r.kind() == RuleKind::Fact;
        }
    }
    let extensional = |pred: &Pred| fact_only.get(pred).copied().unwrap_or(true);
    let mut rep = AustereReport::default();
    for (i, r) in p.rules.iter().enumerate() {
        match &r.head {
            Head::Falsum => rep.constraints.push(i),
            Head::Atom(_) if r.body.is_empty() => rep.facts.push(i),
            Head::Atom(_) => {
                if positive_only(&r.body) {
                    rep.definite.push(i);
                } else {
                    rep.diagnostics.push(diag(p, i, Severity::Error, "rule is not definite".into()));
                }
            }
            Head::Choice(c) => {
                if !c.bounds.is_empty() || c.function.is_some() {
                    rep.diagnostics.push(diag(p, i, Severity::Error, "choice has cardinality bounds".into()));
                    continue;
                }
                let conds = c.elements.iter().flat_map(|e| &e.condition).filter_map(|c| match c {
                    Condition::Lit(l) => Some(l),
                    Condition::Cmp(_) => None,
                });
                let mut lits = r.body_literals().chain(conds);
                let simple =
                    positive_only(&r.body) && lits.all(|l| !l.is_negative() && extensional(&l.atom.predicate()));
                if simple {
                    rep.choices.push(i);
                } else {
                    rep.diagnostics.push(diag(
                        p,
                        i,
                        Severity::Error,
                        "choice body does not reduce to facts under grounding".into(),
                    ));
                }
            }
        }
    }
    rep.ok = rep.diagnostics.is_empty();
    rep
}

/// A program split as (F, C, D₁, …, Dₙ, I).
#[derive(Clone, Debug, Serialize)]
pub struct EasyDecomposition {
    pub easy: bool,
    pub austere: bool,
    pub stratified_negation: bool,
    pub facts: Vec<usize>,
    pub choices: Vec<usize>,
    pub normal: Vec<Vec<usize>>,
    /// Constraint strata; those with aggregates come first.
    pub constraints: Vec<Vec<usize>>,
    pub diagnostics: Vec<Diagnostic>,
    #[serde(skip)]
    pub stratification: Stratification,
}

impl EasyDecomposition {
    pub fn class(&self) -> &'static str {
        if self.easy {
            "easy"
        } else {
            "not-easy"
        }
    }

    /// Line sets of every part; F, C and I are always present.
    pub fn parts(&self, p: &Program) -> Vec<BTreeSet<usize>> {
        let mut out = vec![lines_of(p, &self.facts), lines_of(p, &self.choices)];
        out.extend(self.normal.iter().map(|s| lines_of(p, s)));
        if self.constraints.is_empty() {
            out.push(BTreeSet::new());
        }
        out.extend(self.constraints.iter().map(|s| lines_of(p, s)));
        out
    }

    pub fn render(&self, p: &Program) -> String {
        let parts: Vec<String> = self.parts(p).iter().map(render_lines).collect();
        format!("({})", parts.join(","))
    }

    /// All integrity constraints.
    pub fn integrity(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.constraints.concat();
        v.sort_unstable();
        v
    }

    /// Rule indices of F ∪ C ∪ D₁ ∪ … ∪ Dₙ.
    pub fn define_part(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.facts.iter().chain(&self.choices).copied().collect();
        v.extend(self.normal.concat());
        v.sort_unstable();
        v
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.is_error())
    }

    pub fn render_diagnostics(&self, color: bool) -> String {
        let mut s = String::new();
        for d in &self.diagnostics {
            let _ = writeln!(s, "{}", d.render(color));
        }
        s
    }
}

fn stratum_preds(p: &Program, rules: &[usize]) -> BTreeSet<Pred> {
    rules
        .iter()
        .flat_map(|&i| head_nodes(&p.rules[i]))
        .filter_map(|n| match n {
            Node::Pred(q) => Some(q),
            Node::Bottom => None,
        })
        .collect()
}

/// Splits a program into facts, one layer of choices, normal strata and
/// constraints, reporting every rule that does not fit.
pub fn classify_easy(p: &Program) -> EasyDecomposition {
    let st = stratify(p);
    let dg = DependencyGraph::build(p);
    let mut d = EasyDecomposition {
        easy: true,
        austere: check_austere(p).ok,
        stratified_negation: true,
        facts: Vec::new(),
        choices: Vec::new(),
        normal: Vec::new(),
        constraints: Vec::new(),
        diagnostics: Vec::new(),
        stratification: Stratification::default(),
    };
    let mut choice_layers = 0;
    for s in &st.strata {
        match s.kind {
            StratumKind::Facts => d.facts.extend(&s.rules),
            StratumKind::Choices => {
                choice_layers += 1;
                if choice_layers > 1 {
                    for &i in s.rules.iter().filter(|&&i| p.rules[i].kind() == RuleKind::Choice) {
                        d.diagnostics.push(diag(p, i, Severity::Error, "choice depends on another choice".into()));
                    }
                    d.normal.push(s.rules.clone());
                } else {
                    d.choices.extend(&s.rules);
                }
            }
            StratumKind::Normal => {
                for &i in s.rules.iter().filter(|&&i| p.rules[i].kind() == RuleKind::Choice) {
                    d.diagnostics.push(diag(p, i, Severity::Error, "choice depends on a normal stratum".into()));
                }
                d.normal.push(s.rules.clone());
            }
            StratumKind::Constraints => d.constraints.push(s.rules.clone()),
        }
    }

    // advice 2: one predicate per stratum, no cycles inside a stratum
    for s in st.strata.iter().filter(|s| s.kind == StratumKind::Normal) {
        let preds = stratum_preds(p, &s.rules);
        if preds.len() > 1 {
            let names: Vec<String> = preds.iter().map(Pred::to_string).collect();
            d.diagnostics.push(diag(
                p,
                s.rules[0],
                Severity::Lint,
                format!("stratum defines several predicates: {}", names.join(", ")),
            ));
        }
        for &i in &s.rules {
            for h in head_nodes(&p.rules[i]) {
                let recursive = dg
                    .direct(&h)
                    .iter()
                    .any(|q| st.same_component(&h, q) && dg.edges[&(h.clone(), q.clone())].iter().any(|w| w.rule == i));
                if recursive {
                    d.diagnostics.push(diag(p, i, Severity::Lint, format!("recursion through `{h}`")));
                }
            }
        }
    }

    let neg = negation_report(p, &st, &dg);
    d.stratified_negation = neg.ok;
    for mut n in neg.diagnostics {
        n.severity = Severity::Warning;
        n.message.push_str("; the stable model may not be unique");
        d.diagnostics.push(n);
    }

    // advice 1: rules in stratum order
    let levels = st.rule_levels(p.rules.len());
    let mut highest = 0;
    for (i, r) in p.rules.iter().enumerate() {
        if r.kind() == RuleKind::Fact {
            continue;
        }
        if levels[i] < highest {
            d.diagnostics.push(diag(p, i, Severity::Warning, "rule appears after rules of a later stratum".into()));
        }
        highest = highest.max(levels[i]);
    }

    d.diagnostics.sort_by_key(|x| (x.line, x.severity));
    d.easy = !d.diagnostics.iter().any(Diagnostic::is_error);
    d.stratification = st;
    d
}
