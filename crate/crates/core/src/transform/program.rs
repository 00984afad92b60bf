//! Normal programs to austere form.

use std::collections::BTreeMap;
use std::fmt;

use super::TransformError;
use crate::ht::AtomSet;
use crate::syntax::{rule_atoms, Atom, BodyElem, Choice, Element, Head, Literal, Program, Rule, RuleKind, AUX_PREFIX};

fn ground_name(a: &Atom) -> String {
    a.eval().map(|g| g.to_string()).unwrap_or_else(|_| a.to_string())
}

/// The atom standing for `not a`.
pub fn negation_aux(a: &Atom) -> Atom {
    Atom::new(format!("{AUX_PREFIX}not_{}", a.pred), a.args.clone())
}

/// Shared bookkeeping so every negated literal gets one auxiliary atom.
#[derive(Clone, Debug, Default)]
pub struct AuxContext {
    /// Auxiliary atom to the atom whose negation it names, in order.
    introduced: Vec<(Atom, Atom)>,
}

impl AuxContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the auxiliary atom and whether it is new.
    fn intern(&mut self, a: &Atom) -> (Atom, bool) {
        if let Some((x, _)) = self.introduced.iter().find(|(_, base)| base == a) {
            return (x.clone(), false);
        }
        let x = negation_aux(a);
        self.introduced.push((x.clone(), a.clone()));
        (x, true)
    }

    pub fn introduced(&self) -> &[(Atom, Atom)] {
        &self.introduced
    }
}

fn defining_rules(x: &Atom, a: &Atom, line: usize) -> [Rule; 3] {
    [
        Rule::new(Head::Choice(Choice::plain(vec![Element::atom(x.clone())])), Vec::new()).at_line(line),
        Rule::constraint(vec![BodyElem::Lit(Literal::pos(a.clone())), BodyElem::Lit(Literal::pos(x.clone()))])
            .at_line(line),
        Rule::constraint(vec![BodyElem::Lit(Literal::neg(a.clone())), BodyElem::Lit(Literal::neg(x.clone()))])
            .at_line(line),
    ]
}

/// Translates one ground rule: each body literal `not a` becomes `x̄_a`, and
/// the first time `a` is seen the choice `{x̄_a}.` and the constraints
/// `:- a, x̄_a.` and `:- not a, not x̄_a.` are added.
pub fn translate_rule(rule: &Rule, ctx: &mut AuxContext) -> Result<Vec<Rule>, TransformError> {
    if !rule.is_ground() {
        return Err(TransformError::NotGround { line: rule.line });
    }
    match &rule.head {
        Head::Atom(_) | Head::Falsum => {}
        Head::Choice(c) if c.bounds.is_empty() && c.function.is_none() => {}
        Head::Choice(_) => {
            return Err(TransformError::NotNormal {
                line: rule.line,
                reason: "bounded choice head; eliminate the bounds first".into(),
            })
        }
    }
    if rule.is_normal() && rule.has_aggregate() {
        return Err(TransformError::NotNormal { line: rule.line, reason: "aggregate in a rule body".into() });
    }
    let mut extra = Vec::new();
    let mut body = Vec::with_capacity(rule.body.len());
    for b in &rule.body {
        match b {
            BodyElem::Lit(l) if l.is_negative() => {
                let (x, fresh) = ctx.intern(&l.atom);
                if fresh {
                    extra.extend(defining_rules(&x, &l.atom, rule.line));
                }
                body.push(BodyElem::Lit(Literal::pos(x)));
            }
            other => body.push(other.clone()),
        }
    }
    let mut out = vec![Rule { head: rule.head.clone(), body, line: rule.line, label: rule.label.clone() }];
    out.extend(extra);
    Ok(out)
}

/// A program split into facts, choices, definite rules and constraints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AustereQuadruple {
    pub facts: Vec<Rule>,
    pub choices: Vec<Rule>,
    pub definite: Vec<Rule>,
    pub constraints: Vec<Rule>,
}

impl AustereQuadruple {
    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.facts.iter().chain(&self.choices).chain(&self.definite).chain(&self.constraints)
    }

    pub fn push(&mut self, rule: Rule) {
        match rule.kind() {
            RuleKind::Fact => self.facts.push(rule),
            RuleKind::Choice => self.choices.push(rule),
            RuleKind::Constraint => self.constraints.push(rule),
            RuleKind::Definite | RuleKind::Normal => self.definite.push(rule),
        }
    }
}

impl fmt::Display for AustereQuadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.rules() {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Result of [`translate_program`].
#[derive(Clone, Debug)]
pub struct ProgramTranslation {
    pub quadruple: AustereQuadruple,
    /// The translated program: the quadruple in F, C, D, I order with the
    /// source directives.
    pub program: Program,
    /// `(x̄_a, a)` pairs in introduction order.
    pub aux: Vec<(Atom, Atom)>,
    /// Ground atoms of the source program.
    pub vocabulary: AtomSet,
}

impl ProgramTranslation {
    /// `T ∪ {x̄_a | a ∉ T}`.
    pub fn extend(&self, t: &AtomSet) -> AtomSet {
        let mut out = t.clone();
        for (x, a) in &self.aux {
            if !t.contains(&ground_name(a)) {
                out.insert(ground_name(x));
            }
        }
        out
    }

    /// `T ∩ At`.
    pub fn restrict(&self, t: &AtomSet) -> AtomSet {
        t.iter().filter(|a| !a.starts_with(AUX_PREFIX)).cloned().collect()
    }

    /// Lines `auxname<TAB>formula` for every introduced atom.
    pub fn aux_map_lines(&self) -> String {
        self.aux.iter().map(|(x, a)| format!("{x}\tnot {a}\n")).collect()
    }

    pub fn aux_map(&self) -> BTreeMap<String, String> {
        self.aux.iter().map(|(x, a)| (x.to_string(), format!("not {a}"))).collect()
    }
}

/// Translates a ground normal program (constraints and unbounded choices
/// allowed) rule by rule, sharing auxiliary atoms.
pub fn translate_program(p: &Program) -> Result<ProgramTranslation, TransformError> {
    let mut vocabulary = AtomSet::new();
    for r in &p.rules {
        for a in rule_atoms(r) {
            let name = ground_name(a);
            if name.starts_with(AUX_PREFIX) {
                return Err(TransformError::ReservedName(name));
            }
            vocabulary.insert(name);
        }
    }
    let mut ctx = AuxContext::new();
    let mut quadruple = AustereQuadruple::default();
    let mut introduced = Vec::new();
    for r in &p.rules {
        let mut out = translate_rule(r, &mut ctx)?.into_iter();
        if let Some(main) = out.next() {
            quadruple.push(main);
        }
        introduced.extend(out);
    }
    // introduced choices and constraints follow the translated source rules
    for r in introduced {
        quadruple.push(r);
    }
    let program = Program::new(quadruple.rules().cloned().collect(), p.directives.clone())
        .map_err(|e| TransformError::Invalid(e.to_string()))?;
    Ok(ProgramTranslation { quadruple, program, aux: ctx.introduced, vocabulary })
}
