//! Reading ground programs as propositional theories.

use std::collections::BTreeMap;

use super::{equilibrium_models_bounded, AtomSet, HtError, ModelSet};
use crate::syntax::{
    Aggregate, AggregateFunction, Atom, BodyElem, Bounds, Comparison, Condition, Element, Formula, Head, Literal,
    Program, Rule,
};

fn atom_name(a: &Atom, line: usize) -> Result<String, HtError> {
    a.eval().map(|g| g.to_string()).map_err(|_| HtError::NotGround { line })
}

fn literal(l: &Literal, line: usize, vocab: &mut AtomSet) -> Result<Formula, HtError> {
    let name = atom_name(&l.atom, line)?;
    vocab.insert(name.clone());
    let a = Formula::Atom(name);
    Ok(if l.is_negative() { Formula::not(a) } else { a })
}

fn comparison(c: &Comparison, line: usize) -> Result<Formula, HtError> {
    let (l, r) = match (c.lhs.eval(), c.rhs.eval()) {
        (Ok(l), Ok(r)) => (l, r),
        _ => return Err(HtError::NotGround { line }),
    };
    Ok(if c.op.holds(&l, &r) { Formula::top() } else { Formula::Bottom })
}

fn condition(c: &Condition, line: usize, vocab: &mut AtomSet) -> Result<Formula, HtError> {
    match c {
        Condition::Lit(l) => literal(l, line, vocab),
        Condition::Cmp(c) => comparison(c, line),
    }
}

/// One formula per distinct element literal: `l ∧ (c1 ∨ c2 ∨ ...)` over the
/// condition instances attached to it.
fn element_formulas(elements: &[Element], line: usize, vocab: &mut AtomSet) -> Result<Vec<Formula>, HtError> {
    let mut grouped: BTreeMap<Formula, Vec<Formula>> = BTreeMap::new();
    for e in elements {
        let lit = literal(&e.literal, line, vocab)?;
        let conds = e.condition.iter().map(|c| condition(c, line, vocab)).collect::<Result<Vec<_>, _>>()?;
        grouped.entry(lit).or_default().push(Formula::conjunction(conds));
    }
    Ok(grouped.into_iter().map(|(lit, conds)| Formula::and(lit, Formula::disjunction(conds))).collect())
}

fn at_least(k: usize, elems: &[Formula]) -> Formula {
    fn go(k: usize, from: usize, elems: &[Formula], acc: &mut Vec<Formula>, out: &mut Vec<Formula>) {
        if k == 0 {
            out.push(Formula::conjunction(acc.iter().cloned()));
            return;
        }
        for i in from..elems.len() {
            if elems.len() - i < k {
                break;
            }
            acc.push(elems[i].clone());
            go(k - 1, i + 1, elems, acc, out);
            acc.pop();
        }
    }
    if k == 0 {
        return Formula::top();
    }
    let mut out = Vec::new();
    go(k, 0, elems, &mut Vec::new(), &mut out);
    Formula::disjunction(out)
}

/// Formula true exactly when the number of satisfied elements meets the
/// bounds.
fn guard_formula(bounds: &Bounds, elems: &[Formula], line: usize) -> Result<Formula, HtError> {
    let n = elems.len();
    let mut admitted = Vec::with_capacity(n + 1);
    for v in 0..=n {
        match bounds.admits(v as i64) {
            Some(ok) => admitted.push(ok),
            None => return Err(HtError::NotGround { line }),
        }
    }
    let first = admitted.iter().position(|&a| a);
    let last = admitted.iter().rposition(|&a| a);
    let (lo, hi) = match (first, last) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Ok(Formula::Bottom),
    };
    if admitted[lo..=hi].iter().all(|&a| a) {
        let mut parts = vec![at_least(lo, elems)];
        if hi < n {
            parts.push(Formula::not(at_least(hi + 1, elems)));
        }
        return Ok(Formula::conjunction(parts));
    }
    let excluded = (0..=n).filter(|&k| !admitted[k]).map(|k| {
        let exactly = Formula::and(at_least(k, elems), Formula::not(at_least(k + 1, elems)));
        Formula::not(exactly)
    });
    Ok(Formula::conjunction(excluded))
}

fn aggregate(a: &Aggregate, line: usize, vocab: &mut AtomSet) -> Result<Formula, HtError> {
    if a.function != AggregateFunction::Count {
        return Err(HtError::Unsupported {
            line,
            message: format!("aggregate `{}` is not supported", a.function.keyword()),
        });
    }
    let elems = element_formulas(&a.elements, line, vocab)?;
    guard_formula(&a.bounds, &elems, line)
}

fn body(rule: &Rule, vocab: &mut AtomSet) -> Result<Formula, HtError> {
    let parts = rule
        .body
        .iter()
        .map(|b| match b {
            BodyElem::Lit(l) => literal(l, rule.line, vocab),
            BodyElem::Cmp(c) => comparison(c, rule.line),
            BodyElem::Agg { sign, aggregate: agg } => {
                let f = aggregate(agg, rule.line, vocab)?;
                Ok(if *sign == crate::syntax::Sign::Negative { Formula::not(f) } else { f })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Formula::conjunction(parts))
}

/// Translates a ground program into a theory and its vocabulary.
///
/// Rules become implications from body to head; a choice element `a : c`
/// becomes `B ∧ c → a ∨ ¬a`, and choice bounds add `B ∧ ¬G → ⊥` for the
/// counting guard `G`.
pub fn program_theory(p: &Program) -> Result<(Vec<Formula>, AtomSet), HtError> {
    let mut vocab = AtomSet::new();
    let mut theory = Vec::new();
    for rule in &p.rules {
        if !rule.is_ground() {
            return Err(HtError::NotGround { line: rule.line });
        }
        let b = body(rule, &mut vocab)?;
        match &rule.head {
            Head::Atom(a) => {
                let name = atom_name(a, rule.line)?;
                vocab.insert(name.clone());
                theory.push(Formula::implies(b, Formula::Atom(name)));
            }
            Head::Falsum => theory.push(Formula::not(b)),
            Head::Choice(c) => {
                if c.function.is_some_and(|f| f != AggregateFunction::Count) {
                    return Err(HtError::Unsupported {
                        line: rule.line,
                        message: "only counting choice heads are supported".into(),
                    });
                }
                for e in &c.elements {
                    let a = literal(&e.literal, rule.line, &mut vocab)?;
                    let conds = e
                        .condition
                        .iter()
                        .map(|x| condition(x, rule.line, &mut vocab))
                        .collect::<Result<Vec<_>, _>>()?;
                    let premise = Formula::conjunction(std::iter::once(b.clone()).chain(conds));
                    theory.push(Formula::implies(premise, Formula::or(a.clone(), Formula::not(a))));
                }
                if !c.bounds.is_empty() {
                    let elems = element_formulas(&c.elements, rule.line, &mut vocab)?;
                    let g = guard_formula(&c.bounds, &elems, rule.line)?;
                    theory.push(Formula::not(Formula::and(b, Formula::not(g))));
                }
            }
        }
    }
    Ok((theory, vocab))
}

/// Stable models of a ground program by brute force over its atoms.
pub fn program_stable_models(p: &Program, bound: usize) -> Result<ModelSet, HtError> {
    let (theory, vocab) = program_theory(p)?;
    equilibrium_models_bounded(&theory, &vocab, bound)
}
