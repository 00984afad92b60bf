//! Choice, aggregate-head and debugging rewrites.

use super::TransformError;
use crate::syntax::{
    rule_atoms, Aggregate, AggregateFunction, Atom, BodyElem, Bounds, Choice, Condition, Directive, Element, Head,
    Literal, Program, RelOp, Rule, Sign, Term, WeightElement, AUX_PREFIX,
};

/// The atom `a'` used by [`choice_to_normal`].
pub fn complement_atom(a: &Atom) -> Atom {
    Atom::new(format!("{AUX_PREFIX}compl_{}", a.pred), a.args.clone())
}

/// Rewrites a bodiless, unbounded choice `{a}.` into `a :- not a'.` and
/// `a' :- not a.` for each element.
pub fn choice_to_normal(rule: &Rule, program: &Program) -> Result<Vec<Rule>, TransformError> {
    let choice = match &rule.head {
        Head::Choice(c) => c,
        _ => return Ok(vec![rule.clone()]),
    };
    if !choice.bounds.is_empty() || choice.function.is_some() {
        return Err(TransformError::NotNormal { line: rule.line, reason: "bounded choice".into() });
    }
    if !rule.body.is_empty() {
        return Err(TransformError::NotNormal { line: rule.line, reason: "choice with a body".into() });
    }
    let mut out = Vec::new();
    for e in &choice.elements {
        if !e.condition.is_empty() {
            return Err(TransformError::NotNormal {
                line: rule.line,
                reason: "choice element with a condition".into(),
            });
        }
        let a = &e.literal.atom;
        let a2 = complement_atom(a);
        if program.signature.contains_key(&a2.pred) {
            return Err(TransformError::NameClash(a2.pred.clone()));
        }
        out.push(Rule::normal(a.clone(), vec![Literal::neg(a2.clone())]).at_line(rule.line));
        out.push(Rule::normal(a2, vec![Literal::neg(a.clone())]).at_line(rule.line));
    }
    Ok(out)
}

/// Applies [`choice_to_normal`] to every choice of the program.
pub fn choices_to_normal(program: &Program) -> Result<Program, TransformError> {
    let mut rules = Vec::new();
    for r in &program.rules {
        rules.extend(choice_to_normal(r, program)?);
    }
    Program::new(rules, program.directives.clone()).map_err(|e| TransformError::Invalid(e.to_string()))
}

/// Whether the guards accept every count `0, 1, 2, ...`.
fn admits_all_counts(b: &Bounds) -> bool {
    let left_ok = match &b.left {
        None => true,
        Some((t, op)) => match (t.eval_int(), op) {
            (Some(k), RelOp::Le) => k <= 0,
            (Some(k), RelOp::Lt) => k < 0,
            _ => false,
        },
    };
    let right_ok = match &b.right {
        None => true,
        Some((op, t)) => match (op, t.eval_int()) {
            (RelOp::Ge, Some(k)) => k <= 0,
            (RelOp::Gt, Some(k)) => k < 0,
            _ => false,
        },
    };
    left_ok && right_ok
}

/// Turns `L { e1; ...; em } U :- B.` into `{ e1; ...; em } :- B.` plus
/// `:- not L #count{ e1; ...; em } U, B.`
///
/// A single element `a : c` is written as `{a} :- B, c.` instead. Rules
/// without a bounded choice head are returned unchanged.
pub fn eliminate_aggregate_head(rule: &Rule) -> Result<Vec<Rule>, TransformError> {
    let choice = match &rule.head {
        Head::Choice(c) => c,
        _ => return Ok(vec![rule.clone()]),
    };
    if let Some(f) = choice.function {
        if f != AggregateFunction::Count {
            return Err(TransformError::Unsupported { line: rule.line, message: format!("`{}` head", f.keyword()) });
        }
    }
    if choice.bounds.is_empty() {
        let mut plain = rule.clone();
        plain.head = Head::Choice(Choice::plain(choice.elements.clone()));
        return Ok(vec![plain]);
    }
    let head = if let [single] = choice.elements.as_slice() {
        let mut body = rule.body.clone();
        body.extend(single.condition.iter().map(|c| match c {
            Condition::Lit(l) => BodyElem::Lit(l.clone()),
            Condition::Cmp(c) => BodyElem::Cmp(c.clone()),
        }));
        Rule {
            head: Head::Choice(Choice::plain(vec![Element::new(single.literal.clone(), Vec::new())])),
            body,
            line: rule.line,
            label: None,
        }
    } else {
        Rule {
            head: Head::Choice(Choice::plain(choice.elements.clone())),
            body: rule.body.clone(),
            line: rule.line,
            label: None,
        }
    };
    let mut out = vec![head];
    if !admits_all_counts(&choice.bounds) {
        let guard = Aggregate {
            function: AggregateFunction::Count,
            keyword: true,
            elements: choice.elements.clone(),
            bounds: choice.bounds.clone(),
        };
        let mut body = vec![BodyElem::Agg { sign: Sign::Negative, aggregate: guard }];
        body.extend(rule.body.iter().cloned());
        out.push(Rule { head: Head::Falsum, body, line: rule.line, label: rule.label.clone() });
    }
    Ok(out)
}

/// Applies [`eliminate_aggregate_head`] to every rule.
pub fn eliminate_aggregate_heads(program: &Program) -> Result<Program, TransformError> {
    let mut rules = Vec::new();
    for r in &program.rules {
        rules.extend(eliminate_aggregate_head(r)?);
    }
    Program::new(rules, program.directives.clone()).map_err(|e| TransformError::Invalid(e.to_string()))
}

pub const VIOLATION_PREDICATE: &str = "ic";

/// The identifier of a constraint: its `%@` label, else `c<line>` applied
/// to the constraint's global variables.
pub fn constraint_id(rule: &Rule) -> Term {
    if let Some(l) = &rule.label {
        return l.clone();
    }
    let name = format!("c{}", rule.line);
    let vars = rule.global_vars();
    if vars.is_empty() {
        Term::Sym(name)
    } else {
        Term::Func(name, vars.into_iter().map(Term::Var).collect())
    }
}

/// Replaces every constraint `:- B.` by `ic(id) :- B.` and adds
/// `#minimize { ic(I) }.` Programs without constraints are returned as is.
pub fn debug_transform(program: &Program) -> Result<Program, TransformError> {
    let used = program.rules.iter().flat_map(rule_atoms).any(|a| a.pred == VIOLATION_PREDICATE)
        || program.signature.contains_key(VIOLATION_PREDICATE);
    if used {
        return Err(TransformError::NameClash(format!("{VIOLATION_PREDICATE}/1")));
    }
    if !program.rules.iter().any(|r| matches!(r.head, Head::Falsum)) {
        return Ok(program.clone());
    }
    let rules = program
        .rules
        .iter()
        .map(|r| match r.head {
            Head::Falsum => Rule {
                head: Head::Atom(Atom::new(VIOLATION_PREDICATE, vec![constraint_id(r)])),
                body: r.body.clone(),
                line: r.line,
                label: None,
            },
            _ => r.clone(),
        })
        .collect();
    let mut directives = program.directives.clone();
    directives.push(Directive::Minimize(vec![WeightElement::implicit(vec![Condition::Lit(Literal::pos(Atom::new(
        VIOLATION_PREDICATE,
        vec![Term::var("I")],
    )))])]));
    Program::new(rules, directives).map_err(|e| TransformError::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ht::{program_stable_models, project, AtomSet, DEFAULT_MAX_ATOMS};
    use crate::syntax::parse_program;

    fn shown(rules: &[Rule]) -> Vec<String> {
        rules.iter().map(|r| r.to_string()).collect()
    }

    #[test]
    fn aggregate_heads() {
        let p = parse_program("1 { color(N,C) : col(C) } 1 :- node(N).").unwrap();
        assert_eq!(
            shown(&eliminate_aggregate_head(&p.rules[0]).unwrap()),
            vec!["{ color(N,C) } :- node(N), col(C).", ":- not 1 #count{ color(N,C) : col(C) } 1, node(N)."]
        );
        let p = parse_program("0 { a } :- b.").unwrap();
        assert_eq!(shown(&eliminate_aggregate_head(&p.rules[0]).unwrap()), vec!["{ a } :- b."]);
        let p = parse_program("{ hc(V,U) } :- edge(V,U).").unwrap();
        assert_eq!(shown(&eliminate_aggregate_head(&p.rules[0]).unwrap()), vec!["{ hc(V,U) } :- edge(V,U)."]);
        let p = parse_program("#sum { a } >= 1.").unwrap();
        assert!(eliminate_aggregate_head(&p.rules[0]).is_err());
        let p = parse_program("1 { a; b } 2 :- c.").unwrap();
        assert_eq!(
            shown(&eliminate_aggregate_head(&p.rules[0]).unwrap()),
            vec!["{ a; b } :- c.", ":- not 1 #count{ a; b } 2, c."]
        );
    }

    #[test]
    fn aggregate_elimination_keeps_models() {
        for src in ["c. 1 { a; b } 1 :- c.", "{ a }. 1 { a; b; d } 2.", "2 { a; b; d }.", "{ a; b } 0."] {
            let p = parse_program(src).unwrap();
            let q = eliminate_aggregate_heads(&p).unwrap();
            assert_eq!(
                program_stable_models(&p, DEFAULT_MAX_ATOMS).unwrap().models,
                program_stable_models(&q, DEFAULT_MAX_ATOMS).unwrap().models,
                "{src}"
            );
        }
    }

    #[test]
    fn choice_rewrite() {
        let p = parse_program("{ b }.").unwrap();
        let out = choice_to_normal(&p.rules[0], &p).unwrap();
        assert_eq!(shown(&out), vec!["b :- not __aux_compl_b.", "__aux_compl_b :- not b."]);
        let q = choices_to_normal(&p).unwrap();
        let sm = program_stable_models(&q, DEFAULT_MAX_ATOMS).unwrap();
        let v: AtomSet = ["b".to_string()].into();
        assert_eq!(project(&sm, &v).models, vec![AtomSet::new(), v.clone()]);

        let clash = parse_program("{ a }. __aux_compl_a.").unwrap();
        assert!(matches!(choice_to_normal(&clash.rules[0], &clash), Err(TransformError::NameClash(_))));
        let bodied = parse_program("{ a } :- b.").unwrap();
        assert!(choice_to_normal(&bodied.rules[0], &bodied).is_err());

        let austere = parse_program("a. { b }. c :- b. :- a, not c.").unwrap();
        let normal = choices_to_normal(&austere).unwrap();
        let vocab: AtomSet = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        assert_eq!(
            project(&program_stable_models(&normal, DEFAULT_MAX_ATOMS).unwrap(), &vocab).models,
            program_stable_models(&austere, DEFAULT_MAX_ATOMS).unwrap().models
        );
    }

    #[test]
    fn debugging_rewrite() {
        let p = parse_program(
            "node(V) :- edge(V,U).\n\
             :- node(V), not reached(V). %@ unreached(V)\n\
             :- hc(V,U), hc(V,W), U != W.\n\
             :- a.",
        )
        .unwrap();
        let d = debug_transform(&p).unwrap();
        assert_eq!(
            d.to_string(),
            "node(V) :- edge(V,U).\n\
             ic(unreached(V)) :- node(V), not reached(V).\n\
             ic(c3(V,U,W)) :- hc(V,U), hc(V,W), U!=W.\n\
             ic(c4) :- a.\n\
             #minimize { ic(I) }.\n"
        );
        let none = parse_program("a. b :- a.").unwrap();
        assert_eq!(debug_transform(&none).unwrap(), none);
        let clash = parse_program("ic(1). :- a.").unwrap();
        assert!(matches!(debug_transform(&clash), Err(TransformError::NameClash(_))));
        let simple = parse_program("a. :- a.").unwrap();
        assert_eq!(debug_transform(&simple).unwrap().rules[1].to_string(), "ic(c1) :- a.");
    }
}
