use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::syntax::{parse_program, Pred, Program};

const HAM: &str = include_str!("../../../../corpus/ham.lp");
const COLOR: &str = include_str!("../../../../corpus/color.ez");
const QUEENS: &str = include_str!("../../../../corpus/queens.ez");
const TOH: &str = include_str!("../../../../corpus/toh.ez");

fn prog(src: &str) -> Program {
    parse_program(src).unwrap()
}

fn pred(name: &str, arity: usize) -> Node {
    Node::Pred(Pred::new(name, arity))
}

fn lines(p: &Program, idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|&i| p.rules[i].line).collect()
}

#[test]
fn dependencies() {
    let p = prog(HAM);
    let g = dependency_graph(&p);
    let reached = pred("reached", 1);
    let want: BTreeSet<Node> = [pred("hc", 2), pred("edge", 2), pred("start", 1), reached.clone()].into();
    assert_eq!(g.depends(&reached), want);
    assert_eq!(g.depends(&pred("hc", 2)), [pred("edge", 2)].into());

    let mutual = prog("a :- b. b :- a.");
    let g = dependency_graph(&mutual);
    assert!(g.mutually_dependent(&pred("a", 0), &pred("b", 0)));

    let single = prog("p.");
    let g = dependency_graph(&single);
    assert_eq!(g.nodes, vec![pred("p", 0)]);
    assert!(g.edges.is_empty());
}

#[test]
fn definitions_by_predicate() {
    let p = prog(HAM);
    assert_eq!(lines(&p, &definitions(&p, &pred("reached", 1)).unwrap()), vec![6, 7]);
    assert_eq!(lines(&p, &definitions(&p, &Node::Bottom).unwrap()), vec![8, 9, 10]);
    let q = prog("a :- p.");
    assert!(definitions(&q, &pred("p", 0)).unwrap().is_empty());
    assert!(matches!(definitions(&q, &pred("zz", 3)), Err(AnalysisError::UnknownPredicate(_))));
}

#[test]
fn stratifications() {
    let p = prog(HAM);
    assert_eq!(stratify(&p).render(&p), "({1,2,3},{5},{6,7},{8,9,10})");
    let even = prog("a :- not b.\nb :- not a.");
    assert_eq!(stratify(&even).strata.len(), 1);
    let q = prog(QUEENS);
    assert_eq!(classify_easy(&q).render(&q), "(∅,{1},{3,4},{6,7},{9,10})");
}

#[test]
fn easy_classification() {
    let c = prog(COLOR);
    let d = classify_easy(&c);
    assert!(d.easy);
    assert!(d.facts.is_empty());
    assert_eq!(d.render(&c), "(∅,{1},{2},{3})");

    let t = prog(TOH);
    let d = classify_easy(&t);
    assert!(d.easy, "{}", d.render_diagnostics(false));
    assert!(d.stratified_negation);
    assert_eq!(d.render(&t), "({1,2,3,4},{6},{8},{10,11,12},{14,15},{17,19,20,21,23})");

    let h = prog(HAM);
    let d = classify_easy(&h);
    assert!(d.easy && d.austere);
    assert_eq!(d.class(), "easy");

    let empty = prog("");
    let d = classify_easy(&empty);
    assert!(d.easy);
    assert_eq!(d.render(&empty), "(∅,∅,∅)");
}

#[test]
fn not_easy_programs() {
    let p = prog("a.\nb :- a.\n{ c } :- b.");
    let d = classify_easy(&p);
    assert!(!d.easy);
    assert_eq!(d.errors().next().unwrap().to_string(), "error: rule@3: choice depends on a normal stratum");

    let p = prog("{ a }.\n{ b } :- a.");
    let d = classify_easy(&p);
    assert!(!d.easy);
    assert!(d.errors().any(|e| e.message.contains("another choice")));

    // negative recursion keeps the shape but is reported
    let p = prog("a :- not a.");
    let d = classify_easy(&p);
    assert!(d.easy);
    assert!(!d.stratified_negation);
    assert!(d.diagnostics.iter().any(|x| x.severity == Severity::Warning));
}

#[test]
fn advice_lints() {
    let p = prog("{ a }.\nb :- a.\nc :- a.\n:- b.\nd :- c.");
    let d = classify_easy(&p);
    assert!(d.easy);
    let text = d.render_diagnostics(false);
    assert!(text.contains("lint: rule@2: stratum defines several predicates"), "{text}");
    assert!(text.contains("warning: rule@5: rule appears after rules of a later stratum"), "{text}");
    let rec = prog("{ e }.\nr :- e.\nr :- r.");
    assert!(classify_easy(&rec).render_diagnostics(false).contains("lint: rule@3: recursion through `r/0`"));
    let colored = d.diagnostics[0].render(true);
    assert!(colored.starts_with("\x1b["));
}

#[test]
fn stratified_negation() {
    assert!(check_stratified_negation(&prog("a :- b. b :- a.")).ok);
    assert!(!check_stratified_negation(&prog("a :- not b. b :- not a.")).ok);
    assert!(check_stratified_negation(&prog("q. p :- q. r :- not p.")).ok);
    assert!(check_stratified_negation(&prog(TOH)).ok);
}

#[test]
fn austere_shape() {
    assert!(check_austere(&prog("a. { b }. c :- b. :- a, not c.")).ok);
    let r = check_austere(&prog("b :- not c."));
    assert!(!r.ok);
    assert_eq!(r.diagnostics.len(), 1);
    assert!(check_austere(&prog(HAM)).ok);
    assert!(!check_austere(&prog(TOH)).ok);
    assert!(!check_austere(&prog("a :- b. { c } :- a.")).ok);
}

fn normal_program() -> impl Strategy<Value = String> {
    let lit = (0..4usize, any::<bool>()).prop_map(|(a, neg)| format!("{}p{a}", if neg { "not " } else { "" }));
    let rule = (0..5usize, prop::collection::vec(lit, 0..3)).prop_map(|(h, body)| {
        let head = if h == 4 { String::new() } else { format!("p{h}") };
        match (head.is_empty(), body.is_empty()) {
            (true, true) => "p0.".to_string(),
            (_, true) => format!("{head}."),
            _ => format!("{head} :- {}.", body.join(", ")),
        }
    });
    let choice = (0..4usize).prop_map(|a| format!("{{ p{a} }}."));
    prop::collection::vec(prop_oneof![4 => rule, 1 => choice], 0..8).prop_map(|v| v.join("\n"))
}

/// Checks that `def(p)` sits in one stratum and that strict dependencies
/// point strictly downward while mutual ones share a stratum.
fn valid(p: &Program, st: &Stratification) -> Result<(), String> {
    let levels = st.rule_levels(p.rules.len());
    let mut seen = vec![false; p.rules.len()];
    for s in &st.strata {
        for &r in &s.rules {
            if std::mem::replace(&mut seen[r], true) {
                return Err(format!("rule {r} in two strata"));
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err("rule missing".into());
    }
    let g = dependency_graph(p);
    let level_of = |n: &Node| -> Option<BTreeSet<usize>> {
        let defs = definitions(p, n).ok()?;
        if defs.is_empty() {
            return None;
        }
        Some(defs.iter().map(|&i| levels[i]).collect())
    };
    for a in &g.nodes {
        let Some(la) = level_of(a) else { continue };
        if la.len() != 1 {
            return Err(format!("def({a}) split"));
        }
        for b in g.depends(a) {
            let Some(lb) = level_of(&b) else { continue };
            let (x, y) = (*la.iter().next().unwrap(), *lb.iter().next().unwrap());
            if g.depends_on(&b, a) && *a != Node::Bottom {
                // choice co-heads may merge further, never split
                if x != y {
                    return Err(format!("{a} and {b} mutually dependent but apart"));
                }
            } else if x <= y {
                return Err(format!("{a} not above {b}"));
            }
        }
    }
    Ok(())
}

proptest! {
    #[test]
    fn stratification_is_valid(src in normal_program()) {
        let p = prog(&src);
        let st = stratify(&p);
        prop_assert!(valid(&p, &st).is_ok(), "{:?}\n{src}", valid(&p, &st));
        let d = classify_easy(&p);
        let mut all: Vec<usize> = d.define_part();
        all.extend(d.integrity());
        all.sort_unstable();
        prop_assert_eq!(all, (0..p.rules.len()).collect::<Vec<_>>());
    }

    #[test]
    fn austere_implies_stratified_negation(src in normal_program()) {
        let p = prog(&src);
        if check_austere(&p).ok {
            prop_assert!(check_stratified_negation(&p).ok);
        }
    }
}
