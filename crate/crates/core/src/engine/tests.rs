use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::ht::{program_stable_models, AtomSet};
use crate::syntax::{parse_program, Program};
use crate::transform::translate_program;

const HAM: &str = include_str!("../../../../corpus/ham.lp");
const TSP: &str = include_str!("../../../../corpus/tsp.lp");
const ISOLATED: &str = include_str!("../../../../corpus/ham-isolated.lp");
const AUSTERE: &str = include_str!("../../../../corpus/austere.lp");
const TRANSLATION: &str = include_str!("../../../../corpus/translation.lp");

fn prog(src: &str) -> Program {
    parse_program(src).unwrap()
}

fn gr(src: &str) -> GroundProgram {
    ground(&prog(src)).unwrap()
}

fn set(atoms: &[&str]) -> AtomSet {
    atoms.iter().map(|s| s.to_string()).collect()
}

fn sets(models: &[&[&str]]) -> Vec<AtomSet> {
    let mut v: Vec<AtomSet> = models.iter().map(|m| set(m)).collect();
    crate::ht::canonical_sort(&mut v);
    v
}

fn opts() -> SolveOptions {
    SolveOptions::default()
}

#[test]
fn grounding_instances() {
    let g = ground_with(&prog("p(1..2).\nq(X) :- p(X)."), GroundOptions { simplify: false }).unwrap();
    assert_eq!(g.facts.len(), 2);
    let rules: BTreeSet<String> =
        g.rules.iter().map(|r| format!("{} :- {}", g.table.name(r.head), g.table.name(r.pos[0]))).collect();
    assert_eq!(rules, ["q(1) :- p(1)".to_string(), "q(2) :- p(2)".to_string()].into());
    assert_eq!(least_fixpoint(&g).unwrap(), set(&["p(1)", "p(2)", "q(1)", "q(2)"]));

    let e = ground(&prog("q(X) :- not p(X).")).unwrap_err();
    assert_eq!(e, EngineError::Unsafe { line: 1, var: "X".into() });

    assert_eq!(gr(HAM).choice_atoms().len(), 7);
    assert!(matches!(ground(&prog("p(a). q(X) :- p(Y), X = Y + 1.")), Err(EngineError::Arithmetic { .. })));
}

#[test]
fn immediate_consequence() {
    let d = unsimplified("a.\nc :- b.");
    assert_eq!(tp_step(&d, &set(&[])).unwrap(), set(&["a"]));
    assert_eq!(tp_step(&d, &set(&["a", "b"])).unwrap(), set(&["a", "c"]));
    let g = gr(AUSTERE);
    let chosen = g.with_chosen_names(&set(&["b"])).unwrap();
    assert_eq!(tp_step(&chosen, &set(&["a", "b"])).unwrap(), set(&["a", "b", "c"]));
    assert!(matches!(tp_step(&unsimplified("a :- not b."), &set(&[])), Err(EngineError::NotDefinite { line: 1 })));
}

#[test]
fn fixpoints_per_choice() {
    let g = gr(AUSTERE);
    assert_eq!(least_fixpoint(&g.with_chosen_names(&set(&["b"])).unwrap()).unwrap(), set(&["a", "b", "c"]));
    assert_eq!(least_fixpoint(&g.with_chosen_names(&set(&[])).unwrap()).unwrap(), set(&["a"]));
    assert!(least_fixpoint(&gr("")).unwrap().is_empty());
}

#[test]
fn candidates() {
    let c = candidate_models(&gr(AUSTERE), &opts()).unwrap();
    let models: Vec<AtomSet> = c.iter().map(|c| c.model.clone()).collect();
    assert_eq!(models, vec![set(&["a"]), set(&["a", "b", "c"])]);
    assert_eq!(c.iter().map(|c| c.consistent).collect::<Vec<_>>(), vec![false, true]);

    let c = candidate_models(&gr("a. b :- a."), &opts()).unwrap();
    assert_eq!(c.len(), 1);

    let c = candidate_models(&gr("{ a ; b ; c }. a :- b."), &opts()).unwrap();
    assert!(c.len() <= 8);
    assert_eq!(c.iter().map(|c| c.multiplicity).sum::<usize>(), 8);
    assert!(matches!(candidate_models(&gr("{ b }. a :- not b."), &opts()), Err(EngineError::NotAustere(_))));
}

#[test]
fn austere_models() {
    assert_eq!(stable_models(&gr(AUSTERE), &opts()).unwrap().models, sets(&[&["a", "b", "c"]]));
    assert!(stable_models(&gr("a. :- a."), &opts()).unwrap().is_empty());
}

#[test]
fn translated_program_models() {
    let t = translate_program(&prog(TRANSLATION)).unwrap();
    let ms = stable_models(&ground(&t.program).unwrap(), &opts()).unwrap();
    assert_eq!(ms.models, sets(&[&["a", "b", "d", "__aux_not_c"], &["a", "c", "__aux_not_b"]]));
    let direct = stable_models(&gr(TRANSLATION), &opts()).unwrap();
    assert_eq!(direct.models, sets(&[&["a", "b", "d"], &["a", "c"]]));
}

/// Arc sets of the instance that form a circuit through every node.
fn brute_force_circuits(nodes: &[i64], arcs: &[(i64, i64)]) -> Vec<AtomSet> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << arcs.len()) {
        let chosen: Vec<(i64, i64)> = (0..arcs.len()).filter(|i| mask >> i & 1 == 1).map(|i| arcs[i]).collect();
        let ok_degree = nodes.iter().all(|n| {
            chosen.iter().filter(|a| a.0 == *n).count() == 1 && chosen.iter().filter(|a| a.1 == *n).count() == 1
        });
        if !ok_degree {
            continue;
        }
        let mut at = nodes[0];
        let mut seen = 0;
        loop {
            at = chosen.iter().find(|a| a.0 == at).unwrap().1;
            seen += 1;
            if at == nodes[0] {
                break;
            }
        }
        if seen == nodes.len() {
            out.push(chosen.iter().map(|(a, b)| format!("hc({a},{b})")).collect());
        }
    }
    out
}

const ARCS: [(i64, i64); 7] = [(1, 2), (2, 3), (2, 4), (3, 1), (3, 4), (4, 1), (4, 3)];

#[test]
fn hamiltonian_circuits() {
    let g = gr(&format!("{HAM}\n#show hc/2."));
    let ms = stable_models(&g, &opts()).unwrap();
    let mut want = brute_force_circuits(&[1, 2, 3, 4], &ARCS);
    crate::ht::canonical_sort(&mut want);
    assert_eq!(want.len(), 2);
    assert_eq!(ms.models, want);
    assert_eq!(stable_models(&g, &SolveOptions { max_models: 1, ..opts() }).unwrap().len(), 1);
}

#[test]
fn stratified_evaluation() {
    assert_eq!(stratified_model(&gr("q. p :- q. r :- not p.")).unwrap(), set(&["p", "q"]));
    let d = gr("a. b :- a. c :- b, d.");
    assert_eq!(stratified_model(&d).unwrap(), least_fixpoint(&d).unwrap());
    assert!(matches!(stratified_model(&gr("a :- not b. b :- not a.")), Err(EngineError::Stratification { .. })));
    assert!(matches!(stratified_model(&gr("{ a }.")), Err(EngineError::NotNormal(_))));
}

#[test]
fn well_founded() {
    let d = gr("a. b :- a. c :- b, d.");
    let w = well_founded_model(&d).unwrap();
    assert!(w.is_total());
    assert_eq!(w.true_set, least_fixpoint(&d).unwrap());

    let w = well_founded_model(&ground_with(&prog("a :- not a."), GroundOptions::default()).unwrap()).unwrap();
    assert_eq!(w.unknown_set, set(&["a"]));
    assert!(!w.is_total());

    let w = well_founded_model(&gr("c. b :- not c.")).unwrap();
    assert!(w.is_total());
    assert_eq!(w.true_set, set(&["c"]));
}

#[test]
fn optimization() {
    let o = optimize(&gr(&format!("{TSP}\n#show hc/2.")), &opts()).unwrap();
    assert_eq!(o.cost, Some(20));
    assert_eq!(o.models.len(), 2);

    let o = optimize(&gr("{ a }. #minimize { 1 : b }."), &opts()).unwrap();
    assert_eq!(o.cost, Some(0));
    assert_eq!(o.models.len(), 2);

    let o = optimize(&gr("a. :- a. #minimize { 1 : a }."), &opts()).unwrap();
    assert!(o.models.is_empty());
    assert_eq!(o.cost, None);

    let o = optimize(&gr("{ a ; b }. :- not a, not b. #minimize { 2 : a ; 3 : b }."), &opts()).unwrap();
    assert_eq!(o.cost, Some(2));
    assert_eq!(o.models.models, sets(&[&["a"]]));

    let o = optimize(&gr("{ a }. #minimize { -1 : a }."), &opts()).unwrap();
    assert_eq!(o.cost, Some(-1));
}

#[test]
fn debugging() {
    let d = debug_solve(&prog("a. :- a."), &opts()).unwrap();
    assert_eq!(d.cost, Some(1));
    assert_eq!(d.models.models, sets(&[&["a", "ic(c1)"]]));
    assert_eq!(d.violations[0][0].line, 1);

    let d = debug_solve(&prog(&format!("{ISOLATED}\n#show ic/1.")), &opts()).unwrap();
    assert_eq!(d.cost, Some(1));
    assert!(d.models.models.iter().all(|m| m == &set(&["ic(unreached(3))"])));
    let v = &d.violations[0][0];
    assert_eq!(v.bindings, vec![("V".to_string(), "3".to_string())]);

    let d = debug_solve(&prog(AUSTERE), &opts()).unwrap();
    assert_eq!(d.cost, Some(0));
    assert_eq!(d.projected().models, stable_models(&gr(AUSTERE), &opts()).unwrap().models);
}

#[test]
fn choice_cap() {
    let g = gr("{ p(1..5) }.");
    let e = stable_models(&g, &SolveOptions { max_choices: 3, ..opts() }).unwrap_err();
    assert_eq!(e, EngineError::TooManyChoices { count: 5, cap: 3 });
}

#[test]
fn aggregate_constraints() {
    let ms = stable_models(&gr("{ p(1..3) }.\n:- not 2 { p(X) : X = 1..3 } 2."), &opts()).unwrap();
    assert_eq!(ms.len(), 3);
    let ms = stable_models(&gr("n(1..3).\n1 { p(X) : n(X) } 1."), &opts()).unwrap();
    assert_eq!(ms.len(), 3);
}

fn atom_name(i: usize) -> String {
    ["a", "b", "c", "d", "e", "f"][i].to_string()
}

fn definite_program() -> impl Strategy<Value = String> {
    let rule = (0..5usize, prop::collection::vec(0..5usize, 0..3)).prop_map(|(h, body)| {
        if body.is_empty() {
            format!("{}.", atom_name(h))
        } else {
            format!("{} :- {}.", atom_name(h), body.iter().map(|&b| atom_name(b)).collect::<Vec<_>>().join(", "))
        }
    });
    prop::collection::vec(rule, 0..8).prop_map(|v| v.join("\n"))
}

/// Normal rules, bodiless choices and constraints over six atoms.
fn program_family() -> impl Strategy<Value = String> {
    let lit =
        (0..6usize, any::<bool>()).prop_map(|(a, neg)| format!("{}{}", if neg { "not " } else { "" }, atom_name(a)));
    let rule = (0..7usize, prop::collection::vec(lit, 0..3)).prop_map(|(h, body)| match (h, body.is_empty()) {
        (6, true) => "{ a }.".to_string(),
        (6, false) => format!(":- {}.", body.join(", ")),
        (h, true) => format!("{{ {} }}.", atom_name(h)),
        (h, false) => format!("{} :- {}.", atom_name(h), body.join(", ")),
    });
    prop::collection::vec(rule, 0..8).prop_map(|v| v.join("\n"))
}

fn unsimplified(src: &str) -> GroundProgram {
    ground_with(&prog(src), GroundOptions { simplify: false }).unwrap()
}

proptest! {
    #[test]
    fn tp_is_monotone(src in definite_program(), x in prop::collection::btree_set(0..5usize, 0..5), y in prop::collection::btree_set(0..5usize, 0..5)) {
        let g = unsimplified(&src);
        let small: AtomSet = x.iter().map(|&i| atom_name(i)).collect();
        let big: AtomSet = small.iter().cloned().chain(y.iter().map(|&i| atom_name(i))).collect();
        let a = tp_step(&g, &small).unwrap();
        let b = tp_step(&g, &big).unwrap();
        prop_assert!(a.is_subset(&b));
    }

    #[test]
    fn engine_agrees_with_oracle(src in program_family()) {
        let p = prog(&src);
        for g in [ground(&p).unwrap(), unsimplified(&src)] {
            let engine = stable_models(&g, &opts()).unwrap();
            let oracle = program_stable_models(&p, 20).unwrap();
            prop_assert_eq!(&engine.models, &oracle.models, "{}", src);
        }
    }

    #[test]
    fn well_founded_is_sound(src in program_family()) {
        let normal: String = src.lines().filter(|l| !l.starts_with('{') && !l.starts_with(":-")).collect::<Vec<_>>().join("\n");
        let g = unsimplified(&normal);
        let w = well_founded_model(&g).unwrap();
        let models = stable_models(&g, &opts()).unwrap();
        for m in &models.models {
            prop_assert!(w.true_set.is_subset(m));
            prop_assert!(w.false_set.is_disjoint(m));
        }
        if w.is_total() {
            prop_assert_eq!(&models.models, &vec![w.true_set.clone()]);
            if let Ok(s) = stratified_model(&g) {
                prop_assert_eq!(s, w.true_set.clone());
            }
        }
    }
}
