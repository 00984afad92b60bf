//! Acceptance gate. Prints one line per criterion and exits nonzero when a
//! criterion fails that is not listed in `EXPECTED_FAILURES`.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use austere::analysis::{check_stratified_negation, classify_easy};
use austere::engine::{
    debug_solve, ground, least_fixpoint, optimize, stable_models, stratified_model, well_founded_model, SolveOptions,
};
use austere::ht::{
    canonical_sort, check_entailment, classical_satisfies, ht_equivalent, ht_satisfies, program_stable_models,
    stable_models_of, AtomSet, HtInterpretation,
};
use austere::syntax::{parse_formula, parse_program, parse_program_with, Formula, ParseOptions, Program};
use austere::transform::{extend_by_definition, translate_formula, translate_program};

const HAM: &str = include_str!("../../../corpus/ham.lp");
const ISOLATED: &str = include_str!("../../../corpus/ham-isolated.lp");
const TSP: &str = include_str!("../../../corpus/tsp.lp");
const COLOR: &str = include_str!("../../../corpus/color.ez");
const QUEENS: &str = include_str!("../../../corpus/queens.ez");
const TOH: &str = include_str!("../../../corpus/toh.ez");
const TRANSLATION: &str = include_str!("../../../corpus/translation.lp");

/// Criteria whose statement does not hold as written; see the README.
const EXPECTED_FAILURES: &[u32] = &[9];

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn set(items: &[&str]) -> AtomSet {
    items.iter().map(|s| s.to_string()).collect()
}

fn sorted(mut v: Vec<AtomSet>) -> Vec<AtomSet> {
    canonical_sort(&mut v);
    v
}

fn prog(src: &str) -> Program {
    parse_program(src).unwrap_or_else(|e| panic!("{e}\n{src}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn opts(max_choices: usize) -> SolveOptions {
    SolveOptions { max_choices, max_models: 0 }
}

fn golden_translation() -> Outcome {
    let t = translate_program(&prog(TRANSLATION)).map_err(|e| e.to_string())?;
    let got: BTreeSet<String> = t.program.rules.iter().map(|r| r.to_string()).collect();
    let want: BTreeSet<String> = [
        "a.",
        "{ __aux_not_b }.",
        "{ __aux_not_c }.",
        "b :- __aux_not_c.",
        "c :- __aux_not_b.",
        "d :- a, __aux_not_c.",
        ":- b, __aux_not_b.",
        ":- not b, not __aux_not_b.",
        ":- c, __aux_not_c.",
        ":- not c, not __aux_not_c.",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    ensure(got == want, || format!("rules differ: {got:?}"))?;
    let g = ground(&t.program).map_err(|e| e.to_string())?;
    let ms = stable_models(&g, &opts(24)).map_err(|e| e.to_string())?;
    let want = sorted(vec![set(&["a", "b", "d", "__aux_not_c"]), set(&["a", "c", "__aux_not_b"])]);
    ensure(ms.models == want, || format!("models {:?}", ms.models))?;
    let projected = sorted(ms.models.iter().map(|m| t.restrict(m)).collect());
    ensure(projected == sorted(vec![set(&["a", "b", "d"]), set(&["a", "c"])]), || format!("{projected:?}"))?;
    Ok("10 rules, 2 models".into())
}

fn golden_formula() -> Outcome {
    let f = |s: &str| parse_formula(s).unwrap();
    let psi = f("not a -> b | not not (c & not d)");
    let r = translate_formula(&psi).map_err(|e| e.to_string())?;
    ensure(r.aux.len() == 2, || "expected two auxiliary atoms".into())?;
    let (x1, x2) = (r.aux[0].formula(), r.aux[1].formula());
    let (n1, n2) = (f("not a"), f("not not (c & not d)"));
    let want = vec![
        Formula::implies(x1.clone(), Formula::or(f("b"), x2.clone())),
        Formula::or(x1.clone(), Formula::not(x1.clone())),
        Formula::or(x2.clone(), Formula::not(x2.clone())),
        Formula::not(Formula::not(Formula::iff(n1, x1))),
        Formula::not(Formula::not(Formula::iff(n2, x2))),
    ];
    ensure(r.theory == want, || format!("theory {:?}", r.theory))?;
    let source = stable_models_of(&[psi]).map_err(|e| e.to_string())?;
    ensure(source.models == vec![set(&["b"])], || format!("SM(psi) = {:?}", source.models))?;
    let target = stable_models_of(&r.theory).map_err(|e| e.to_string())?;
    let restricted = sorted(target.models.iter().map(|m| r.restrict(m)).collect());
    ensure(restricted == source.models, || format!("restricted {restricted:?}"))?;
    let extended = sorted(source.models.iter().map(|m| r.extend(m)).collect());
    ensure(extended == target.models, || format!("extended {extended:?}"))?;
    Ok("SM = {{b}}".into())
}

const ATOMS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

fn lit(rng: &mut ChaCha8Rng, atoms: usize) -> String {
    let a = ATOMS[rng.gen_range(0..atoms)];
    if rng.gen_bool(0.4) {
        format!("not {a}")
    } else {
        a.to_string()
    }
}

fn random_normal(rng: &mut ChaCha8Rng, atoms: usize, rules: usize, constraints: bool) -> String {
    let n = rng.gen_range(0..=rules);
    let mut out = Vec::new();
    for _ in 0..n {
        let body: Vec<String> = (0..rng.gen_range(0..=3)).map(|_| lit(rng, atoms)).collect();
        let head =
            if constraints && !body.is_empty() && rng.gen_bool(0.1) { "" } else { ATOMS[rng.gen_range(0..atoms)] };
        out.push(if body.is_empty() { format!("{head}.") } else { format!("{head} :- {}.", body.join(", ")) });
    }
    out.join("\n")
}

/// Every rule `h :- B` over `a`, `b` with at most two body literals.
fn two_atom_rules() -> Vec<String> {
    let lits = ["a", "not a", "b", "not b"];
    let mut bodies: Vec<Vec<&str>> = vec![vec![]];
    for i in 0..4 {
        bodies.push(vec![lits[i]]);
        for j in i + 1..4 {
            bodies.push(vec![lits[i], lits[j]]);
        }
    }
    let mut out = Vec::new();
    for h in ["a", "b"] {
        for b in &bodies {
            out.push(if b.is_empty() { format!("{h}.") } else { format!("{h} :- {}.", b.join(", ")) });
        }
    }
    out
}

fn check_translation(src: &str) -> Result<(), String> {
    let p = prog(src);
    let oracle = program_stable_models(&p, 20).map_err(|e| e.to_string())?;
    let t = translate_program(&p).map_err(|e| e.to_string())?;
    let g = ground(&t.program).map_err(|e| e.to_string())?;
    let engine = stable_models(&g, &opts(64)).map_err(|e| e.to_string())?;
    let restricted = sorted(engine.models.iter().map(|m| t.restrict(m)).collect());
    ensure(restricted == oracle.models, || format!("{src}\nengine {restricted:?}\noracle {:?}", oracle.models))?;
    for m in &oracle.models {
        let e = t.extend(m);
        ensure(engine.contains(&e) && &t.restrict(&e) == m, || format!("{src}\nextend({m:?}) = {e:?}"))?;
    }
    for m in &engine.models {
        ensure(&t.extend(&t.restrict(m)) == m, || format!("{src}\nnot injective at {m:?}"))?;
    }
    Ok(())
}

fn oracle_sweep() -> Outcome {
    let rules = two_atom_rules();
    let mut exhaustive = 0;
    let n = rules.len();
    let mut check = |picked: &[usize]| -> Result<(), String> {
        let src: Vec<&str> = picked.iter().map(|&i| rules[i].as_str()).collect();
        exhaustive += 1;
        check_translation(&src.join("\n"))
    };
    check(&[])?;
    for i in 0..n {
        check(&[i])?;
        for j in i + 1..n {
            check(&[i, j])?;
            for k in j + 1..n {
                check(&[i, j, k])?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let random = 600;
    for _ in 0..random {
        let atoms = rng.gen_range(1..=5);
        check_translation(&random_normal(&mut rng, atoms, 10, true))?;
    }
    Ok(format!("{exhaustive} exhaustive + {random} random programs"))
}

fn uniqueness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let programs = 250;
    let mut extensions = 0;
    for _ in 0..programs {
        let atoms = rng.gen_range(1..=6);
        let pick = |rng: &mut ChaCha8Rng| ATOMS[rng.gen_range(0..atoms)];
        let facts: BTreeSet<&str> = (0..rng.gen_range(0..=2)).map(|_| pick(&mut rng)).collect();
        let choices: BTreeSet<&str> = (0..rng.gen_range(0..=3)).map(|_| pick(&mut rng)).collect();
        let mut define = Vec::new();
        for _ in 0..rng.gen_range(0..=6) {
            let body: Vec<&str> = (0..rng.gen_range(1..=3)).map(|_| pick(&mut rng)).collect();
            define.push(format!("{} :- {}.", pick(&mut rng), body.join(", ")));
        }
        let choices: Vec<&str> = choices.into_iter().collect();
        for mask in 0u32..1 << choices.len() {
            let mut src: Vec<String> = facts.iter().map(|f| format!("{f}.")).collect();
            src.extend((0..choices.len()).filter(|i| mask >> i & 1 == 1).map(|i| format!("{}.", choices[i])));
            src.extend(define.iter().cloned());
            let src = src.join("\n");
            let p = prog(&src);
            let oracle = program_stable_models(&p, 20).map_err(|e| e.to_string())?;
            let lfp = least_fixpoint(&ground(&p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure(oracle.models == vec![lfp.clone()], || format!("{src}\noracle {:?} lfp {lfp:?}", oracle.models))?;
            extensions += 1;
        }
    }
    Ok(format!("{programs} programs, {extensions} choice subsets"))
}

fn stratified() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut accepted, mut tried) = (0, 0);
    while accepted < 250 {
        tried += 1;
        let atoms = rng.gen_range(1..=6);
        let src = random_normal(&mut rng, atoms, 8, false);
        let p = prog(&src);
        if !check_stratified_negation(&p).ok {
            continue;
        }
        accepted += 1;
        let oracle = program_stable_models(&p, 20).map_err(|e| e.to_string())?;
        ensure(oracle.len() == 1, || format!("{src}\n{} stable models", oracle.len()))?;
        let g = ground(&p).map_err(|e| e.to_string())?;
        let s = stratified_model(&g).map_err(|e| format!("{src}\n{e}"))?;
        ensure(oracle.models[0] == s, || format!("{src}\nstratified {s:?}"))?;
        let w = well_founded_model(&g).map_err(|e| e.to_string())?;
        ensure(w.is_total() && w.true_set == s, || format!("{src}\nwell-founded {w:?}"))?;
    }
    Ok(format!("{accepted} stratified of {tried} generated"))
}

fn classification() -> Outcome {
    let cases = [
        ("ham", HAM, "({1,2,3},{5},{6,7},{8,9,10})"),
        ("color", COLOR, "(∅,{1},{2},{3})"),
        ("queens", QUEENS, "(∅,{1},{3,4},{6,7},{9,10})"),
        ("toh", TOH, "({1,2,3,4},{6},{8},{10,11,12},{14,15},{17,19,20,21,23})"),
    ];
    for (name, src, want) in cases {
        let p = prog(src);
        let d = classify_easy(&p);
        ensure(d.easy, || format!("{name} not easy"))?;
        let got = d.render(&p);
        ensure(got == want, || format!("{name}: {got}"))?;
    }
    Ok("4 encodings".into())
}

const TSP_ARCS: [(i64, i64, i64); 7] = [(1, 2, 3), (2, 3, 5), (2, 4, 6), (3, 1, 4), (3, 4, 7), (4, 1, 5), (4, 3, 7)];

fn circuit(order: &[i64]) -> Option<(AtomSet, i64)> {
    let mut arcs = AtomSet::new();
    let mut cost = 0;
    for (i, &u) in order.iter().enumerate() {
        let v = order[(i + 1) % order.len()];
        let (_, _, c) = TSP_ARCS.iter().find(|(a, b, _)| *a == u && *b == v)?;
        cost += c;
        arcs.insert(format!("hc({u},{v})"));
    }
    Some((arcs, cost))
}

fn permutations(items: &[i64]) -> Vec<Vec<i64>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn tsp() -> Outcome {
    let mut tours: BTreeMap<AtomSet, i64> = BTreeMap::new();
    for rest in permutations(&[2, 3, 4]) {
        let order: Vec<i64> = std::iter::once(1).chain(rest).collect();
        if let Some((arcs, cost)) = circuit(&order) {
            tours.insert(arcs, cost);
        }
    }
    let best = *tours.values().min().ok_or("no circuit")?;
    let optimal = sorted(tours.iter().filter(|(_, &c)| c == best).map(|(a, _)| a.clone()).collect());

    let g = ground(&prog(&format!("{TSP}\n#show hc/2."))).map_err(|e| e.to_string())?;
    let all = stable_models(&g, &opts(24)).map_err(|e| e.to_string())?;
    let circuits = sorted(tours.keys().cloned().collect());
    ensure(all.models == circuits, || format!("circuits {:?}", all.models))?;
    let o = optimize(&g, &opts(24)).map_err(|e| e.to_string())?;
    ensure(o.cost == Some(best), || format!("cost {:?}, oracle {best}", o.cost))?;
    ensure(o.models.models == optimal, || format!("optimal {:?}", o.models.models))?;
    ensure(best == 20 && optimal.len() == 2, || format!("oracle: {} tours of cost {best}", optimal.len()))?;
    Ok(format!("{} optimal tours, cost {best}", optimal.len()))
}

fn queens_backtrack(n: i64, row: i64, cols: &mut Vec<i64>) -> usize {
    if row == n {
        return 1;
    }
    let mut count = 0;
    for c in 0..n {
        let safe = cols.iter().enumerate().all(|(r, &q)| q != c && (row - r as i64).abs() != (c - q).abs());
        if safe {
            cols.push(c);
            count += queens_backtrack(n, row + 1, cols);
            cols.pop();
        }
    }
    count
}

fn queens() -> Outcome {
    let n = 6;
    let options = ParseOptions { consts: BTreeMap::from([("n".to_string(), n)]) };
    let p = parse_program_with(QUEENS, &options).map_err(|e| e.to_string())?.program;
    let g = ground(&p).map_err(|e| e.to_string())?;
    let engine = stable_models(&g, &opts(64)).map_err(|e| e.to_string())?.len();
    let oracle = queens_backtrack(n, 0, &mut Vec::new());
    ensure(engine == oracle, || format!("engine {engine}, oracle {oracle}"))?;
    Ok(format!("{engine} solutions"))
}

fn random_formula(rng: &mut ChaCha8Rng, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.1) { Formula::Bottom } else { Formula::atom(ATOMS[rng.gen_range(0..3)]) };
    }
    let a = random_formula(rng, depth - 1);
    match rng.gen_range(0..4) {
        0 => Formula::not(a),
        1 => Formula::and(a, random_formula(rng, depth - 1)),
        2 => Formula::or(a, random_formula(rng, depth - 1)),
        _ => Formula::implies(a, random_formula(rng, depth - 1)),
    }
}

fn subformulas(f: &Formula, out: &mut Vec<Formula>) {
    out.push(f.clone());
    match f {
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            subformulas(a, out);
            subformulas(b, out);
        }
        Formula::Atom(_) | Formula::Bottom => {}
    }
}

/// All `(H, T)` with `H ⊆ T ⊆ v`.
fn pairs(v: &AtomSet) -> Vec<(AtomSet, AtomSet)> {
    let atoms: Vec<&String> = v.iter().collect();
    let pick = |m: u32| -> AtomSet { (0..atoms.len()).filter(|i| m >> i & 1 == 1).map(|i| atoms[i].clone()).collect() };
    let mut out = Vec::new();
    for t in 0u32..1 << atoms.len() {
        let mut h = t;
        loop {
            out.push((pick(h), pick(t)));
            if h == 0 {
                break;
            }
            h = (h - 1) & t;
        }
    }
    out
}

fn ht_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let vocab = set(&ATOMS[..3]);
    let pairs_checked = 1200;
    for _ in 0..pairs_checked {
        let p1 = random_formula(&mut rng, 3);
        let p2 = random_formula(&mut rng, 3);
        let link = Formula::iff(Formula::not(p1.clone()), p2.clone());
        let lem = Formula::or(Formula::not(p2.clone()), p2.clone());
        let entails = check_entailment(std::slice::from_ref(&link), &lem, &vocab).map_err(|e| e.to_string())?;
        ensure(entails, || format!("entailment fails for {p1}, {p2}"))?;
        let lhs = Formula::and(
            Formula::not(Formula::and(p1.clone(), p2.clone())),
            Formula::not(Formula::and(Formula::not(p1.clone()), Formula::not(p2.clone()))),
        );
        let nn = Formula::not(Formula::not(link.clone()));
        let first = ht_equivalent(&[lhs], std::slice::from_ref(&nn), &vocab).map_err(|e| e.to_string())?;
        ensure(first, || format!("first equivalence fails for {p1}, {p2}"))?;
        let second = ht_equivalent(&[Formula::and(nn, lem.clone())], &[Formula::and(link, lem)], &vocab)
            .map_err(|e| e.to_string())?;
        ensure(second, || format!("second equivalence fails for {p1}, {p2}"))?;
    }

    let (mut literal_bad, mut with_there_bad, mut example) = (0, 0, None);
    let correspondences = 600;
    for i in 0..correspondences {
        let psi = random_formula(&mut rng, 3);
        let phi = if i % 2 == 0 {
            let mut subs = Vec::new();
            subformulas(&psi, &mut subs);
            subs.swap_remove(rng.gen_range(0..subs.len()))
        } else {
            random_formula(&mut rng, 3)
        };
        let ext = extend_by_definition(&psi, &phi).map_err(|e| e.to_string())?;
        let x = ext.aux[0].name();
        let full = ext.formula();
        let mut wide = vocab.clone();
        wide.insert(x.clone());
        let (mut bad, mut bad_there) = (false, false);
        for (h, t) in pairs(&wide) {
            let lhs = ht_satisfies(&HtInterpretation::new(wide.clone(), h.clone(), t.clone()).unwrap(), &full)
                .map_err(|e| e.to_string())?;
            let (ha, ta) = (&h & &vocab, &t & &vocab);
            let small = HtInterpretation::new(vocab.clone(), ha, ta.clone()).unwrap();
            let phi_here = ht_satisfies(&small, &phi).map_err(|e| e.to_string())?;
            let rhs = ht_satisfies(&small, &psi).map_err(|e| e.to_string())? && h.contains(&x) == phi_here;
            if lhs != rhs {
                bad = true;
                example.get_or_insert_with(|| {
                    format!("psi = {psi}, phi = {phi}, H = {h:?}, T = {t:?}: left {lhs}, right {rhs}")
                });
            }
            let rhs_there = rhs && t.contains(&x) == classical_satisfies(&ta, &phi);
            bad_there |= lhs != rhs_there;
        }
        literal_bad += bad as usize;
        with_there_bad += bad_there as usize;
    }
    let summary = format!(
        "{pairs_checked} pairs; correspondence: {literal_bad}/{correspondences} pairs with counterexamples as stated, \
         {with_there_bad} once T\\At is also constrained"
    );
    match example {
        Some(e) => Err(format!("{summary}; first: {e}")),
        None => Ok(summary),
    }
}

fn violations_of(arcs: &[(i64, i64)], nodes: &[i64], start: i64) -> AtomSet {
    let mut reached: BTreeSet<i64> = arcs.iter().filter(|a| a.0 == start).map(|a| a.1).collect();
    loop {
        let next: BTreeSet<i64> = arcs.iter().filter(|a| reached.contains(&a.0)).map(|a| a.1).collect();
        if next.is_subset(&reached) {
            break;
        }
        reached.extend(next);
    }
    let mut out = AtomSet::new();
    for &v in nodes {
        if !reached.contains(&v) {
            out.insert(format!("ic(unreached({v}))"));
        }
        if arcs.iter().filter(|a| a.0 == v).count() > 1 {
            out.insert(format!("ic(two_out({v}))"));
        }
        if arcs.iter().filter(|a| a.1 == v).count() > 1 {
            out.insert(format!("ic(two_in({v}))"));
        }
    }
    out
}

fn debugging() -> Outcome {
    let edges = [(1, 2), (2, 1)];
    let nodes = [1, 2, 3];
    let mut all = Vec::new();
    for mask in 0u32..1 << edges.len() {
        let arcs: Vec<(i64, i64)> = (0..edges.len()).filter(|i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
        all.push(violations_of(&arcs, &nodes, 1));
    }
    let best = all.iter().map(|v| v.len()).min().unwrap();
    let mut minimal: Vec<AtomSet> = all.into_iter().filter(|v| v.len() == best).collect();
    canonical_sort(&mut minimal);
    minimal.dedup();

    let p = prog(&format!("{ISOLATED}\n#show ic/1."));
    let d = debug_solve(&p, &opts(24)).map_err(|e| e.to_string())?;
    ensure(d.cost == Some(best as i64), || format!("cost {:?}, oracle {best}", d.cost))?;
    ensure(d.models.models == minimal, || format!("{:?} vs oracle {minimal:?}", d.models.models))?;
    ensure(minimal == vec![set(&["ic(unreached(3))"])], || format!("oracle {minimal:?}"))?;
    Ok(format!("{{ic(unreached(3))}}, cost {best}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "golden program translation", 1, golden_translation),
        (2, "golden formula translation", 1, golden_formula),
        (3, "translation agrees with the oracle", 60, oracle_sweep),
        (4, "unique extension of austere programs", 60, uniqueness),
        (5, "stratified negation", 60, stratified),
        (6, "classification goldens", 4, classification),
        (7, "travelling salesperson instance", 5, tsp),
        (8, "six queens", 30, queens),
        (9, "here-and-there properties", 120, ht_properties),
        (10, "debugging an isolated node", 5, debugging),
    ];
    let mut unexpected = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(s) if elapsed > Duration::from_secs(limit) => Err(format!("{s}; took longer than {limit}s")),
            other => other,
        };
        let ms = elapsed.as_millis();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name} ({ms} ms): {detail}"),
            Err(detail) => {
                let expected = EXPECTED_FAILURES.contains(&id);
                if !expected {
                    unexpected += 1;
                }
                let tag = if expected { " [expected]" } else { "" };
                println!("FAIL {id:>2} {name} ({ms} ms){tag}: {detail}");
            }
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
