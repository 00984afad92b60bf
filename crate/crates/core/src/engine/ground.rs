//! Naive bottom-up instantiation.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::table::{AtomId, AtomTable};
use super::EngineError;
use crate::syntax::{
    Aggregate, AggregateFunction, Atom, BodyElem, Bounds, Comparison, Condition, Directive, EvalError, GroundAtom,
    Head, Pred, Program, RelOp, Rule, Sign, Term, Value, WeightElement,
};
use crate::transform::eliminate_aggregate_heads;

/// Grounding stops once this many atoms are derivable.
pub const MAX_DOMAIN: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundRule {
    pub head: AtomId,
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
    pub line: usize,
}

/// `{atom} :- pos, not neg.`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundChoice {
    pub atom: AtomId,
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
    pub line: usize,
}

/// Conjunction of literals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Conj {
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
}

/// An aggregate element: the literal holds and at least one condition does.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundElement {
    pub atom: AtomId,
    pub negated: bool,
    pub conditions: Vec<Conj>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundAggregate {
    pub negated: bool,
    pub elements: Vec<GroundElement>,
    /// Guards with integer bound terms.
    pub bounds: Bounds,
}

impl GroundAggregate {
    pub fn admits(&self, count: usize) -> bool {
        self.bounds.admits(count as i64).unwrap_or(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundConstraint {
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
    pub aggregates: Vec<GroundAggregate>,
    pub line: usize,
}

/// A distinct minimize tuple with the conditions under which it counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundWeight {
    pub weight: i64,
    pub tuple: Vec<Value>,
    pub conditions: Vec<Conj>,
}

/// A propositional program over an [`AtomTable`].
#[derive(Clone, Debug, Default)]
pub struct GroundProgram {
    pub table: AtomTable,
    pub facts: Vec<AtomId>,
    pub choices: Vec<GroundChoice>,
    pub rules: Vec<GroundRule>,
    pub constraints: Vec<GroundConstraint>,
    pub minimize: Vec<GroundWeight>,
    /// Whether the source had a minimize directive at all.
    pub optimize: bool,
    /// Predicates named by `#show`; `None` shows everything.
    pub show: Option<BTreeSet<Pred>>,
}

#[derive(Clone, Copy, Debug)]
pub struct GroundOptions {
    /// Drop literals decided by facts and rules that can never fire.
    pub simplify: bool,
}

impl Default for GroundOptions {
    fn default() -> Self {
        GroundOptions { simplify: true }
    }
}

type Subst = Vec<(String, Value)>;

fn lookup(s: &Subst, v: &str) -> Option<Value> {
    s.iter().rev().find(|(k, _)| k == v).map(|(_, x)| x.clone())
}

fn eval(t: &Term, s: &Subst) -> Result<Value, EvalError> {
    t.eval_with(&|v| lookup(s, v))
}

fn evaluable(t: &Term, s: &Subst) -> bool {
    match t {
        Term::Int(_) | Term::Sym(_) => true,
        Term::Var(v) => s.iter().any(|(k, _)| k == v),
        Term::Anon => false,
        Term::Func(_, args) => args.iter().all(|a| evaluable(a, s)),
        Term::BinOp(_, l, r) | Term::Interval(l, r) => evaluable(l, s) && evaluable(r, s),
        Term::Neg(t) => evaluable(t, s),
    }
}

/// Arithmetic subterms must be evaluable before a term can be matched.
fn matchable(t: &Term, s: &Subst) -> bool {
    match t {
        Term::Int(_) | Term::Sym(_) | Term::Var(_) | Term::Anon => true,
        Term::Func(_, args) => args.iter().all(|a| matchable(a, s)),
        _ => evaluable(t, s),
    }
}

fn match_term(t: &Term, v: &Value, s: &mut Subst) -> bool {
    match t {
        Term::Var(x) => match lookup(s, x) {
            Some(b) => b == *v,
            None => {
                s.push((x.clone(), v.clone()));
                true
            }
        },
        Term::Anon => true,
        Term::Func(n, args) => match v {
            Value::Func(m, vals) if m == n && vals.len() == args.len() => {
                args.iter().zip(vals).all(|(a, b)| match_term(a, b, s))
            }
            _ => false,
        },
        Term::Interval(l, r) => match (eval(l, s), eval(r, s), v) {
            (Ok(Value::Int(a)), Ok(Value::Int(b)), Value::Int(x)) => a <= *x && *x <= b,
            _ => false,
        },
        _ => eval(t, s).is_ok_and(|x| x == *v),
    }
}

/// Bindings under which `t` evaluates to `v`, if any.
pub(crate) fn match_value(t: &Term, v: &Value) -> Option<Vec<(String, Value)>> {
    let mut s = Vec::new();
    match_term(t, v, &mut s).then_some(s)
}

fn interval(t: &Term, s: &Subst) -> Option<Result<Vec<Value>, EvalError>> {
    let Term::Interval(l, r) = t else { return None };
    Some(match (eval(l, s), eval(r, s)) {
        (Ok(Value::Int(a)), Ok(Value::Int(b))) => Ok((a..=b).map(Value::Int).collect()),
        (Err(e), _) | (_, Err(e)) => Err(e),
        _ => Err(EvalError::Arithmetic(t.to_string())),
    })
}

/// Values a comparison side takes: several for an interval.
fn values(t: &Term, s: &Subst) -> Result<Vec<Value>, EvalError> {
    interval(t, s).unwrap_or_else(|| eval(t, s).map(|v| vec![v]))
}

/// Instances of a head atom: an interval argument yields one atom per value.
fn expand(atom: &Atom, s: &Subst) -> Result<Vec<GroundAtom>, EvalError> {
    let mut out: Vec<Vec<Value>> = vec![Vec::new()];
    for t in &atom.args {
        let vs = values(t, s)?;
        out = out.into_iter().flat_map(|pre| vs.iter().map(move |v| [pre.clone(), vec![v.clone()]].concat())).collect();
    }
    Ok(out.into_iter().map(|args| GroundAtom::new(atom.pred.clone(), args)).collect())
}

fn compare(c: &Comparison, s: &Subst) -> Result<bool, EvalError> {
    let (l, r) = (values(&c.lhs, s)?, values(&c.rhs, s)?);
    Ok(l.iter().any(|a| r.iter().any(|b| c.op.holds(a, b))))
}

#[derive(Clone, Copy)]
enum Item<'a> {
    Pos(&'a Atom),
    Cmp(&'a Comparison),
}

#[derive(Default)]
struct Relation {
    tuples: Vec<Vec<Value>>,
    set: HashSet<Vec<Value>>,
    index: HashMap<(usize, Value), Vec<usize>>,
}

#[derive(Default)]
struct Domain {
    rels: HashMap<(String, usize), Relation>,
    size: usize,
}

impl Domain {
    fn insert(&mut self, a: GroundAtom) -> bool {
        let rel = self.rels.entry((a.pred, a.args.len())).or_default();
        if rel.set.contains(&a.args) {
            return false;
        }
        let i = rel.tuples.len();
        for (p, v) in a.args.iter().enumerate() {
            rel.index.entry((p, v.clone())).or_default().push(i);
        }
        rel.set.insert(a.args.clone());
        rel.tuples.push(a.args);
        self.size += 1;
        true
    }

    fn contains(&self, a: &GroundAtom) -> bool {
        self.rels.get(&(a.pred.clone(), a.args.len())).is_some_and(|r| r.set.contains(&a.args))
    }

    fn candidates(&self, atom: &Atom, s: &Subst) -> (Option<&Relation>, Option<Vec<usize>>) {
        let Some(rel) = self.rels.get(&(atom.pred.clone(), atom.args.len())) else {
            return (None, None);
        };
        let mut best: Option<&Vec<usize>> = None;
        for (p, t) in atom.args.iter().enumerate() {
            if matches!(t, Term::Interval(..)) || !evaluable(t, s) {
                continue;
            }
            let Ok(v) = eval(t, s) else {
                return (None, None);
            };
            match rel.index.get(&(p, v)) {
                None => return (None, None),
                Some(b) if best.is_none_or(|x| b.len() < x.len()) => best = Some(b),
                _ => {}
            }
        }
        (Some(rel), best.cloned())
    }

    /// All extensions of `s` satisfying the items.
    fn solve(
        &self,
        items: &[Item],
        s: &mut Subst,
        done: &mut Vec<bool>,
        out: &mut Vec<Subst>,
    ) -> Result<(), EvalError> {
        let mut pick = None;
        for (i, it) in items.iter().enumerate() {
            if done[i] {
                continue;
            }
            match it {
                Item::Cmp(c) if evaluable(&c.lhs, s) && evaluable(&c.rhs, s) => {
                    pick = Some((0, i));
                    break;
                }
                Item::Cmp(c) if c.op == RelOp::Eq => {
                    let binds = |a: &Term, b: &Term| matches!(a, Term::Var(_)) && evaluable(b, s);
                    if (binds(&c.lhs, &c.rhs) || binds(&c.rhs, &c.lhs)) && pick.is_none_or(|(p, _)| p > 1) {
                        pick = Some((1, i));
                    }
                }
                Item::Pos(a) if a.args.iter().all(|t| matchable(t, s)) && pick.is_none() => pick = Some((2, i)),
                _ => {}
            }
        }
        let Some((kind, i)) = pick else {
            if let Some(i) = done.iter().position(|d| !d) {
                let mut vars = Vec::new();
                match items[i] {
                    Item::Pos(a) => a.collect_vars(&mut vars),
                    Item::Cmp(c) => {
                        c.lhs.collect_vars(&mut vars);
                        c.rhs.collect_vars(&mut vars);
                    }
                }
                let v = vars.into_iter().find(|v| lookup(s, v).is_none()).unwrap_or_else(|| "_".into());
                return Err(EvalError::Unbound(v));
            }
            out.push(s.clone());
            return Ok(());
        };
        done[i] = true;
        let mark = s.len();
        match (kind, items[i]) {
            (0, Item::Cmp(c)) => {
                if compare(c, s)? {
                    self.solve(items, s, done, out)?;
                }
            }
            (1, Item::Cmp(c)) => {
                let (var, expr) = match (&c.lhs, &c.rhs) {
                    (Term::Var(v), e) if lookup(s, v).is_none() => (v, e),
                    (e, Term::Var(v)) => (v, e),
                    _ => unreachable!(),
                };
                for val in values(expr, s)? {
                    s.push((var.clone(), val));
                    self.solve(items, s, done, out)?;
                    s.truncate(mark);
                }
            }
            (_, Item::Pos(a)) => {
                let (rel, idx) = self.candidates(a, s);
                if let Some(rel) = rel {
                    let iter: Box<dyn Iterator<Item = &Vec<Value>>> = match &idx {
                        Some(ix) => Box::new(ix.iter().map(|&k| &rel.tuples[k])),
                        None => Box::new(rel.tuples.iter()),
                    };
                    for tuple in iter {
                        if a.args.iter().zip(tuple).all(|(t, v)| match_term(t, v, s)) {
                            self.solve(items, s, done, out)?;
                        }
                        s.truncate(mark);
                    }
                }
            }
            _ => unreachable!(),
        }
        done[i] = false;
        Ok(())
    }

    fn substitutions(&self, items: &[Item], base: &Subst) -> Result<Vec<Subst>, EvalError> {
        let mut out = Vec::new();
        let mut s = base.clone();
        self.solve(items, &mut s, &mut vec![false; items.len()], &mut out)?;
        Ok(out)
    }
}

fn cond_items(cond: &[Condition]) -> Vec<Item<'_>> {
    cond.iter()
        .filter_map(|c| match c {
            Condition::Lit(l) if !l.is_negative() => Some(Item::Pos(&l.atom)),
            Condition::Cmp(c) => Some(Item::Cmp(c)),
            _ => None,
        })
        .collect()
}

fn body_items(rule: &Rule) -> Vec<Item<'_>> {
    rule.body
        .iter()
        .filter_map(|b| match b {
            BodyElem::Lit(l) if !l.is_negative() => Some(Item::Pos(&l.atom)),
            BodyElem::Cmp(c) => Some(Item::Cmp(c)),
            _ => None,
        })
        .collect()
}

fn binding_vars(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(v) => {
            out.insert(v.clone());
        }
        Term::Func(_, args) => args.iter().for_each(|a| binding_vars(a, out)),
        _ => {}
    }
}

fn vars_of(t: &Term) -> Vec<String> {
    let mut v = Vec::new();
    t.collect_vars(&mut v);
    v
}

/// Variables bound by positive literals and by `X = expr` chains.
fn closure(items: &[Item], mut bound: BTreeSet<String>) -> BTreeSet<String> {
    for it in items {
        if let Item::Pos(a) = it {
            a.args.iter().for_each(|t| binding_vars(t, &mut bound));
        }
    }
    loop {
        let before = bound.len();
        for it in items {
            if let Item::Cmp(c) = it {
                if c.op != RelOp::Eq {
                    continue;
                }
                for (x, e) in [(&c.lhs, &c.rhs), (&c.rhs, &c.lhs)] {
                    if let Term::Var(v) = x {
                        if vars_of(e).iter().all(|w| bound.contains(w)) && !e.has_anon() {
                            bound.insert(v.clone());
                        }
                    }
                }
            }
        }
        if bound.len() == before {
            return bound;
        }
    }
}

fn require(vars: impl IntoIterator<Item = String>, bound: &BTreeSet<String>, line: usize) -> Result<(), EngineError> {
    for v in vars {
        if !bound.contains(&v) {
            return Err(EngineError::Unsafe { line, var: v });
        }
    }
    Ok(())
}

fn atom_vars(a: &Atom) -> Vec<String> {
    let mut v = Vec::new();
    a.collect_vars(&mut v);
    v
}

fn condition_vars(cond: &[Condition]) -> Vec<String> {
    let mut v = Vec::new();
    for c in cond {
        match c {
            Condition::Lit(l) => l.atom.collect_vars(&mut v),
            Condition::Cmp(c) => {
                c.lhs.collect_vars(&mut v);
                c.rhs.collect_vars(&mut v);
            }
        }
    }
    v
}

fn anon_check(cond: &[Condition], line: usize) -> Result<(), EngineError> {
    for c in cond {
        if let Condition::Lit(l) = c {
            if l.is_negative() && l.atom.has_anon() {
                return Err(EngineError::Unsafe { line, var: "_".into() });
            }
        }
    }
    Ok(())
}

fn check_safety(rule: &Rule) -> Result<(), EngineError> {
    let line = rule.line;
    let bound = closure(&body_items(rule), BTreeSet::new());
    require(rule.global_vars(), &bound, line)?;
    match &rule.head {
        Head::Atom(a) if a.has_anon() => return Err(EngineError::Unsafe { line, var: "_".into() }),
        Head::Choice(c) => {
            for e in &c.elements {
                let b = closure(&cond_items(&e.condition), bound.clone());
                require(atom_vars(&e.literal.atom), &b, line)?;
                require(condition_vars(&e.condition), &b, line)?;
                anon_check(&e.condition, line)?;
                if e.literal.atom.has_anon() {
                    return Err(EngineError::Unsafe { line, var: "_".into() });
                }
            }
        }
        _ => {}
    }
    for b in &rule.body {
        match b {
            BodyElem::Lit(l) if l.is_negative() && l.atom.has_anon() => {
                return Err(EngineError::Unsafe { line, var: "_".into() })
            }
            BodyElem::Agg { aggregate, .. } => {
                for e in &aggregate.elements {
                    let mut items = cond_items(&e.condition);
                    if !e.literal.is_negative() {
                        items.push(Item::Pos(&e.literal.atom));
                    }
                    let b = closure(&items, bound.clone());
                    require(atom_vars(&e.literal.atom), &b, line)?;
                    require(condition_vars(&e.condition), &b, line)?;
                    anon_check(&e.condition, line)?;
                    if e.literal.is_negative() && e.literal.atom.has_anon() {
                        return Err(EngineError::Unsafe { line, var: "_".into() });
                    }
                }
            }
            _ => {}
        }
    }
    Ok(())
}

/// Gives every `_` its own variable so that matched values can be read back.
fn name_anonymous(rule: &mut Rule) {
    let mut k = 0;
    rule.for_each_term_mut(&mut |t| fresh_anon(t, &mut k));
}

fn fresh_anon(t: &mut Term, k: &mut usize) {
    match t {
        Term::Anon => {
            *t = Term::Var(format!("_{k}"));
            *k += 1;
        }
        Term::Func(_, args) => args.iter_mut().for_each(|a| fresh_anon(a, k)),
        Term::BinOp(_, l, r) | Term::Interval(l, r) => {
            fresh_anon(l, k);
            fresh_anon(r, k);
        }
        _ => {}
    }
}

fn err(line: usize) -> impl Fn(EvalError) -> EngineError {
    move |e| match e {
        EvalError::Unbound(var) => EngineError::Unsafe { line, var },
        EvalError::Arithmetic(message) => EngineError::Arithmetic { line, message },
        EvalError::Interval => EngineError::Unsupported { line, message: "interval in a body literal".into() },
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
struct RawLits {
    pos: Vec<GroundAtom>,
    neg: Vec<GroundAtom>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct RawElement {
    atom: GroundAtom,
    negated: bool,
    conds: Vec<RawLits>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct RawAgg {
    negated: bool,
    elements: Vec<RawElement>,
    bounds: Bounds,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum RawHead {
    Atom(GroundAtom),
    Choice(Vec<(GroundAtom, RawLits)>),
    Falsum,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct RawRule {
    head: RawHead,
    body: RawLits,
    aggs: Vec<RawAgg>,
    line: usize,
}

fn ground_cond(cond: &[Condition], s: &Subst, line: usize) -> Result<RawLits, EngineError> {
    let mut out = RawLits::default();
    for c in cond {
        if let Condition::Lit(l) = c {
            let g = l.atom.eval_with(&|v| lookup(s, v)).map_err(err(line))?;
            if l.is_negative() {
                out.neg.push(g);
            } else {
                out.pos.push(g);
            }
        }
    }
    Ok(out)
}

fn ground_aggregate(dom: &Domain, sign: Sign, agg: &Aggregate, s: &Subst, line: usize) -> Result<RawAgg, EngineError> {
    let mut elements: Vec<RawElement> = Vec::new();
    for e in &agg.elements {
        let mut items = Vec::new();
        if !e.literal.is_negative() {
            items.push(Item::Pos(&e.literal.atom));
        }
        items.extend(cond_items(&e.condition));
        for local in dom.substitutions(&items, s).map_err(err(line))? {
            let atom = e.literal.atom.eval_with(&|v| lookup(&local, v)).map_err(err(line))?;
            let cond = ground_cond(&e.condition, &local, line)?;
            let negated = e.literal.is_negative();
            match elements.iter_mut().find(|x| x.atom == atom && x.negated == negated) {
                Some(x) => {
                    if !x.conds.contains(&cond) {
                        x.conds.push(cond)
                    }
                }
                None => elements.push(RawElement { atom, negated, conds: vec![cond] }),
            }
        }
    }
    let mut bounds = agg.bounds.clone();
    for t in bounds.terms_mut() {
        *t = match eval(t, s).map_err(err(line))? {
            Value::Int(v) => Term::Int(v),
            other => return Err(EngineError::Arithmetic { line, message: format!("non-integer bound {other}") }),
        };
    }
    Ok(RawAgg { negated: sign == Sign::Negative, elements, bounds })
}

/// Derives every possibly true atom, ignoring negation.
fn saturate(rules: &[Rule], dom: &mut Domain) -> Result<(), EngineError> {
    loop {
        let mut changed = false;
        for r in rules {
            if matches!(r.head, Head::Falsum) {
                continue;
            }
            let items = body_items(r);
            let mut new = Vec::new();
            for s in dom.substitutions(&items, &Vec::new()).map_err(err(r.line))? {
                match &r.head {
                    Head::Atom(a) => new.extend(expand(a, &s).map_err(err(r.line))?),
                    Head::Choice(c) => {
                        for e in &c.elements {
                            for local in dom.substitutions(&cond_items(&e.condition), &s).map_err(err(r.line))? {
                                new.extend(expand(&e.literal.atom, &local).map_err(err(r.line))?);
                            }
                        }
                    }
                    Head::Falsum => {}
                }
            }
            for a in new {
                changed |= dom.insert(a);
            }
            if dom.size > MAX_DOMAIN {
                return Err(EngineError::TooLarge(format!("more than {MAX_DOMAIN} ground atoms")));
            }
        }
        if !changed {
            return Ok(());
        }
    }
}

/// With `keep_ground`, rules without variables are kept even when their
/// positive body is not derivable.
fn instantiate(rules: &[Rule], dom: &Domain, keep_ground: bool) -> Result<Vec<RawRule>, EngineError> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for r in rules {
        let line = r.line;
        let mut items = body_items(r);
        if keep_ground && r.is_ground() {
            items.retain(|i| matches!(i, Item::Cmp(_)));
        }
        for s in dom.substitutions(&items, &Vec::new()).map_err(err(line))? {
            let mut body = RawLits::default();
            let mut aggs = Vec::new();
            for b in &r.body {
                match b {
                    BodyElem::Lit(l) => {
                        let g = l.atom.eval_with(&|v| lookup(&s, v)).map_err(err(line))?;
                        let side = if l.is_negative() { &mut body.neg } else { &mut body.pos };
                        if !side.contains(&g) {
                            side.push(g);
                        }
                    }
                    BodyElem::Cmp(_) => {}
                    BodyElem::Agg { sign, aggregate } => aggs.push(ground_aggregate(dom, *sign, aggregate, &s, line)?),
                }
            }
            let heads = match &r.head {
                Head::Atom(a) => expand(a, &s).map_err(err(line))?.into_iter().map(RawHead::Atom).collect(),
                Head::Falsum => vec![RawHead::Falsum],
                Head::Choice(c) => {
                    let mut elems = Vec::new();
                    for e in &c.elements {
                        for local in dom.substitutions(&cond_items(&e.condition), &s).map_err(err(line))? {
                            let cond = ground_cond(&e.condition, &local, line)?;
                            for atom in expand(&e.literal.atom, &local).map_err(err(line))? {
                                elems.push((atom, cond.clone()));
                            }
                        }
                    }
                    vec![RawHead::Choice(elems)]
                }
            };
            for head in heads {
                let raw = RawRule { head, body: body.clone(), aggs: aggs.clone(), line };
                if seen.insert((raw.head.clone(), raw.body.clone(), raw.aggs.clone())) {
                    out.push(raw);
                }
            }
        }
    }
    Ok(out)
}

struct RawWeight {
    weight: i64,
    tuple: Vec<Value>,
    cond: RawLits,
}

fn ground_minimize(elems: &[WeightElement], dom: &Domain, out: &mut Vec<RawWeight>) -> Result<(), EngineError> {
    for e in elems {
        let items = cond_items(&e.condition);
        let bound = closure(&items, BTreeSet::new());
        let mut vars = condition_vars(&e.condition);
        e.terms.iter().for_each(|t| t.collect_vars(&mut vars));
        require(vars, &bound, 0)?;
        for s in dom.substitutions(&items, &Vec::new()).map_err(err(0))? {
            let cond = ground_cond(&e.condition, &s, 0)?;
            let (weight, tuple) = if e.implicit {
                let tuple =
                    cond.pos.iter().chain(&cond.neg).map(|a| Value::Func(a.pred.clone(), a.args.clone())).collect();
                (1, tuple)
            } else {
                let tuple: Vec<Value> =
                    e.terms.iter().map(|t| eval(t, &s)).collect::<Result<_, _>>().map_err(err(0))?;
                let w = tuple.first().and_then(Value::as_int).ok_or_else(|| EngineError::Arithmetic {
                    line: 0,
                    message: format!("non-integer weight in `{e}`"),
                })?;
                (w, tuple)
            };
            out.push(RawWeight { weight, tuple, cond });
        }
    }
    Ok(())
}

/// Atoms derivable from facts by rules without effective negation.
fn certain_atoms(raw: &[RawRule], dom: &Domain) -> HashSet<GroundAtom> {
    let definite: Vec<&RawRule> = raw
        .iter()
        .filter(|r| {
            matches!(r.head, RawHead::Atom(_)) && r.aggs.is_empty() && r.body.neg.iter().all(|a| !dom.contains(a))
        })
        .collect();
    let mut certain = HashSet::new();
    loop {
        let mut changed = false;
        for r in &definite {
            let RawHead::Atom(h) = &r.head else { continue };
            if !certain.contains(h) && r.body.pos.iter().all(|a| certain.contains(a)) {
                certain.insert(h.clone());
                changed = true;
            }
        }
        if !changed {
            return certain;
        }
    }
}

struct Builder<'a> {
    table: AtomTable,
    simplify: bool,
    certain: &'a HashSet<GroundAtom>,
    dom: &'a Domain,
}

impl Builder<'_> {
    /// `None` when the conjunction can never hold.
    fn conj(&mut self, l: &RawLits) -> Option<Conj> {
        let mut c = Conj::default();
        if self.simplify {
            if l.pos.iter().any(|a| !self.dom.contains(a)) || l.neg.iter().any(|a| self.certain.contains(a)) {
                return None;
            }
            for a in &l.pos {
                if !self.certain.contains(a) {
                    c.pos.push(self.table.intern(a.clone()));
                }
            }
            for a in &l.neg {
                if self.dom.contains(a) {
                    c.neg.push(self.table.intern(a.clone()));
                }
            }
        } else {
            c.pos = l.pos.iter().map(|a| self.table.intern(a.clone())).collect();
            c.neg = l.neg.iter().map(|a| self.table.intern(a.clone())).collect();
        }
        c.pos.dedup();
        c.neg.dedup();
        Some(c)
    }

    fn aggregate(&mut self, a: &RawAgg) -> GroundAggregate {
        let mut elements = Vec::new();
        for e in &a.elements {
            if self.simplify && !e.negated && !self.dom.contains(&e.atom) {
                continue;
            }
            let atom = self.table.intern(e.atom.clone());
            let conditions: Vec<Conj> = e.conds.iter().filter_map(|c| self.conj(c)).collect();
            if !conditions.is_empty() {
                elements.push(GroundElement { atom, negated: e.negated, conditions });
            }
        }
        GroundAggregate { negated: a.negated, elements, bounds: a.bounds.clone() }
    }
}

/// Instantiates a program over the atoms derivable from its facts.
pub fn ground(p: &Program) -> Result<GroundProgram, EngineError> {
    ground_with(p, GroundOptions::default())
}

pub fn ground_with(p: &Program, opts: GroundOptions) -> Result<GroundProgram, EngineError> {
    let mut p = eliminate_aggregate_heads(p)?;
    for r in &p.rules {
        check_safety(r)?;
        for b in &r.body {
            if let BodyElem::Agg { aggregate, .. } = b {
                if aggregate.function != AggregateFunction::Count {
                    return Err(EngineError::Unsupported {
                        line: r.line,
                        message: format!("`{}` aggregate", aggregate.function.keyword()),
                    });
                }
                if !matches!(r.head, Head::Falsum) {
                    return Err(EngineError::Unsupported {
                        line: r.line,
                        message: "aggregate outside an integrity constraint".into(),
                    });
                }
            }
        }
    }
    for r in &mut p.rules {
        name_anonymous(r);
    }
    let mut dom = Domain::default();
    saturate(&p.rules, &mut dom)?;
    let raw = instantiate(&p.rules, &dom, !opts.simplify)?;
    let mut weights = Vec::new();
    let mut optimize = false;
    let mut show: Option<BTreeSet<Pred>> = None;
    for d in &p.directives {
        match d {
            Directive::Minimize(elems) => {
                optimize = true;
                ground_minimize(elems, &dom, &mut weights)?;
            }
            Directive::Show(pred) => {
                show.get_or_insert_with(BTreeSet::new).insert(pred.clone());
            }
            Directive::Const(..) => {}
        }
    }

    let certain = if opts.simplify { certain_atoms(&raw, &dom) } else { HashSet::new() };
    let mut b = Builder { table: AtomTable::new(), simplify: opts.simplify, certain: &certain, dom: &dom };
    let mut g = GroundProgram { optimize, show, ..Default::default() };
    let mut is_fact = HashSet::new();
    let mut seen_choices = HashSet::new();
    for r in &raw {
        if let RawHead::Atom(h) = &r.head {
            if certain.contains(h) || (!opts.simplify && r.body == RawLits::default() && r.aggs.is_empty()) {
                let id = b.table.intern(h.clone());
                if is_fact.insert(id) {
                    g.facts.push(id);
                }
            }
        }
    }
    for r in &raw {
        let Some(body) = b.conj(&r.body) else {
            continue;
        };
        match &r.head {
            RawHead::Atom(h) => {
                if certain.contains(h) || (!opts.simplify && r.body == RawLits::default()) {
                    continue;
                }
                let head = b.table.intern(h.clone());
                g.rules.push(GroundRule { head, pos: body.pos, neg: body.neg, line: r.line });
            }
            RawHead::Choice(elems) => {
                for (atom, cond) in elems {
                    if certain.contains(atom) {
                        continue;
                    }
                    let Some(c) = b.conj(cond) else { continue };
                    let atom = b.table.intern(atom.clone());
                    let mut pos = body.pos.clone();
                    let mut neg = body.neg.clone();
                    pos.extend(c.pos.into_iter().filter(|x| !body.pos.contains(x)));
                    neg.extend(c.neg.into_iter().filter(|x| !body.neg.contains(x)));
                    let ch = GroundChoice { atom, pos, neg, line: r.line };
                    if seen_choices.insert(ch.clone()) {
                        g.choices.push(ch);
                    }
                }
            }
            RawHead::Falsum => {
                let aggregates = r.aggs.iter().map(|a| b.aggregate(a)).collect();
                g.constraints.push(GroundConstraint { pos: body.pos, neg: body.neg, aggregates, line: r.line });
            }
        }
    }
    let mut by_tuple: Vec<GroundWeight> = Vec::new();
    let mut slot: HashMap<Vec<Value>, usize> = HashMap::new();
    for w in weights {
        let Some(c) = b.conj(&w.cond) else { continue };
        match slot.get(&w.tuple) {
            Some(&i) => {
                if !by_tuple[i].conditions.contains(&c) {
                    by_tuple[i].conditions.push(c)
                }
            }
            None => {
                slot.insert(w.tuple.clone(), by_tuple.len());
                by_tuple.push(GroundWeight { weight: w.weight, tuple: w.tuple, conditions: vec![c] });
            }
        }
    }
    g.minimize = by_tuple;
    g.table = b.table;
    Ok(g)
}
