//! Rules, programs and directives.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use super::term::{write_args, Atom, Pred, Term};
use super::SyntaxError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub sign: Sign,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { sign: Sign::Positive, atom }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { sign: Sign::Negative, atom }
    }

    pub fn is_negative(&self) -> bool {
        self.sign == Sign::Negative
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_negative() {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl RelOp {
    pub fn symbol(self) -> &'static str {
        match self {
            RelOp::Eq => "=",
            RelOp::Ne => "!=",
            RelOp::Lt => "<",
            RelOp::Le => "<=",
            RelOp::Gt => ">",
            RelOp::Ge => ">=",
        }
    }

    pub fn holds<T: Ord>(self, a: &T, b: &T) -> bool {
        match self {
            RelOp::Eq => a == b,
            RelOp::Ne => a != b,
            RelOp::Lt => a < b,
            RelOp::Le => a <= b,
            RelOp::Gt => a > b,
            RelOp::Ge => a >= b,
        }
    }

    /// The operator with its operands swapped: `a op b` iff `b op.flip() a`.
    pub fn flip(self) -> RelOp {
        match self {
            RelOp::Lt => RelOp::Gt,
            RelOp::Le => RelOp::Ge,
            RelOp::Gt => RelOp::Lt,
            RelOp::Ge => RelOp::Le,
            other => other,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Comparison {
    pub op: RelOp,
    pub lhs: Term,
    pub rhs: Term,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.lhs, self.op.symbol(), self.rhs)
    }
}

/// Condition items of choice elements, aggregate elements and minimize
/// elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    Lit(Literal),
    Cmp(Comparison),
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Lit(l) => write!(f, "{l}"),
            Condition::Cmp(c) => write!(f, "{c}"),
        }
    }
}

fn write_conditions(f: &mut fmt::Formatter<'_>, cond: &[Condition]) -> fmt::Result {
    for (i, c) in cond.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

/// An element `l : c1, ..., ck` of a choice or aggregate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    pub literal: Literal,
    pub condition: Vec<Condition>,
}

impl Element {
    pub fn new(literal: Literal, condition: Vec<Condition>) -> Self {
        Element { literal, condition }
    }

    pub fn atom(atom: Atom) -> Self {
        Element { literal: Literal::pos(atom), condition: Vec::new() }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.literal)?;
        if !self.condition.is_empty() {
            f.write_str(" : ")?;
            write_conditions(f, &self.condition)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AggregateFunction {
    Count,
    Sum,
    Min,
    Max,
}

impl AggregateFunction {
    pub fn keyword(self) -> &'static str {
        match self {
            AggregateFunction::Count => "#count",
            AggregateFunction::Sum => "#sum",
            AggregateFunction::Min => "#min",
            AggregateFunction::Max => "#max",
        }
    }
}

/// Guards of a set expression: `left_term left_op {..} right_op right_term`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bounds {
    /// `(k, op)` meaning `k op value`.
    pub left: Option<(Term, RelOp)>,
    /// `(op, k)` meaning `value op k`.
    pub right: Option<(RelOp, Term)>,
}

impl Bounds {
    pub fn is_empty(&self) -> bool {
        self.left.is_none() && self.right.is_none()
    }

    pub fn terms_mut(&mut self) -> impl Iterator<Item = &mut Term> {
        self.left.iter_mut().map(|(t, _)| t).chain(self.right.iter_mut().map(|(_, t)| t))
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.left.iter().map(|(t, _)| t).chain(self.right.iter().map(|(_, t)| t))
    }

    /// Whether the guards hold for `value` once the bound terms are integers.
    pub fn admits(&self, value: i64) -> Option<bool> {
        let mut ok = true;
        if let Some((t, op)) = &self.left {
            ok &= op.holds(&t.eval_int()?, &value);
        }
        if let Some((op, t)) = &self.right {
            ok &= op.holds(&value, &t.eval_int()?);
        }
        Some(ok)
    }

    /// True when every count in `0..=max` satisfies the guards.
    pub fn is_vacuous(&self, max: usize) -> bool {
        (0..=max as i64).all(|v| self.admits(v) == Some(true))
    }
}

fn write_left(f: &mut fmt::Formatter<'_>, b: &Bounds) -> fmt::Result {
    if let Some((t, op)) = &b.left {
        if *op == RelOp::Le {
            write!(f, "{t} ")?;
        } else {
            write!(f, "{t} {} ", op.symbol())?;
        }
    }
    Ok(())
}

fn write_right(f: &mut fmt::Formatter<'_>, b: &Bounds) -> fmt::Result {
    if let Some((op, t)) = &b.right {
        if *op == RelOp::Le {
            write!(f, " {t}")?;
        } else {
            write!(f, " {} {t}", op.symbol())?;
        }
    }
    Ok(())
}

fn write_elements(f: &mut fmt::Formatter<'_>, elements: &[Element]) -> fmt::Result {
    f.write_str("{ ")?;
    for (i, e) in elements.iter().enumerate() {
        if i > 0 {
            f.write_str("; ")?;
        }
        write!(f, "{e}")?;
    }
    f.write_str(" }")
}

/// A counting aggregate in a rule body.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Aggregate {
    pub function: AggregateFunction,
    /// Whether the aggregate was written with an explicit `#count` keyword.
    pub keyword: bool,
    pub elements: Vec<Element>,
    pub bounds: Bounds,
}

impl fmt::Display for Aggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_left(f, &self.bounds)?;
        if self.keyword || self.function != AggregateFunction::Count {
            f.write_str(self.function.keyword())?;
        }
        write_elements(f, &self.elements)?;
        write_right(f, &self.bounds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BodyElem {
    Lit(Literal),
    Cmp(Comparison),
    Agg { sign: Sign, aggregate: Aggregate },
}

impl BodyElem {
    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            BodyElem::Lit(l) => Some(l),
            _ => None,
        }
    }
}

impl fmt::Display for BodyElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyElem::Lit(l) => write!(f, "{l}"),
            BodyElem::Cmp(c) => write!(f, "{c}"),
            BodyElem::Agg { sign, aggregate } => {
                if *sign == Sign::Negative {
                    f.write_str("not ")?;
                }
                write!(f, "{aggregate}")
            }
        }
    }
}

/// A choice `L { e1; ...; en } U`; with bounds it is an aggregate head.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Choice {
    pub elements: Vec<Element>,
    pub bounds: Bounds,
    /// Head written as `#count{...}` rather than a brace set.
    pub function: Option<AggregateFunction>,
}

impl Choice {
    pub fn plain(elements: Vec<Element>) -> Self {
        Choice { elements, bounds: Bounds::default(), function: None }
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.elements.iter().map(|e| &e.literal.atom)
    }
}

impl fmt::Display for Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_left(f, &self.bounds)?;
        if let Some(func) = self.function {
            f.write_str(func.keyword())?;
        }
        write_elements(f, &self.elements)?;
        write_right(f, &self.bounds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Head {
    Atom(Atom),
    Choice(Choice),
    /// Integrity constraint: the head is ⊥.
    Falsum,
}

/// Structural classification of a rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Fact,
    Definite,
    Normal,
    Constraint,
    Choice,
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleKind::Fact => "fact",
            RuleKind::Definite => "definite",
            RuleKind::Normal => "normal",
            RuleKind::Constraint => "constraint",
            RuleKind::Choice => "choice",
        })
    }
}

/// A rule `head :- body.`
///
/// `line` is the source line the rule starts on and `label` an optional
/// `%@ term` annotation; neither takes part in equality.
#[derive(Clone, Debug)]
pub struct Rule {
    pub head: Head,
    pub body: Vec<BodyElem>,
    pub line: usize,
    pub label: Option<Term>,
}

impl PartialEq for Rule {
    fn eq(&self, other: &Self) -> bool {
        self.head == other.head && self.body == other.body && self.label == other.label
    }
}

impl Eq for Rule {}

impl Hash for Rule {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.head.hash(state);
        self.body.hash(state);
        self.label.hash(state);
    }
}

impl Rule {
    pub fn new(head: Head, body: Vec<BodyElem>) -> Self {
        Rule { head, body, line: 0, label: None }
    }

    pub fn fact(atom: Atom) -> Self {
        Rule::new(Head::Atom(atom), Vec::new())
    }

    pub fn normal(head: Atom, body: Vec<Literal>) -> Self {
        Rule::new(Head::Atom(head), body.into_iter().map(BodyElem::Lit).collect())
    }

    pub fn constraint(body: Vec<BodyElem>) -> Self {
        Rule::new(Head::Falsum, body)
    }

    pub fn at_line(mut self, line: usize) -> Self {
        self.line = line;
        self
    }

    pub fn kind(&self) -> RuleKind {
        match &self.head {
            Head::Falsum => RuleKind::Constraint,
            Head::Choice(_) => RuleKind::Choice,
            Head::Atom(_) => {
                if self.body.is_empty() {
                    RuleKind::Fact
                } else if self
                    .body
                    .iter()
                    .all(|b| matches!(b, BodyElem::Lit(l) if !l.is_negative()) || matches!(b, BodyElem::Cmp(_)))
                {
                    RuleKind::Definite
                } else {
                    RuleKind::Normal
                }
            }
        }
    }

    /// Whether the rule is normal in the broad sense (single atom head),
    /// which includes facts and definite rules.
    pub fn is_normal(&self) -> bool {
        matches!(self.head, Head::Atom(_))
    }

    pub fn head_atoms(&self) -> Vec<&Atom> {
        match &self.head {
            Head::Atom(a) => vec![a],
            Head::Choice(c) => c.atoms().collect(),
            Head::Falsum => Vec::new(),
        }
    }

    /// Atoms of body literals, with their sign (aggregates excluded).
    pub fn body_literals(&self) -> impl Iterator<Item = &Literal> {
        self.body.iter().filter_map(BodyElem::as_literal)
    }

    pub fn has_aggregate(&self) -> bool {
        self.body.iter().any(|b| matches!(b, BodyElem::Agg { .. }))
    }

    pub fn is_ground(&self) -> bool {
        let mut vars = Vec::new();
        self.collect_vars(&mut vars);
        vars.is_empty() && !self.has_anon()
    }

    fn has_anon(&self) -> bool {
        let atom_anon = |a: &Atom| a.has_anon();
        let cond_anon = |c: &Condition| match c {
            Condition::Lit(l) => atom_anon(&l.atom),
            Condition::Cmp(c) => c.lhs.has_anon() || c.rhs.has_anon(),
        };
        let elem_anon = |e: &Element| atom_anon(&e.literal.atom) || e.condition.iter().any(cond_anon);
        let head = match &self.head {
            Head::Atom(a) => atom_anon(a),
            Head::Choice(c) => c.elements.iter().any(elem_anon),
            Head::Falsum => false,
        };
        head || self.body.iter().any(|b| match b {
            BodyElem::Lit(l) => atom_anon(&l.atom),
            BodyElem::Cmp(c) => c.lhs.has_anon() || c.rhs.has_anon(),
            BodyElem::Agg { aggregate, .. } => aggregate.elements.iter().any(elem_anon),
        })
    }

    /// All variables of the rule in order of first occurrence.
    pub fn collect_vars(&self, out: &mut Vec<String>) {
        fn cond_vars(c: &Condition, out: &mut Vec<String>) {
            match c {
                Condition::Lit(l) => l.atom.collect_vars(out),
                Condition::Cmp(c) => {
                    c.lhs.collect_vars(out);
                    c.rhs.collect_vars(out);
                }
            }
        }
        fn elem_vars(e: &Element, out: &mut Vec<String>) {
            e.literal.atom.collect_vars(out);
            e.condition.iter().for_each(|c| cond_vars(c, out));
        }
        match &self.head {
            Head::Atom(a) => a.collect_vars(out),
            Head::Choice(c) => {
                c.elements.iter().for_each(|e| elem_vars(e, out));
                c.bounds.terms().for_each(|t| t.collect_vars(out));
            }
            Head::Falsum => {}
        }
        for b in &self.body {
            match b {
                BodyElem::Lit(l) => l.atom.collect_vars(out),
                BodyElem::Cmp(c) => {
                    c.lhs.collect_vars(out);
                    c.rhs.collect_vars(out);
                }
                BodyElem::Agg { aggregate, .. } => {
                    aggregate.elements.iter().for_each(|e| elem_vars(e, out));
                    aggregate.bounds.terms().for_each(|t| t.collect_vars(out));
                }
            }
        }
    }

    /// Visits every term of the rule, label included.
    pub fn for_each_term_mut(&mut self, f: &mut dyn FnMut(&mut Term)) {
        fn atom(a: &mut Atom, f: &mut dyn FnMut(&mut Term)) {
            a.args.iter_mut().for_each(&mut *f);
        }
        fn cond(c: &mut Condition, f: &mut dyn FnMut(&mut Term)) {
            match c {
                Condition::Lit(l) => atom(&mut l.atom, f),
                Condition::Cmp(c) => {
                    f(&mut c.lhs);
                    f(&mut c.rhs);
                }
            }
        }
        fn elem(e: &mut Element, f: &mut dyn FnMut(&mut Term)) {
            atom(&mut e.literal.atom, f);
            e.condition.iter_mut().for_each(|c| cond(c, f));
        }
        match &mut self.head {
            Head::Atom(a) => atom(a, f),
            Head::Choice(c) => {
                c.elements.iter_mut().for_each(|e| elem(e, f));
                c.bounds.terms_mut().for_each(&mut *f);
            }
            Head::Falsum => {}
        }
        for b in &mut self.body {
            match b {
                BodyElem::Lit(l) => atom(&mut l.atom, f),
                BodyElem::Cmp(c) => {
                    f(&mut c.lhs);
                    f(&mut c.rhs);
                }
                BodyElem::Agg { aggregate, .. } => {
                    aggregate.elements.iter_mut().for_each(|e| elem(e, f));
                    aggregate.bounds.terms_mut().for_each(&mut *f);
                }
            }
        }
        if let Some(l) = &mut self.label {
            f(l);
        }
    }

    /// Variables occurring outside of aggregates and choice elements.
    pub fn global_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Head::Atom(a) = &self.head {
            a.collect_vars(&mut out);
        }
        if let Head::Choice(c) = &self.head {
            c.bounds.terms().for_each(|t| t.collect_vars(&mut out));
        }
        for b in &self.body {
            match b {
                BodyElem::Lit(l) => l.atom.collect_vars(&mut out),
                BodyElem::Cmp(c) => {
                    c.lhs.collect_vars(&mut out);
                    c.rhs.collect_vars(&mut out);
                }
                BodyElem::Agg { aggregate, .. } => aggregate.bounds.terms().for_each(|t| t.collect_vars(&mut out)),
            }
        }
        out
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.head {
            Head::Atom(a) => write!(f, "{a}")?,
            Head::Choice(c) => write!(f, "{c}")?,
            Head::Falsum => {}
        }
        if !self.body.is_empty() {
            if matches!(self.head, Head::Falsum) {
                f.write_str(":- ")?;
            } else {
                f.write_str(" :- ")?;
            }
            for (i, b) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{b}")?;
            }
        } else if matches!(self.head, Head::Falsum) {
            f.write_str(":-")?;
        }
        f.write_str(".")?;
        if let Some(label) = &self.label {
            write!(f, " %@ {label}")?;
        }
        Ok(())
    }
}

/// An element `w,t1,...,tn : condition` of a minimize directive.
///
/// The bare form `{ ic(I) }` is stored with the condition literals as the
/// tuple and an implicit weight of 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightElement {
    pub terms: Vec<Term>,
    pub condition: Vec<Condition>,
    /// `true` for the bare literal form.
    pub implicit: bool,
}

impl WeightElement {
    pub fn implicit(condition: Vec<Condition>) -> Self {
        WeightElement { terms: Vec::new(), condition, implicit: true }
    }
}

impl fmt::Display for WeightElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.implicit {
            return write_conditions(f, &self.condition);
        }
        write_args(f, &self.terms)?;
        if !self.condition.is_empty() {
            f.write_str(" : ")?;
            write_conditions(f, &self.condition)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Directive {
    Minimize(Vec<WeightElement>),
    Const(String, i64),
    Show(Pred),
}

impl fmt::Display for Directive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Directive::Minimize(elems) => {
                f.write_str("#minimize { ")?;
                for (i, e) in elems.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str(" }.")
            }
            Directive::Const(name, v) => write!(f, "#const {name} = {v}."),
            Directive::Show(p) => write!(f, "#show {p}."),
        }
    }
}

/// A logic program: rules in source order plus directives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
    pub directives: Vec<Directive>,
    pub signature: BTreeMap<String, usize>,
    pub constants: BTreeSet<Term>,
}

impl Program {
    /// Builds a program and its signature; fails on an arity clash.
    pub fn new(rules: Vec<Rule>, directives: Vec<Directive>) -> Result<Self, SyntaxError> {
        let mut signature = BTreeMap::new();
        let mut constants = BTreeSet::new();
        for rule in &rules {
            for atom in rule_atoms(rule) {
                register(&mut signature, atom, rule.line)?;
                for t in &atom.args {
                    collect_constants(t, &mut constants);
                }
            }
        }
        for d in &directives {
            if let Directive::Minimize(elems) = d {
                for e in elems {
                    for c in &e.condition {
                        if let Condition::Lit(l) = c {
                            register(&mut signature, &l.atom, 0)?;
                        }
                    }
                }
            }
        }
        Ok(Program { rules, directives, signature, constants })
    }

    pub fn empty() -> Self {
        Program { rules: Vec::new(), directives: Vec::new(), signature: BTreeMap::new(), constants: BTreeSet::new() }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn predicates(&self) -> BTreeSet<Pred> {
        self.signature.iter().map(|(n, a)| Pred::new(n.clone(), *a)).collect()
    }

    pub fn is_ground(&self) -> bool {
        self.rules.iter().all(Rule::is_ground)
    }

    pub fn minimize(&self) -> impl Iterator<Item = &Vec<WeightElement>> {
        self.directives.iter().filter_map(|d| match d {
            Directive::Minimize(e) => Some(e),
            _ => None,
        })
    }

    /// All atoms of rule heads, bodies and aggregate elements.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.rules.iter().flat_map(rule_atoms).cloned().collect()
    }
}

fn register(sig: &mut BTreeMap<String, usize>, atom: &Atom, line: usize) -> Result<(), SyntaxError> {
    match sig.get(&atom.pred) {
        Some(&arity) if arity != atom.args.len() => {
            Err(SyntaxError::ArityClash { predicate: atom.pred.clone(), first: arity, second: atom.args.len(), line })
        }
        _ => {
            sig.insert(atom.pred.clone(), atom.args.len());
            Ok(())
        }
    }
}

fn collect_constants(t: &Term, out: &mut BTreeSet<Term>) {
    match t {
        Term::Int(_) | Term::Sym(_) => {
            out.insert(t.clone());
        }
        Term::Func(_, args) => args.iter().for_each(|a| collect_constants(a, out)),
        Term::BinOp(_, l, r) | Term::Interval(l, r) => {
            collect_constants(l, out);
            collect_constants(r, out);
        }
        Term::Neg(t) => collect_constants(t, out),
        Term::Var(_) | Term::Anon => {}
    }
}

/// Every atom mentioned by a rule, including those in conditions.
pub fn rule_atoms(rule: &Rule) -> Vec<&Atom> {
    let mut out = Vec::new();
    fn push_elem<'a>(e: &'a Element, out: &mut Vec<&'a Atom>) {
        out.push(&e.literal.atom);
        for c in &e.condition {
            if let Condition::Lit(l) = c {
                out.push(&l.atom);
            }
        }
    }
    match &rule.head {
        Head::Atom(a) => out.push(a),
        Head::Choice(c) => c.elements.iter().for_each(|e| push_elem(e, &mut out)),
        Head::Falsum => {}
    }
    for b in &rule.body {
        match b {
            BodyElem::Lit(l) => out.push(&l.atom),
            BodyElem::Cmp(_) => {}
            BodyElem::Agg { aggregate, .. } => aggregate.elements.iter().for_each(|e| push_elem(e, &mut out)),
        }
    }
    out
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.directives {
            if matches!(d, Directive::Const(..)) {
                writeln!(f, "{d}")?;
            }
        }
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        for d in &self.directives {
            if !matches!(d, Directive::Const(..)) {
                writeln!(f, "{d}")?;
            }
        }
        Ok(())
    }
}
