//! Recursive-descent parser for programs, formulas and terms.

use std::collections::BTreeMap;

use super::ast::*;
use super::formula::Formula;
use super::lexer::{tokenize, Spanned, Tok};
use super::term::{Atom, BinOp, Pred, Term};
use super::SyntaxError;

/// Knobs for [`parse_program_with`].
#[derive(Clone, Debug, Default)]
pub struct ParseOptions {
    /// Constant definitions that take precedence over `#const` directives.
    pub consts: BTreeMap<String, i64>,
}

/// A parsed program together with non-fatal warnings.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub program: Program,
    pub warnings: Vec<String>,
}

pub fn parse_program(text: &str) -> Result<Program, SyntaxError> {
    parse_program_with(text, &ParseOptions::default()).map(|p| p.program)
}

pub fn parse_program_with(text: &str, options: &ParseOptions) -> Result<Parsed, SyntaxError> {
    let mut p = Parser::new(tokenize(text)?);
    let mut rules = Vec::new();
    let mut directives = Vec::new();
    while p.peek() != &Tok::Eof {
        match p.statement()? {
            Statement::Rule(r) => rules.push(r),
            Statement::Directive(d) => directives.push(d),
        }
    }

    let mut consts: BTreeMap<String, i64> = BTreeMap::new();
    for d in &directives {
        if let Directive::Const(name, v) = d {
            consts.entry(name.clone()).or_insert(*v);
        }
    }
    for (k, v) in &options.consts {
        consts.insert(k.clone(), *v);
    }
    for d in &mut directives {
        match d {
            Directive::Const(name, v) => *v = consts[name.as_str()],
            Directive::Minimize(elems) => {
                for e in elems {
                    for t in &mut e.terms {
                        t.substitute_consts(&|s| consts.get(s).copied());
                    }
                    for c in &mut e.condition {
                        substitute_condition(c, &consts);
                    }
                }
            }
            Directive::Show(_) => {}
        }
    }

    let mut warnings = Vec::new();
    let mut expanded = Vec::with_capacity(rules.len());
    for mut rule in rules {
        rule.for_each_term_mut(&mut |t| t.substitute_consts(&|s| consts.get(s).copied()));
        let is_fact = rule.body.is_empty() && matches!(rule.head, Head::Atom(_));
        match &rule.head {
            Head::Atom(a) if is_fact && a.args.iter().any(Term::has_interval) => {
                let facts = expand_fact(a, rule.line, &mut warnings)?;
                expanded.extend(facts.into_iter().map(|a| Rule::fact(a).at_line(rule.line)));
            }
            _ => expanded.push(rule),
        }
    }
    let program = Program::new(expanded, directives)?;
    Ok(Parsed { program, warnings })
}

fn substitute_condition(c: &mut Condition, consts: &BTreeMap<String, i64>) {
    let f = |s: &str| consts.get(s).copied();
    match c {
        Condition::Lit(l) => l.atom.args.iter_mut().for_each(|t| t.substitute_consts(&f)),
        Condition::Cmp(c) => {
            c.lhs.substitute_consts(&f);
            c.rhs.substitute_consts(&f);
        }
    }
}

/// Expands every interval of a term into the list of its values.
fn expand_term(t: &Term, line: usize) -> Result<Vec<Term>, SyntaxError> {
    Ok(match t {
        Term::Interval(l, u) => {
            let (lo, hi) = match (l.eval_int(), u.eval_int()) {
                (Some(lo), Some(hi)) => (lo, hi),
                _ => {
                    return Err(SyntaxError::Invalid {
                        line,
                        message: format!("interval bounds of `{t}` are not integers"),
                    })
                }
            };
            (lo..=hi).map(Term::Int).collect()
        }
        Term::Func(name, args) => cartesian(args, line)?.into_iter().map(|a| Term::Func(name.clone(), a)).collect(),
        Term::BinOp(op, l, r) => {
            let mut out = Vec::new();
            for a in expand_term(l, line)? {
                for b in expand_term(r, line)? {
                    out.push(Term::binop(*op, a.clone(), b));
                }
            }
            out
        }
        Term::Neg(inner) => expand_term(inner, line)?.into_iter().map(|x| Term::Neg(Box::new(x))).collect(),
        other => vec![other.clone()],
    })
}

fn cartesian(args: &[Term], line: usize) -> Result<Vec<Vec<Term>>, SyntaxError> {
    let mut acc: Vec<Vec<Term>> = vec![Vec::new()];
    for a in args {
        let vals = expand_term(a, line)?;
        let mut next = Vec::with_capacity(acc.len() * vals.len());
        for prefix in &acc {
            for v in &vals {
                let mut p = prefix.clone();
                p.push(v.clone());
                next.push(p);
            }
        }
        acc = next;
    }
    Ok(acc)
}

fn expand_fact(a: &Atom, line: usize, warnings: &mut Vec<String>) -> Result<Vec<Atom>, SyntaxError> {
    let combos = cartesian(&a.args, line)?;
    if combos.is_empty() {
        warnings.push(format!("line {line}: empty interval in fact `{a}`"));
    }
    Ok(combos
        .into_iter()
        .map(|args| {
            let args = args.into_iter().map(|t| t.eval_int().map(Term::Int).unwrap_or(t)).collect();
            Atom::new(a.pred.clone(), args)
        })
        .collect())
}

pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(tokenize(text)?);
    let f = p.formula()?;
    p.expect(Tok::Eof)?;
    Ok(f)
}

/// Parses a single term, such as a `%@` label or a `--const` value.
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(tokenize(text)?);
    let t = p.term()?;
    p.expect(Tok::Eof)?;
    Ok(t)
}

enum Statement {
    Rule(Rule),
    Directive(Directive),
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(raw: Vec<Spanned>) -> Self {
        // keep a label only when it trails a rule on the same line
        let mut toks: Vec<Spanned> = Vec::with_capacity(raw.len());
        for t in raw {
            if let Tok::Label(_) = t.tok {
                match toks.last() {
                    Some(prev) if prev.tok == Tok::Dot && prev.line == t.line => {}
                    _ => continue,
                }
            }
            toks.push(t);
        }
        Parser { toks, pos: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn line(&self) -> usize {
        self.toks[self.pos].line
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        let s = &self.toks[self.pos];
        SyntaxError::Parse { line: s.line, col: s.col, message: message.into() }
    }

    fn unexpected(&self, wanted: &str) -> SyntaxError {
        self.error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, t: Tok) -> Result<(), SyntaxError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.unexpected(&t.describe()))
        }
    }

    fn statement(&mut self) -> Result<Statement, SyntaxError> {
        let line = self.line();
        if let Tok::Hash(name) = self.peek().clone() {
            if !is_aggregate_keyword(&name) {
                return self.directive(&name).map(Statement::Directive);
            }
        }
        let head = if self.peek() == &Tok::If { Head::Falsum } else { self.head()? };
        let body = if self.eat(&Tok::If) { self.body()? } else { Vec::new() };
        self.expect(Tok::Dot)?;
        let label = match self.peek().clone() {
            Tok::Label(text) => {
                let label_line = self.line();
                self.bump();
                Some(parse_term(&text).map_err(|e| relocate(e, label_line))?)
            }
            _ => None,
        };
        Ok(Statement::Rule(Rule { head, body, line, label }))
    }

    fn directive(&mut self, name: &str) -> Result<Directive, SyntaxError> {
        match name {
            "const" => {
                self.bump();
                let id = match self.bump() {
                    Tok::Ident(s) => s,
                    _ => return Err(self.error("expected constant name after `#const`")),
                };
                self.expect(Tok::Eq)?;
                let t = self.term()?;
                let v = t.eval_int().ok_or_else(|| self.error(format!("`#const {id}` needs an integer value")))?;
                self.expect(Tok::Dot)?;
                Ok(Directive::Const(id, v))
            }
            "show" => {
                self.bump();
                let id = match self.bump() {
                    Tok::Ident(s) => s,
                    _ => return Err(self.error("expected predicate name after `#show`")),
                };
                self.expect(Tok::Slash)?;
                let arity = match self.bump() {
                    Tok::Int(v) if v >= 0 => v as usize,
                    _ => return Err(self.error("expected arity after `/`")),
                };
                self.expect(Tok::Dot)?;
                Ok(Directive::Show(Pred::new(id, arity)))
            }
            "minimize" => {
                self.bump();
                self.expect(Tok::LBrace)?;
                let mut elems = Vec::new();
                if self.peek() != &Tok::RBrace {
                    loop {
                        elems.push(self.weight_element()?);
                        if !self.eat(&Tok::Semi) {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace)?;
                self.expect(Tok::Dot)?;
                Ok(Directive::Minimize(elems))
            }
            other => Err(self.error(format!("unsupported directive `#{other}`"))),
        }
    }

    fn weight_element(&mut self) -> Result<WeightElement, SyntaxError> {
        if self.peek() == &Tok::Not {
            return Ok(WeightElement::implicit(self.conditions()?));
        }
        let start = self.pos;
        let mut terms = vec![self.term()?];
        while self.eat(&Tok::Comma) {
            if self.peek() == &Tok::Not {
                break;
            }
            terms.push(self.term()?);
        }
        if self.eat(&Tok::Colon) {
            let condition = self.conditions()?;
            return Ok(WeightElement { terms, condition, implicit: false });
        }
        if terms.iter().all(|t| matches!(t, Term::Sym(_) | Term::Func(..))) {
            self.pos = start;
            return Ok(WeightElement::implicit(self.conditions()?));
        }
        Ok(WeightElement { terms, condition: Vec::new(), implicit: false })
    }

    fn head(&mut self) -> Result<Head, SyntaxError> {
        if self.starts_set() {
            return self.choice(Bounds::default()).map(Head::Choice);
        }
        let t = self.term()?;
        if let Some(op) = self.relop() {
            if !self.starts_set() {
                return Err(self.unexpected("`{` after head bound"));
            }
            return self.choice(Bounds { left: Some((t, op)), right: None }).map(Head::Choice);
        }
        if self.starts_set() {
            return self.choice(Bounds { left: Some((t, RelOp::Le)), right: None }).map(Head::Choice);
        }
        self.term_to_atom(t).map(Head::Atom)
    }

    fn starts_set(&self) -> bool {
        match self.peek() {
            Tok::LBrace => true,
            Tok::Hash(n) => is_aggregate_keyword(n),
            _ => false,
        }
    }

    fn function_keyword(&mut self) -> Result<Option<AggregateFunction>, SyntaxError> {
        let f = match self.peek() {
            Tok::Hash(n) => match n.as_str() {
                "count" => AggregateFunction::Count,
                "sum" => AggregateFunction::Sum,
                "min" => AggregateFunction::Min,
                "max" => AggregateFunction::Max,
                _ => return Ok(None),
            },
            _ => return Ok(None),
        };
        self.bump();
        Ok(Some(f))
    }

    fn choice(&mut self, mut bounds: Bounds) -> Result<Choice, SyntaxError> {
        let function = self.function_keyword()?;
        self.expect(Tok::LBrace)?;
        let mut elements = Vec::new();
        if self.peek() != &Tok::RBrace {
            loop {
                let atom = self.atom()?;
                let condition = if self.eat(&Tok::Colon) { self.conditions()? } else { Vec::new() };
                elements.push(Element::new(Literal::pos(atom), condition));
                if !self.eat(&Tok::Semi) {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace)?;
        bounds.right = self.right_bound()?;
        Ok(Choice { elements, bounds, function })
    }

    fn right_bound(&mut self) -> Result<Option<(RelOp, Term)>, SyntaxError> {
        if let Some(op) = self.relop() {
            return Ok(Some((op, self.term()?)));
        }
        if matches!(self.peek(), Tok::Int(_) | Tok::Var(_) | Tok::Ident(_) | Tok::LParen | Tok::Minus) {
            return Ok(Some((RelOp::Le, self.term()?)));
        }
        Ok(None)
    }

    fn relop(&mut self) -> Option<RelOp> {
        let op = match self.peek() {
            Tok::Eq => RelOp::Eq,
            Tok::Ne => RelOp::Ne,
            Tok::Lt => RelOp::Lt,
            Tok::Le => RelOp::Le,
            Tok::Gt => RelOp::Gt,
            Tok::Ge => RelOp::Ge,
            _ => return None,
        };
        self.bump();
        Some(op)
    }

    fn body(&mut self) -> Result<Vec<BodyElem>, SyntaxError> {
        let mut out = vec![self.body_elem()?];
        while self.eat(&Tok::Comma) {
            out.push(self.body_elem()?);
        }
        Ok(out)
    }

    fn body_elem(&mut self) -> Result<BodyElem, SyntaxError> {
        let sign = if self.eat(&Tok::Not) { Sign::Negative } else { Sign::Positive };
        if self.starts_set() {
            let aggregate = self.aggregate(Bounds::default())?;
            return Ok(BodyElem::Agg { sign, aggregate });
        }
        let t = self.term()?;
        if let Some(op) = self.relop() {
            if self.starts_set() {
                let aggregate = self.aggregate(Bounds { left: Some((t, op)), right: None })?;
                return Ok(BodyElem::Agg { sign, aggregate });
            }
            let rhs = self.term()?;
            let op = if sign == Sign::Negative { complement(op) } else { op };
            return Ok(BodyElem::Cmp(Comparison { op, lhs: t, rhs }));
        }
        if self.starts_set() {
            let aggregate = self.aggregate(Bounds { left: Some((t, RelOp::Le)), right: None })?;
            return Ok(BodyElem::Agg { sign, aggregate });
        }
        let atom = self.term_to_atom(t)?;
        Ok(BodyElem::Lit(Literal { sign, atom }))
    }

    fn aggregate(&mut self, mut bounds: Bounds) -> Result<Aggregate, SyntaxError> {
        let function = self.function_keyword()?;
        self.expect(Tok::LBrace)?;
        let mut elements = Vec::new();
        if self.peek() != &Tok::RBrace {
            loop {
                let literal = self.literal()?;
                let condition = if self.eat(&Tok::Colon) { self.conditions()? } else { Vec::new() };
                elements.push(Element::new(literal, condition));
                if !self.eat(&Tok::Semi) {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace)?;
        bounds.right = self.right_bound()?;
        Ok(Aggregate {
            function: function.unwrap_or(AggregateFunction::Count),
            keyword: function.is_some(),
            elements,
            bounds,
        })
    }

    fn literal(&mut self) -> Result<Literal, SyntaxError> {
        let sign = if self.eat(&Tok::Not) { Sign::Negative } else { Sign::Positive };
        Ok(Literal { sign, atom: self.atom()? })
    }

    fn conditions(&mut self) -> Result<Vec<Condition>, SyntaxError> {
        let mut out = vec![self.condition()?];
        while self.peek() == &Tok::Comma {
            self.bump();
            out.push(self.condition()?);
        }
        Ok(out)
    }

    fn condition(&mut self) -> Result<Condition, SyntaxError> {
        let sign = if self.eat(&Tok::Not) { Sign::Negative } else { Sign::Positive };
        let t = self.term()?;
        if let Some(op) = self.relop() {
            let rhs = self.term()?;
            let op = if sign == Sign::Negative { complement(op) } else { op };
            return Ok(Condition::Cmp(Comparison { op, lhs: t, rhs }));
        }
        Ok(Condition::Lit(Literal { sign, atom: self.term_to_atom(t)? }))
    }

    fn atom(&mut self) -> Result<Atom, SyntaxError> {
        let t = self.term()?;
        self.term_to_atom(t)
    }

    fn term_to_atom(&self, t: Term) -> Result<Atom, SyntaxError> {
        match t {
            Term::Sym(name) => Ok(Atom::prop(name)),
            Term::Func(name, args) => Ok(Atom::new(name, args)),
            other => Err(self.error(format!("`{other}` is not an atom"))),
        }
    }

    pub(crate) fn term(&mut self) -> Result<Term, SyntaxError> {
        let lo = self.additive()?;
        if self.eat(&Tok::DotDot) {
            let hi = self.additive()?;
            return Ok(Term::Interval(Box::new(lo), Box::new(hi)));
        }
        Ok(lo)
    }

    fn additive(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(t),
            };
            self.bump();
            t = Term::binop(op, t, self.multiplicative()?);
        }
    }

    fn multiplicative(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(t),
            };
            self.bump();
            t = Term::binop(op, t, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Term, SyntaxError> {
        if self.eat(&Tok::Minus) {
            return Ok(match self.unary()? {
                Term::Int(v) => Term::Int(-v),
                t => Term::Neg(Box::new(t)),
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Term, SyntaxError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Term::Int(v))
            }
            Tok::Var(v) => {
                self.bump();
                Ok(Term::Var(v))
            }
            Tok::Anon => {
                self.bump();
                Ok(Term::Anon)
            }
            Tok::Ident(name) => {
                self.bump();
                if self.eat(&Tok::LParen) {
                    let mut args = vec![self.term()?];
                    while self.eat(&Tok::Comma) {
                        args.push(self.term()?);
                    }
                    self.expect(Tok::RParen)?;
                    Ok(Term::Func(name, args))
                } else {
                    Ok(Term::Sym(name))
                }
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let mut f = self.implication()?;
        while self.eat(&Tok::DArrow) {
            f = Formula::iff(f, self.implication()?);
        }
        Ok(f)
    }

    fn implication(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            return Ok(Formula::implies(lhs, self.implication()?));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut f = self.negation()?;
        while self.eat(&Tok::Amp) {
            f = Formula::and(f, self.negation()?);
        }
        Ok(f)
    }

    fn negation(&mut self) -> Result<Formula, SyntaxError> {
        if self.eat(&Tok::Not) || self.eat(&Tok::Minus) {
            return Ok(Formula::not(self.negation()?));
        }
        match self.peek().clone() {
            Tok::Hash(n) if n == "false" => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::Hash(n) if n == "true" => {
                self.bump();
                Ok(Formula::top())
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(_) => {
                let a = self.atom()?;
                Ok(Formula::Atom(a.to_string()))
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

fn is_aggregate_keyword(name: &str) -> bool {
    matches!(name, "count" | "sum" | "min" | "max")
}

fn complement(op: RelOp) -> RelOp {
    match op {
        RelOp::Eq => RelOp::Ne,
        RelOp::Ne => RelOp::Eq,
        RelOp::Lt => RelOp::Ge,
        RelOp::Le => RelOp::Gt,
        RelOp::Gt => RelOp::Le,
        RelOp::Ge => RelOp::Lt,
    }
}

fn relocate(e: SyntaxError, line: usize) -> SyntaxError {
    match e {
        SyntaxError::Parse { col, message, .. } => {
            SyntaxError::Parse { line, col, message: format!("in label: {message}") }
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translation_example_program() {
        let p = parse_program("a. b :- not c. c :- not b. d :- a, not c.").unwrap();
        let kinds: Vec<_> = p.rules.iter().map(Rule::kind).collect();
        assert_eq!(kinds, vec![RuleKind::Fact, RuleKind::Normal, RuleKind::Normal, RuleKind::Normal]);
    }

    #[test]
    fn empty_program() {
        assert!(parse_program("").unwrap().is_empty());
        assert!(parse_program("% only a comment\n").unwrap().is_empty());
    }

    #[test]
    fn fact_intervals_expand() {
        let p = parse_program("p(1..3).").unwrap();
        let shown: Vec<_> = p.rules.iter().map(|r| r.to_string()).collect();
        assert_eq!(shown, vec!["p(1).", "p(2).", "p(3)."]);
        let parsed = parse_program_with("p(3..1).", &ParseOptions::default()).unwrap();
        assert!(parsed.program.is_empty());
        assert_eq!(parsed.warnings.len(), 1);
    }

    #[test]
    fn consts_substitute_and_override() {
        let p = parse_program("#const n = 2. t(1..n).").unwrap();
        assert_eq!(p.len(), 2);
        let mut opts = ParseOptions::default();
        opts.consts.insert("n".into(), 4);
        let p = parse_program_with("#const n = 2. t(1..n).", &opts).unwrap().program;
        assert_eq!(p.len(), 4);
        assert_eq!(p.directives, vec![Directive::Const("n".into(), 4)]);
    }

    #[test]
    fn arity_clash_is_rejected() {
        let err = parse_program("p(1).\np :- q.").unwrap_err();
        assert!(matches!(err, SyntaxError::ArityClash { line: 2, .. }));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_program("a :- b\nc.").unwrap_err();
        assert!(matches!(err, SyntaxError::Parse { line: 2, col: 1, .. }), "{err:?}");
    }

    #[test]
    fn choices_aggregates_and_labels() {
        let src = "{ hc(V,U) } :- edge(V,U).\n\
                   1 { a; b } 1.\n\
                   :- not 1 { assign(N,C) : color(C) } 1, node(N).\n\
                   :- I = 1..n, #count{ queen(I,J) : J = 1..n } != 1.\n\
                   :- node(V), not reached(V). %@ unreached(V)\n";
        let p = parse_program(src).unwrap();
        assert_eq!(p.rules[0].kind(), RuleKind::Choice);
        assert_eq!(p.rules[1].to_string(), "1 { a; b } 1.");
        assert_eq!(p.rules[2].to_string(), ":- not 1 { assign(N,C) : color(C) } 1, node(N).");
        assert_eq!(p.rules[3].to_string(), ":- I=1..n, #count{ queen(I,J) : J=1..n } != 1.");
        assert_eq!(p.rules[4].label, Some(parse_term("unreached(V)").unwrap()));
        assert_eq!(p.rules[4].line, 5);
    }

    #[test]
    fn minimize_forms() {
        let p = parse_program("#minimize { C,X,Y : hc(X,Y), cost(X,Y,C) }. #minimize { ic(I) }.").unwrap();
        let mins: Vec<_> = p.minimize().collect();
        assert!(!mins[0][0].implicit);
        assert_eq!(mins[0][0].terms.len(), 3);
        assert!(mins[1][0].implicit);
        assert_eq!(p.directives[1].to_string(), "#minimize { ic(I) }.");
    }

    #[test]
    fn formulas() {
        let f = parse_formula("not a -> b | not not (c & not d)").unwrap();
        let a = |n: &str| Formula::atom(n);
        let expected = Formula::implies(
            Formula::not(a("a")),
            Formula::or(a("b"), Formula::not(Formula::not(Formula::and(a("c"), Formula::not(a("d")))))),
        );
        assert_eq!(f, expected);
        assert_eq!(parse_formula("#false").unwrap(), Formula::Bottom);
        assert_eq!(
            parse_formula("a <-> a").unwrap(),
            Formula::and(Formula::implies(a("a"), a("a")), Formula::implies(a("a"), a("a")))
        );
        assert_eq!(parse_formula("-p(1)").unwrap(), Formula::not(a("p(1)")));
        assert!(matches!(parse_formula("a &"), Err(SyntaxError::Parse { col: 4, .. })));
    }

    #[test]
    fn pretty_printing() {
        assert_eq!(parse_program("a.").unwrap().to_string(), "a.\n");
        let r = Rule::normal(Atom::prop("b"), vec![Literal::neg(Atom::prop("c"))]);
        assert_eq!(r.to_string(), "b :- not c.");
        assert_eq!(Formula::not(Formula::atom("a")).to_string(), "not a");
    }
}
