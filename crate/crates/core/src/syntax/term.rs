//! Terms and atoms of the input language.

use std::fmt;

/// Integer arithmetic operators usable inside terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

/// A (possibly non-ground) term.
///
/// Constants are lowercase identifiers or integers; variables start with an
/// uppercase letter. Compound terms `f(t1,...,tn)` are accepted so that
/// descriptive labels such as `unreached(V)` can be built.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Int(i64),
    Sym(String),
    Var(String),
    /// The anonymous variable `_`; every occurrence is distinct.
    Anon,
    Func(String, Vec<Term>),
    BinOp(BinOp, Box<Term>, Box<Term>),
    Neg(Box<Term>),
    /// `l..u`, expanded eagerly in facts and during grounding elsewhere.
    Interval(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn sym(name: impl Into<String>) -> Self {
        Term::Sym(name.into())
    }

    pub fn binop(op: BinOp, lhs: Term, rhs: Term) -> Self {
        Term::BinOp(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Int(_) | Term::Sym(_) => true,
            Term::Var(_) | Term::Anon => false,
            Term::Func(_, args) => args.iter().all(Term::is_ground),
            Term::BinOp(_, l, r) | Term::Interval(l, r) => l.is_ground() && r.is_ground(),
            Term::Neg(t) => t.is_ground(),
        }
    }

    pub fn has_interval(&self) -> bool {
        match self {
            Term::Interval(..) => true,
            Term::Func(_, args) => args.iter().any(Term::has_interval),
            Term::BinOp(_, l, r) => l.has_interval() || r.has_interval(),
            Term::Neg(t) => t.has_interval(),
            _ => false,
        }
    }

    /// Collects variable names in order of first occurrence.
    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Func(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Term::BinOp(_, l, r) | Term::Interval(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Term::Neg(t) => t.collect_vars(out),
            Term::Int(_) | Term::Sym(_) | Term::Anon => {}
        }
    }

    pub fn has_anon(&self) -> bool {
        match self {
            Term::Anon => true,
            Term::Func(_, args) => args.iter().any(Term::has_anon),
            Term::BinOp(_, l, r) | Term::Interval(l, r) => l.has_anon() || r.has_anon(),
            Term::Neg(t) => t.has_anon(),
            _ => false,
        }
    }

    /// Replaces symbolic constants by integers (`#const`).
    pub fn substitute_consts(&mut self, consts: &dyn Fn(&str) -> Option<i64>) {
        match self {
            Term::Sym(s) => {
                if let Some(v) = consts(s) {
                    *self = Term::Int(v);
                }
            }
            Term::Func(_, args) => args.iter_mut().for_each(|a| a.substitute_consts(consts)),
            Term::BinOp(_, l, r) | Term::Interval(l, r) => {
                l.substitute_consts(consts);
                r.substitute_consts(consts);
            }
            Term::Neg(t) => t.substitute_consts(consts),
            Term::Int(_) | Term::Var(_) | Term::Anon => {}
        }
    }

    /// Evaluates a variable-free arithmetic term to an integer, if possible.
    pub fn eval_int(&self) -> Option<i64> {
        match self {
            Term::Int(v) => Some(*v),
            Term::Neg(t) => t.eval_int().map(|v| -v),
            Term::BinOp(op, l, r) => {
                let (a, b) = (l.eval_int()?, r.eval_int()?);
                match op {
                    BinOp::Add => a.checked_add(b),
                    BinOp::Sub => a.checked_sub(b),
                    BinOp::Mul => a.checked_mul(b),
                    BinOp::Div => {
                        if b == 0 {
                            None
                        } else {
                            Some(a.div_euclid(b))
                        }
                    }
                }
            }
            _ => None,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::BinOp(op, ..) => op.precedence(),
            Term::Interval(..) => 0,
            _ => 3,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(v) => write!(f, "{v}"),
            Term::Sym(s) | Term::Var(s) => f.write_str(s),
            Term::Anon => f.write_str("_"),
            Term::Func(name, args) => {
                write!(f, "{name}(")?;
                write_args(f, args)?;
                f.write_str(")")
            }
            Term::BinOp(op, l, r) => {
                let p = op.precedence();
                if l.precedence() < p {
                    write!(f, "({l})")?;
                } else {
                    write!(f, "{l}")?;
                }
                f.write_str(op.symbol())?;
                // left associative: an equal-precedence right operand needs parentheses
                if r.precedence() <= p {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
            Term::Neg(t) => {
                if t.precedence() < 3 || matches!(**t, Term::Int(_) | Term::Neg(_)) {
                    write!(f, "-({t})")
                } else {
                    write!(f, "-{t}")
                }
            }
            Term::Interval(l, u) => {
                let side = |t: &Term, f: &mut fmt::Formatter<'_>| {
                    if t.precedence() == 0 {
                        write!(f, "({t})")
                    } else {
                        write!(f, "{t}")
                    }
                };
                side(l, f)?;
                f.write_str("..")?;
                side(u, f)
            }
        }
    }
}

pub(crate) fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

/// A ground, fully evaluated term. Integers sort before symbols, symbols
/// before compound terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(i64),
    Sym(String),
    Func(String, Vec<Value>),
}

impl Value {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            Value::Int(v) => Term::Int(*v),
            Value::Sym(s) => Term::Sym(s.clone()),
            Value::Func(n, args) => Term::Func(n.clone(), args.iter().map(Value::to_term).collect()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Sym(s) => f.write_str(s),
            Value::Func(n, args) => {
                write!(f, "{n}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Why a term could not be evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    Unbound(String),
    /// Arithmetic applied to a non-integer, division by zero or overflow.
    Arithmetic(String),
    Interval,
}

impl Term {
    /// Evaluates the term under a variable assignment.
    pub fn eval_with(&self, env: &dyn Fn(&str) -> Option<Value>) -> Result<Value, EvalError> {
        match self {
            Term::Int(v) => Ok(Value::Int(*v)),
            Term::Sym(s) => Ok(Value::Sym(s.clone())),
            Term::Var(v) => env(v).ok_or_else(|| EvalError::Unbound(v.clone())),
            Term::Anon => Err(EvalError::Unbound("_".into())),
            Term::Func(n, args) => {
                Ok(Value::Func(n.clone(), args.iter().map(|a| a.eval_with(env)).collect::<Result<_, _>>()?))
            }
            Term::Neg(t) => match t.eval_with(env)? {
                Value::Int(v) => v.checked_neg().map(Value::Int).ok_or_else(|| EvalError::Arithmetic(self.to_string())),
                _ => Err(EvalError::Arithmetic(self.to_string())),
            },
            Term::BinOp(op, l, r) => {
                let (a, b) = match (l.eval_with(env)?, r.eval_with(env)?) {
                    (Value::Int(a), Value::Int(b)) => (a, b),
                    _ => return Err(EvalError::Arithmetic(self.to_string())),
                };
                let v = match op {
                    BinOp::Add => a.checked_add(b),
                    BinOp::Sub => a.checked_sub(b),
                    BinOp::Mul => a.checked_mul(b),
                    BinOp::Div => (b != 0).then(|| a.div_euclid(b)),
                };
                v.map(Value::Int).ok_or_else(|| EvalError::Arithmetic(self.to_string()))
            }
            Term::Interval(..) => Err(EvalError::Interval),
        }
    }

    /// Evaluates a ground term.
    pub fn eval(&self) -> Result<Value, EvalError> {
        self.eval_with(&|_| None)
    }
}

/// A ground atom over evaluated terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub pred: String,
    pub args: Vec<Value>,
}

impl GroundAtom {
    pub fn new(pred: impl Into<String>, args: Vec<Value>) -> Self {
        GroundAtom { pred: pred.into(), args }
    }

    pub fn to_atom(&self) -> Atom {
        Atom::new(self.pred.clone(), self.args.iter().map(Value::to_term).collect())
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A predicate symbol with its arity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pred {
    pub name: String,
    pub arity: usize,
}

impl Pred {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Pred { name: name.into(), arity }
    }
}

impl serde::Serialize for Pred {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// An atom `p(t1,...,tn)`; zero-ary atoms print without parentheses.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Atom { pred: pred.into(), args }
    }

    pub fn prop(name: impl Into<String>) -> Self {
        Atom { pred: name.into(), args: Vec::new() }
    }

    pub fn predicate(&self) -> Pred {
        Pred::new(self.pred.clone(), self.args.len())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        self.args.iter().for_each(|a| a.collect_vars(out));
    }

    pub fn has_anon(&self) -> bool {
        self.args.iter().any(Term::has_anon)
    }

    pub fn eval_with(&self, env: &dyn Fn(&str) -> Option<Value>) -> Result<GroundAtom, EvalError> {
        Ok(GroundAtom {
            pred: self.pred.clone(),
            args: self.args.iter().map(|t| t.eval_with(env)).collect::<Result<_, _>>()?,
        })
    }

    pub fn eval(&self) -> Result<GroundAtom, EvalError> {
        self.eval_with(&|_| None)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            write_args(f, &self.args)?;
            f.write_str(")")?;
        }
        Ok(())
    }
}
