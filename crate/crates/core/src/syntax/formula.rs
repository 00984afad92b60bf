//! Propositional formulas of the logic of here-and-there.
//!
//! Only atoms, falsum, conjunction, disjunction and implication are
//! primitive. Negation, verum and equivalence are built from them, so
//! `Formula::not(a)` and `Formula::implies(a, Formula::Bottom)` are the
//! same value.

use std::collections::BTreeSet;
use std::fmt;

use sha2::{Digest, Sha256};

/// Prefix reserved for auxiliary atoms introduced by the translations.
pub const AUX_PREFIX: &str = "__aux_";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Bottom,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Self {
        Formula::implies(a, Formula::Bottom)
    }

    pub fn top() -> Self {
        Formula::not(Formula::Bottom)
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    /// Conjunction of all formulas; the empty conjunction is verum.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::top(),
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Disjunction of all formulas; the empty disjunction is falsum.
    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::Bottom,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// The negated formula if this is a negation `φ → ⊥`.
    pub fn as_negation(&self) -> Option<&Formula> {
        match self {
            Formula::Implies(a, b) if **b == Formula::Bottom => Some(a),
            _ => None,
        }
    }

    pub fn is_negation(&self) -> bool {
        self.as_negation().is_some()
    }

    fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        if let Formula::And(l, r) = self {
            if let (Formula::Implies(a, b), Formula::Implies(c, d)) = (&**l, &**r) {
                if a == d && b == c && **b != Formula::Bottom && **d != Formula::Bottom {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Bottom => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Whether `sub` occurs as a subformula.
    pub fn contains(&self, sub: &Formula) -> bool {
        if self == sub {
            return true;
        }
        match self {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.contains(sub) || b.contains(sub),
            _ => false,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bottom => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    fn precedence(&self) -> u8 {
        if self.as_iff().is_some() {
            return 1;
        }
        if self.is_negation() {
            return 5;
        }
        match self {
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Atom(_) | Formula::Bottom => 6,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, c: &Formula, min: u8) -> fmt::Result {
            if c.precedence() < min {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        }
        if *self == Formula::top() {
            return f.write_str("#true");
        }
        if let Some((a, b)) = self.as_iff() {
            child(f, a, 2)?;
            f.write_str(" <-> ")?;
            return child(f, b, 2);
        }
        if let Some(a) = self.as_negation() {
            f.write_str("not ")?;
            return child(f, a, 5);
        }
        match self {
            Formula::Atom(a) => f.write_str(a),
            Formula::Bottom => f.write_str("#false"),
            Formula::And(a, b) => {
                child(f, a, 4)?;
                f.write_str(" & ")?;
                child(f, b, 5)
            }
            Formula::Or(a, b) => {
                child(f, a, 3)?;
                f.write_str(" | ")?;
                child(f, b, 4)
            }
            Formula::Implies(a, b) => {
                // right associative
                child(f, a, 3)?;
                f.write_str(" -> ")?;
                child(f, b, 2)
            }
        }
    }
}

/// The auxiliary atom `x_φ` naming a formula φ.
///
/// Two auxiliary atoms are equal exactly when their base formulas are.
/// Names carry the reserved prefix so they never clash with user atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AuxAtom {
    pub base: Formula,
}

impl AuxAtom {
    pub fn new(base: Formula) -> Self {
        AuxAtom { base }
    }

    /// Deterministic name: `__aux_not_a` for `not a`, otherwise a digest of
    /// the canonical rendering of the base formula.
    pub fn name(&self) -> String {
        if let Some(Formula::Atom(a)) = self.base.as_negation() {
            return format!("{AUX_PREFIX}not_{a}");
        }
        let digest = Sha256::digest(self.base.to_string().as_bytes());
        let hex: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
        format!("{AUX_PREFIX}{hex}")
    }

    pub fn formula(&self) -> Formula {
        Formula::Atom(self.name())
    }
}

impl fmt::Display for AuxAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn derived_connectives_normalize() {
        assert_eq!(Formula::not(a("p")), Formula::implies(a("p"), Formula::Bottom));
        assert_eq!(Formula::top(), Formula::implies(Formula::Bottom, Formula::Bottom));
    }

    #[test]
    fn printing() {
        assert_eq!(Formula::not(a("a")).to_string(), "not a");
        assert_eq!(Formula::top().to_string(), "#true");
        let psi = Formula::implies(
            Formula::not(a("a")),
            Formula::or(a("b"), Formula::not(Formula::not(Formula::and(a("c"), Formula::not(a("d")))))),
        );
        assert_eq!(psi.to_string(), "not a -> b | not not (c & not d)");
        assert_eq!(Formula::iff(a("a"), a("b")).to_string(), "a <-> b");
    }

    #[test]
    fn aux_names() {
        let x = AuxAtom::new(Formula::not(a("c")));
        assert_eq!(x.name(), "__aux_not_c");
        let y = AuxAtom::new(Formula::not(Formula::not(a("c"))));
        let z = AuxAtom::new(Formula::not(Formula::not(a("c"))));
        assert_eq!(y.name(), z.name());
        assert_ne!(x.name(), y.name());
        assert!(y.name().starts_with(AUX_PREFIX));
    }
}
