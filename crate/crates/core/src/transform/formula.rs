//! Extension by definition and the negated-subformula translation.

use std::collections::BTreeMap;

use super::TransformError;
use crate::ht::{classical_satisfies, AtomSet};
use crate::syntax::{AuxAtom, Formula, AUX_PREFIX};

/// Maximal negated subformulas in order of first occurrence.
pub fn negocc(f: &Formula) -> Vec<Formula> {
    fn go(f: &Formula, out: &mut Vec<Formula>) {
        if f.is_negation() {
            if !out.contains(f) {
                out.push(f.clone());
            }
            return;
        }
        match f {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                go(a, out);
                go(b, out);
            }
            Formula::Atom(_) | Formula::Bottom => {}
        }
    }
    let mut out = Vec::new();
    go(f, &mut out);
    out
}

/// Replaces every outermost occurrence of a key of `map` by its value.
pub fn substitute(f: &Formula, map: &BTreeMap<Formula, Formula>) -> Formula {
    if let Some(r) = map.get(f) {
        return r.clone();
    }
    match f {
        Formula::And(a, b) => Formula::and(substitute(a, map), substitute(b, map)),
        Formula::Or(a, b) => Formula::or(substitute(a, map), substitute(b, map)),
        Formula::Implies(a, b) => Formula::implies(substitute(a, map), substitute(b, map)),
        other => other.clone(),
    }
}

/// A theory over `At` extended by auxiliary atoms, with the maps between
/// the stable models of source and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaTranslation {
    /// Conjuncts of the resulting theory.
    pub theory: Vec<Formula>,
    /// Introduced atoms, in introduction order.
    pub aux: Vec<AuxAtom>,
    /// The original vocabulary `At`.
    pub vocabulary: AtomSet,
    pub warnings: Vec<String>,
}

impl FormulaTranslation {
    pub fn formula(&self) -> Formula {
        Formula::conjunction(self.theory.iter().cloned())
    }

    pub fn aux_map(&self) -> BTreeMap<String, Formula> {
        self.aux.iter().map(|x| (x.name(), x.base.clone())).collect()
    }

    /// `At` plus the auxiliary atoms.
    pub fn extended_vocabulary(&self) -> AtomSet {
        let mut v = self.vocabulary.clone();
        v.extend(self.aux.iter().map(AuxAtom::name));
        v
    }

    /// `T ∪ {x_φ | T ⊨ φ}`.
    pub fn extend(&self, t: &AtomSet) -> AtomSet {
        let mut out = t.clone();
        for x in &self.aux {
            if classical_satisfies(t, &x.base) {
                out.insert(x.name());
            }
        }
        out
    }

    /// `T ∩ At`.
    pub fn restrict(&self, t: &AtomSet) -> AtomSet {
        t.intersection(&self.vocabulary).cloned().collect()
    }
}

fn check_reserved(f: &Formula) -> Result<AtomSet, TransformError> {
    let atoms = f.atoms();
    if let Some(a) = atoms.iter().find(|a| a.starts_with(AUX_PREFIX)) {
        return Err(TransformError::ReservedName(a.clone()));
    }
    Ok(atoms)
}

/// `ψ[φ/x_φ] ∧ (φ ↔ x_φ)`.
pub fn extend_by_definition(psi: &Formula, phi: &Formula) -> Result<FormulaTranslation, TransformError> {
    let mut vocabulary = check_reserved(psi)?;
    vocabulary.extend(check_reserved(phi)?);
    let x = AuxAtom::new(phi.clone());
    let mut warnings = Vec::new();
    if !psi.contains(phi) {
        warnings.push(format!("`{phi}` does not occur in `{psi}`; substitution is vacuous"));
    }
    let map = BTreeMap::from([(phi.clone(), x.formula())]);
    Ok(FormulaTranslation {
        theory: vec![substitute(psi, &map), Formula::iff(phi.clone(), x.formula())],
        aux: vec![x],
        vocabulary,
        warnings,
    })
}

/// Replaces each maximal negated subformula φ by `x_φ`, adding
/// `x_φ ∨ ¬x_φ` and `¬¬(φ ↔ x_φ)` for each.
pub fn translate_formula(psi: &Formula) -> Result<FormulaTranslation, TransformError> {
    let vocabulary = check_reserved(psi)?;
    let negs = negocc(psi);
    let aux: Vec<AuxAtom> = negs.iter().cloned().map(AuxAtom::new).collect();
    let map: BTreeMap<Formula, Formula> = negs.iter().cloned().zip(aux.iter().map(AuxAtom::formula)).collect();
    let mut theory = vec![substitute(psi, &map)];
    for x in &aux {
        theory.push(Formula::or(x.formula(), Formula::not(x.formula())));
    }
    for x in &aux {
        theory.push(Formula::not(Formula::not(Formula::iff(x.base.clone(), x.formula()))));
    }
    Ok(FormulaTranslation { theory, aux, vocabulary, warnings: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ht::{project, stable_models_of};
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn negocc_examples() {
        assert_eq!(negocc(&f("not a -> b | not not (c & not d)")), vec![f("not a"), f("not not (c & not d)")]);
        assert!(negocc(&f("a -> b")).is_empty());
        assert_eq!(negocc(&f("not (a & not b)")), vec![f("not (a & not b)")]);
    }

    #[test]
    fn extension_by_definition() {
        let psi = f("not a -> b");
        let r = extend_by_definition(&psi, &f("not a")).unwrap();
        let x = r.aux[0].formula();
        assert_eq!(r.theory[0], Formula::implies(x.clone(), f("b")));
        assert_eq!(r.theory[1], Formula::iff(f("not a"), x));
        assert!(r.warnings.is_empty());

        let sm = stable_models_of(&r.theory).unwrap();
        let orig = stable_models_of(&[psi]).unwrap();
        assert_eq!(project(&sm, &r.vocabulary).models, orig.models);
        assert_eq!(orig.models, vec![AtomSet::from(["b".to_string()])]);

        let vac = extend_by_definition(&f("a"), &f("b")).unwrap();
        assert_eq!(vac.theory[0], f("a"));
        assert_eq!(vac.warnings.len(), 1);
    }

    #[test]
    fn translation_shape() {
        let psi = f("not a -> b | not not (c & not d)");
        let r = translate_formula(&psi).unwrap();
        let x1 = r.aux[0].formula();
        let x2 = r.aux[1].formula();
        assert_eq!(r.aux[0].base, f("not a"));
        assert_eq!(r.aux[1].base, f("not not (c & not d)"));
        assert_eq!(r.theory[0], Formula::implies(x1.clone(), Formula::or(f("b"), x2.clone())));
        assert_eq!(r.theory[1], Formula::or(x1.clone(), Formula::not(x1.clone())));
        assert_eq!(r.theory[2], Formula::or(x2.clone(), Formula::not(x2.clone())));
        assert_eq!(r.theory[3], Formula::not(Formula::not(Formula::iff(f("not a"), x1))));
        assert_eq!(r.theory[4], Formula::not(Formula::not(Formula::iff(f("not not (c & not d)"), x2))));

        let plain = translate_formula(&f("a & b")).unwrap();
        assert_eq!(plain.theory, vec![f("a & b")]);
        assert!(plain.aux.is_empty());

        assert!(matches!(translate_formula(&f("__aux_x")), Err(TransformError::ReservedName(_))));
    }

    #[test]
    fn translation_models() {
        let r = translate_formula(&f("not a -> b | not not (c & not d)")).unwrap();
        let sm = stable_models_of(&r.theory).unwrap();
        let b: AtomSet = ["b".to_string()].into();
        let xb: AtomSet = [r.aux[0].name(), "b".to_string()].into();
        assert_eq!(sm.models, vec![xb.clone()]);
        assert_eq!(r.restrict(&xb), b);
        assert_eq!(r.extend(&b), xb);
    }
}
