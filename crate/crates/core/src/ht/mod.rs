//! Here-and-there semantics by exhaustive enumeration.
//!
//! Every function here is a brute-force reference implementation: it walks
//! all interpretations over a small vocabulary. The rest of the crate is
//! tested against these results.

mod program;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::syntax::Formula;

pub use program::{program_stable_models, program_theory};

/// Default bound on the vocabulary size for enumeration.
pub const DEFAULT_MAX_ATOMS: usize = 20;

pub type AtomSet = BTreeSet<String>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HtError {
    #[error("atom `{0}` is not in the vocabulary")]
    UnknownAtom(String),
    #[error("here part is not contained in there part: {0}")]
    NotNested(String),
    #[error("vocabulary has {atoms} atoms, above the enumeration bound {bound}")]
    BoundExceeded { atoms: usize, bound: usize },
    #[error("line {line}: rule is not ground")]
    NotGround { line: usize },
    #[error("line {line}: {message}")]
    Unsupported { line: usize, message: String },
}

/// An interpretation ⟨H,T⟩ with H ⊆ T over a fixed vocabulary.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HtInterpretation {
    vocabulary: AtomSet,
    here: AtomSet,
    there: AtomSet,
}

impl HtInterpretation {
    pub fn new(vocabulary: AtomSet, here: AtomSet, there: AtomSet) -> Result<Self, HtError> {
        if let Some(a) = there.iter().find(|a| !vocabulary.contains(*a)) {
            return Err(HtError::UnknownAtom(a.clone()));
        }
        if let Some(a) = here.iter().find(|a| !there.contains(*a)) {
            return Err(HtError::NotNested(a.clone()));
        }
        Ok(HtInterpretation { vocabulary, here, there })
    }

    /// The total interpretation ⟨T,T⟩.
    pub fn total(vocabulary: AtomSet, there: AtomSet) -> Result<Self, HtError> {
        Self::new(vocabulary, there.clone(), there)
    }

    pub fn here(&self) -> &AtomSet {
        &self.here
    }

    pub fn there(&self) -> &AtomSet {
        &self.there
    }

    pub fn vocabulary(&self) -> &AtomSet {
        &self.vocabulary
    }

    pub fn is_total(&self) -> bool {
        self.here == self.there
    }
}

impl fmt::Display for HtInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", show_set(&self.here), show_set(&self.there))
    }
}

pub fn show_set(s: &AtomSet) -> String {
    let items: Vec<&str> = s.iter().map(String::as_str).collect();
    format!("{{{}}}", items.join(","))
}

/// A set of (total) models in canonical order: by size, then lexicographic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSet {
    pub vocabulary: AtomSet,
    pub models: Vec<AtomSet>,
}

impl ModelSet {
    pub fn new(vocabulary: AtomSet, models: impl IntoIterator<Item = AtomSet>) -> Self {
        let mut models: Vec<AtomSet> = models.into_iter().collect();
        canonical_sort(&mut models);
        ModelSet { vocabulary, models }
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn contains(&self, m: &AtomSet) -> bool {
        self.models.contains(m)
    }
}

/// Sorts atom sets by size, then lexicographically, dropping duplicates.
pub fn canonical_sort(models: &mut Vec<AtomSet>) {
    models.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
    models.dedup();
}

/// A formula compiled against a vocabulary index.
#[derive(Clone, Debug)]
enum Compiled {
    Atom(u32),
    Bottom,
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
    Implies(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    fn build(f: &Formula, index: &BTreeMap<&str, u32>) -> Result<Compiled, HtError> {
        let pair = |a: &Formula, b: &Formula| -> Result<(Box<Compiled>, Box<Compiled>), HtError> {
            Ok((Box::new(Compiled::build(a, index)?), Box::new(Compiled::build(b, index)?)))
        };
        Ok(match f {
            Formula::Atom(a) => Compiled::Atom(*index.get(a.as_str()).ok_or_else(|| HtError::UnknownAtom(a.clone()))?),
            Formula::Bottom => Compiled::Bottom,
            Formula::And(a, b) => {
                let (x, y) = pair(a, b)?;
                Compiled::And(x, y)
            }
            Formula::Or(a, b) => {
                let (x, y) = pair(a, b)?;
                Compiled::Or(x, y)
            }
            Formula::Implies(a, b) => {
                let (x, y) = pair(a, b)?;
                Compiled::Implies(x, y)
            }
        })
    }

    /// Classical truth in `t`.
    fn there(&self, t: u64) -> bool {
        match self {
            Compiled::Atom(i) => t >> i & 1 == 1,
            Compiled::Bottom => false,
            Compiled::And(a, b) => a.there(t) && b.there(t),
            Compiled::Or(a, b) => a.there(t) || b.there(t),
            Compiled::Implies(a, b) => !a.there(t) || b.there(t),
        }
    }

    /// Truth at the here world of ⟨h,t⟩.
    fn here(&self, h: u64, t: u64) -> bool {
        match self {
            Compiled::Atom(i) => h >> i & 1 == 1,
            Compiled::Bottom => false,
            Compiled::And(a, b) => a.here(h, t) && b.here(h, t),
            Compiled::Or(a, b) => a.here(h, t) || b.here(h, t),
            Compiled::Implies(a, b) => (!a.here(h, t) || b.here(h, t)) && (!a.there(t) || b.there(t)),
        }
    }
}

/// A theory compiled against an indexed vocabulary.
struct Theory {
    atoms: Vec<String>,
    formulas: Vec<Compiled>,
}

impl Theory {
    fn new<'a>(
        formulas: impl IntoIterator<Item = &'a Formula>,
        vocab: &AtomSet,
        bound: usize,
    ) -> Result<Theory, HtError> {
        if vocab.len() > bound.min(63) {
            return Err(HtError::BoundExceeded { atoms: vocab.len(), bound: bound.min(63) });
        }
        let atoms: Vec<String> = vocab.iter().cloned().collect();
        let index: BTreeMap<&str, u32> = atoms.iter().enumerate().map(|(i, a)| (a.as_str(), i as u32)).collect();
        let formulas = formulas.into_iter().map(|f| Compiled::build(f, &index)).collect::<Result<_, _>>()?;
        Ok(Theory { atoms, formulas })
    }

    fn mask(&self, set: &AtomSet) -> u64 {
        self.atoms.iter().enumerate().filter(|(_, a)| set.contains(*a)).fold(0, |m, (i, _)| m | 1 << i)
    }

    fn set(&self, mask: u64) -> AtomSet {
        self.atoms.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, a)| a.clone()).collect()
    }

    fn sat_there(&self, t: u64) -> bool {
        self.formulas.iter().all(|f| f.there(t))
    }

    fn sat_here(&self, h: u64, t: u64) -> bool {
        self.formulas.iter().all(|f| f.here(h, t))
    }

    fn universe(&self) -> u64 {
        if self.atoms.is_empty() {
            0
        } else {
            u64::MAX >> (64 - self.atoms.len())
        }
    }

    /// Whether `t` is an equilibrium model.
    fn is_equilibrium(&self, t: u64) -> bool {
        if !self.sat_there(t) {
            return false;
        }
        if t == 0 {
            return true;
        }
        // proper submasks of t, from t-1 downwards
        let mut h = (t - 1) & t;
        loop {
            if self.sat_here(h, t) {
                return false;
            }
            if h == 0 {
                return true;
            }
            h = (h - 1) & t;
        }
    }
}

fn vocab_of(theory: &[Formula]) -> AtomSet {
    let mut v = AtomSet::new();
    theory.iter().for_each(|f| f.collect_atoms(&mut v));
    v
}

pub fn ht_satisfies(i: &HtInterpretation, phi: &Formula) -> Result<bool, HtError> {
    let th = Theory::new([phi], &i.vocabulary, 63)?;
    Ok(th.formulas[0].here(th.mask(&i.here), th.mask(&i.there)))
}

/// Classical satisfaction: atoms outside `t` are false.
pub fn classical_satisfies(t: &AtomSet, phi: &Formula) -> bool {
    fn go(t: &AtomSet, f: &Formula) -> bool {
        match f {
            Formula::Atom(a) => t.contains(a),
            Formula::Bottom => false,
            Formula::And(a, b) => go(t, a) && go(t, b),
            Formula::Or(a, b) => go(t, a) || go(t, b),
            Formula::Implies(a, b) => !go(t, a) || go(t, b),
        }
    }
    go(t, phi)
}

/// All HT models of `theory` over `vocab`, ordered by T (size, then
/// lexicographic) and then by H the same way.
pub fn enumerate_ht_models(theory: &[Formula], vocab: &AtomSet) -> Result<Vec<HtInterpretation>, HtError> {
    let th = Theory::new(theory, vocab, DEFAULT_MAX_ATOMS)?;
    let mut out = Vec::new();
    for t in ordered_masks(th.universe()) {
        if !th.sat_there(t) {
            continue;
        }
        for h in ordered_masks(t) {
            if th.sat_here(h, t) {
                out.push(HtInterpretation { vocabulary: vocab.clone(), here: th.set(h), there: th.set(t) });
            }
        }
    }
    Ok(out)
}

/// Submasks of `m` ordered by popcount, then by lexicographic order of the
/// corresponding atom lists.
fn ordered_masks(m: u64) -> Vec<u64> {
    let mut subs = Vec::new();
    let mut s = m;
    loop {
        subs.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & m;
    }
    let key = |x: &u64| {
        let bits: Vec<u32> = (0..64).filter(|i| x >> i & 1 == 1).collect();
        (x.count_ones(), bits)
    };
    subs.sort_by_key(key);
    subs
}

pub fn equilibrium_models(theory: &[Formula], vocab: &AtomSet) -> Result<ModelSet, HtError> {
    equilibrium_models_bounded(theory, vocab, DEFAULT_MAX_ATOMS)
}

pub fn equilibrium_models_bounded(theory: &[Formula], vocab: &AtomSet, bound: usize) -> Result<ModelSet, HtError> {
    let th = Theory::new(theory, vocab, bound)?;
    let models = (0..=th.universe()).filter(|&t| t & !th.universe() == 0 && th.is_equilibrium(t)).map(|t| th.set(t));
    Ok(ModelSet::new(vocab.clone(), models))
}

/// Stable models of a theory over exactly its own atoms.
pub fn stable_models_of(theory: &[Formula]) -> Result<ModelSet, HtError> {
    equilibrium_models(theory, &vocab_of(theory))
}

pub fn project(ms: &ModelSet, v: &AtomSet) -> ModelSet {
    ModelSet::new(
        ms.vocabulary.intersection(v).cloned().collect(),
        ms.models.iter().map(|m| m.intersection(v).cloned().collect()),
    )
}

/// Same HT models over `vocab`.
pub fn ht_equivalent(a: &[Formula], b: &[Formula], vocab: &AtomSet) -> Result<bool, HtError> {
    let ta = Theory::new(a, vocab, DEFAULT_MAX_ATOMS)?;
    let tb = Theory::new(b, vocab, DEFAULT_MAX_ATOMS)?;
    for t in 0..=ta.universe() {
        let (sa, sb) = (ta.sat_there(t), tb.sat_there(t));
        if sa != sb {
            return Ok(false);
        }
        if !sa {
            // no ⟨H,T⟩ satisfies either side by persistence
            continue;
        }
        let mut h = t;
        loop {
            if ta.sat_here(h, t) != tb.sat_here(h, t) {
                return Ok(false);
            }
            if h == 0 {
                break;
            }
            h = (h - 1) & t;
        }
    }
    Ok(true)
}

/// Every HT model of the premises satisfies the conclusion.
pub fn check_entailment(premises: &[Formula], conclusion: &Formula, vocab: &AtomSet) -> Result<bool, HtError> {
    let th = Theory::new(premises, vocab, DEFAULT_MAX_ATOMS)?;
    let goal = Theory::new([conclusion], vocab, DEFAULT_MAX_ATOMS)?;
    for t in 0..=th.universe() {
        if !th.sat_there(t) {
            continue;
        }
        let mut h = t;
        loop {
            if th.sat_here(h, t) && !goal.sat_here(h, t) {
                return Ok(false);
            }
            if h == 0 {
                break;
            }
            h = (h - 1) & t;
        }
    }
    Ok(true)
}
