use std::collections::HashMap;

use crate::syntax::GroundAtom;

pub type AtomId = usize;

/// Dense ids for ground atoms.
///
/// Hidden atoms are introduced by the solver; they have no entry in the
/// lookup maps, so they never clash with program atoms.
#[derive(Clone, Debug, Default)]
pub struct AtomTable {
    atoms: Vec<GroundAtom>,
    names: Vec<String>,
    hidden: Vec<bool>,
    index: HashMap<GroundAtom, AtomId>,
    by_name: HashMap<String, AtomId>,
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, atom: GroundAtom) -> AtomId {
        if let Some(&id) = self.index.get(&atom) {
            return id;
        }
        let id = self.atoms.len();
        let name = atom.to_string();
        self.by_name.insert(name.clone(), id);
        self.index.insert(atom.clone(), id);
        self.atoms.push(atom);
        self.names.push(name);
        self.hidden.push(false);
        id
    }

    pub fn fresh_hidden(&mut self, label: String) -> AtomId {
        let id = self.atoms.len();
        self.atoms.push(GroundAtom::new(label.clone(), Vec::new()));
        self.names.push(label);
        self.hidden.push(true);
        id
    }

    pub fn get(&self, atom: &GroundAtom) -> Option<AtomId> {
        self.index.get(atom).copied()
    }

    pub fn id_of(&self, name: &str) -> Option<AtomId> {
        self.by_name.get(name).copied()
    }

    pub fn atom(&self, id: AtomId) -> &GroundAtom {
        &self.atoms[id]
    }

    pub fn name(&self, id: AtomId) -> &str {
        &self.names[id]
    }

    pub fn is_hidden(&self, id: AtomId) -> bool {
        self.hidden[id]
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn visible(&self) -> impl Iterator<Item = AtomId> + '_ {
        (0..self.len()).filter(|&i| !self.hidden[i])
    }
}
