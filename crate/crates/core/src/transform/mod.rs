//! Source-to-source translations.

mod formula;
mod program;
mod rewrite;

pub use formula::{extend_by_definition, negocc, substitute, translate_formula, FormulaTranslation};
pub use program::{negation_aux, translate_program, translate_rule, AustereQuadruple, AuxContext, ProgramTranslation};
pub use rewrite::{
    choice_to_normal, choices_to_normal, complement_atom, constraint_id, debug_transform, eliminate_aggregate_head,
    eliminate_aggregate_heads, VIOLATION_PREDICATE,
};

use crate::syntax::{Literal, Program, Rule};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("atom `{0}` uses the reserved prefix")]
    ReservedName(String),
    #[error("line {line}: rule is not ground; ground the program first")]
    NotGround { line: usize },
    #[error("line {line}: {reason}")]
    NotNormal { line: usize, reason: String },
    #[error("line {line}: unsupported {message}")]
    Unsupported { line: usize, message: String },
    #[error("name `{0}` is already used by the program")]
    NameClash(String),
    #[error("{0}")]
    Invalid(String),
}

/// Negative body literals of a rule, in order, without repetition.
pub fn rule_negocc(rule: &Rule) -> Vec<Literal> {
    let mut out: Vec<Literal> = Vec::new();
    for l in rule.body_literals().filter(|l| l.is_negative()) {
        if !out.contains(l) {
            out.push(l.clone());
        }
    }
    out
}

/// Negative body literals of a whole program.
pub fn program_negocc(program: &Program) -> Vec<Literal> {
    let mut out: Vec<Literal> = Vec::new();
    for l in program.rules.iter().flat_map(rule_negocc) {
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out
}
