//! Grounding, fixpoints and model search.

mod eval;
mod ground;
mod solve;
mod table;

pub use eval::{least_fixpoint, stratified_model, tp_step, well_founded_model, ThreeValuedModel};
pub use ground::{
    ground, ground_with, Conj, GroundAggregate, GroundChoice, GroundConstraint, GroundElement, GroundOptions,
    GroundProgram, GroundRule, GroundWeight, MAX_DOMAIN,
};
pub use solve::{candidate_models, debug_solve, optimize, stable_models, Candidate, DebugResult, Optimum, Violation};
pub use table::{AtomId, AtomTable};

use crate::transform::TransformError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("line {line}: unsafe variable `{var}`")]
    Unsafe { line: usize, var: String },
    #[error("line {line}: {message}")]
    Arithmetic { line: usize, message: String },
    #[error("line {line}: unsupported {message}")]
    Unsupported { line: usize, message: String },
    #[error("grounding too large: {0}")]
    TooLarge(String),
    #[error("line {line}: rule is not definite")]
    NotDefinite { line: usize },
    #[error("program is not austere: {0}")]
    NotAustere(String),
    #[error("program is not normal: {0}")]
    NotNormal(String),
    #[error("line {line}: `{atom}` depends negatively on itself")]
    Stratification { line: usize, atom: String },
    #[error("{count} choice atoms exceed the limit of {cap} (raise --max-choices)")]
    TooManyChoices { count: usize, cap: usize },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Upper bound on the number of atoms to branch on.
    pub max_choices: usize,
    /// Stop after this many models; 0 means all.
    pub max_models: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_choices: 24, max_models: 0 }
    }
}

#[cfg(test)]
mod tests;
