//! Dependency analysis, stratification and program classes.

mod classify;
mod graph;
mod strata;
mod unique;

pub use classify::{
    check_austere, check_stratified_negation, classify_easy, AustereReport, EasyDecomposition, NegationReport,
};
pub use graph::{body_uses, definitions, dependency_graph, head_nodes, DependencyGraph, Node, Polarity, Witness};
pub use strata::{render_lines, stratify, Stratification, Stratum, StratumKind};
pub use unique::{check_unique_extension, Sampler, UniqueReport, UniqueSample};

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Lint,
}

impl Severity {
    fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Lint => "lint",
        }
    }

    fn color(self) -> &'static str {
        match self {
            Severity::Error => "\x1b[31m",
            Severity::Warning => "\x1b[33m",
            Severity::Lint => "\x1b[36m",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A finding about one rule; `rule` holds the rule's text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub line: usize,
    pub rule: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(severity: Severity, line: usize, rule: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { severity, line, rule: rule.into(), message: message.into() }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// The text form, optionally with ANSI colors on the severity.
    pub fn render(&self, color: bool) -> String {
        let sev = if color {
            format!("{}{}\x1b[0m", self.severity.color(), self.severity)
        } else {
            self.severity.to_string()
        };
        format!("{sev}: rule@{}: {}", self.line, self.message)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

#[cfg(test)]
mod tests;
