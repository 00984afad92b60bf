//! Analysis, translation and evaluation of answer set programs.

pub mod analysis;
pub mod cli;
pub mod engine;
pub mod ht;
pub mod syntax;
pub mod transform;
