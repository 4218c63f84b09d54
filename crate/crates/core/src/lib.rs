//! Exact model counting over non-CNF propositional formulas, plus the
//! product-configuration analytics built on top of it.

pub mod formula;
pub mod counter;
pub mod oracle;
pub mod transform;
pub mod render;
pub mod config;
pub mod synth;

pub use formula::{Assignment, Formula, FormulaArena, FormulaError, Literal, Node, Var, VarSet};
