//! Hybrid logic and first-order logic with bounded and counting
//! quantifiers: syntax, semantics, the standard translation, and
//! formula-producing constructions.

mod characteristic;
mod fo;
mod hybrid;
mod parse;
pub mod random;
mod relativize;
mod translate;

pub use characteristic::{
    atomic_type, bf_type, characteristic_formula, characteristic_formula_with, characteristic_hybrid,
    scott_formula, scott_type, AtomicType, BfType, Branch, Direction, ScottType,
};
pub use fo::{eval_fo, is_bounded, quantifier_rank, Assignment, Fo, Guard, Term};
pub use hybrid::{eval_hybrid, hybrid_depth, AtTarget, Hybrid};
pub use parse::{parse_fo, parse_fo_with, parse_hybrid, parse_hybrid_with, ParseOptions};
pub use relativize::{distance_at_most, gaifman_relativize};
pub use translate::{standard_translation, standard_translation_over};

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unbound world variable '{name}' at offset {pos}")]
    Scope { name: String, pos: usize },
    #[error("constant c{index} at offset {pos} is out of range (structures have {max} basepoints)")]
    NominalRange { index: usize, max: usize, pos: usize },
    #[error("unbound variable '{0}'")]
    UnboundVariable(String),
    #[error("constant c{0} has no basepoint")]
    MissingConstant(usize),
    #[error("relation '{0}' is not in the signature")]
    UnknownRelation(String),
    #[error("relation '{relation}' has arity {expected}, used with {found} arguments")]
    Arity {
        relation: String,
        expected: usize,
        found: usize,
    },
    #[error("modal operators need exactly one transition relation, found {0}")]
    NotUnimodal(usize),
}
