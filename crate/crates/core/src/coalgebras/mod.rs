//! Generated tree covers and their correspondence with comonad coalgebras,
//! generated tree depth, coalgebra numbers, and path-based predicates on
//! cover morphisms.

mod coalgebra;
mod cover;
mod open;

pub use coalgebra::{
    check_coalgebra_laws, coalgebra_number, coalgebra_to_cover, cover_to_coalgebra, enumerate_coalgebras, Coalgebra,
    CoalgebraReport,
};
pub use cover::{
    cover_from_json, cover_to_json, enumerate_generated_covers, generated_tree_depth, is_generated_tree_cover,
    minimal_generated_cover, CoverViolation, TreeCover,
};
pub use open::{check_open_pathwise_embedding, is_cover_morphism, is_pathwise_embedding};

use thiserror::Error;

use crate::comonads::ComonadError;

/// Covers and coalgebras are enumerated exhaustively; beyond this many
/// elements the search is refused.
pub const MAX_ENUMERATION_SIZE: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("parent map is cyclic at {0}")]
    Cyclic(String),
    #[error("invalid cover: {0}")]
    Invalid(String),
    #[error("not a generated tree cover: {0}")]
    NotGenerated(String),
    #[error("coalgebra laws fail: {0}")]
    LawsFail(String),
    #[error("structure has {size} elements; exhaustive search is limited to {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("not a morphism of covers: {0}")]
    NotCoverMorphism(String),
    #[error(transparent)]
    Comonad(#[from] ComonadError),
}
