//! Finite relational structures with basepoints, Gaifman machinery and the
//! substructure comonads `R_k` / `S_k`.

mod gaifman;
mod io;
mod morphism;
mod signature;
mod structure;
mod substructure;

pub use gaifman::{disjoint_sum, disjoint_union, gaifman_distance, gaifman_graph, DistanceMatrix, ExtNat};
pub use io::{from_json, from_json_value, to_json, to_json_value};
pub use morphism::{
    is_homomorphism, is_homomorphism_named, is_partial_homomorphism, is_partial_isomorphism,
    partial_map_violation, MapKind, MapViolation,
};
pub use signature::{Signature, IDENTITY_RELATION};
pub use structure::{PointedStructure, Structure, StructureBuilder};
pub use substructure::{ball_part, ball_set, reachable_part, reachable_set};

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("map out of range: {0}")]
    MapOutOfRange(String),
    #[error("malformed JSON: {0}")]
    Json(String),
}

impl StructureError {
    pub fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        StructureError::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }
}
