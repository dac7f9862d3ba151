use std::collections::{BTreeMap, BTreeSet};

use super::StructureError;

/// Name of the equality-tracking relation injected into comonad carriers.
/// User signatures may never declare it.
pub const IDENTITY_RELATION: &str = "I";

/// A bounded relational vocabulary: relation symbols with arities, the
/// binary symbols designated as transition relations, and the number of
/// constants (basepoints) every structure over it carries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    relations: BTreeMap<String, usize>,
    transitions: BTreeSet<String>,
    num_basepoints: usize,
}

impl Signature {
    pub fn new<R, T, S1, S2>(
        relations: R,
        transitions: T,
        num_basepoints: usize,
    ) -> Result<Self, StructureError>
    where
        R: IntoIterator<Item = (S1, usize)>,
        T: IntoIterator<Item = S2>,
        S1: Into<String>,
        S2: Into<String>,
    {
        let mut rels = BTreeMap::new();
        for (name, arity) in relations {
            let name = name.into();
            if name == IDENTITY_RELATION {
                return Err(StructureError::invalid(
                    format!("signature.relations.{name}"),
                    "reserved relation symbol",
                ));
            }
            if name.is_empty() {
                return Err(StructureError::invalid(
                    "signature.relations",
                    "empty relation symbol",
                ));
            }
            if arity == 0 {
                return Err(StructureError::invalid(
                    format!("signature.relations.{name}"),
                    "arity must be positive",
                ));
            }
            rels.insert(name, arity);
        }
        let mut trans = BTreeSet::new();
        for (i, name) in transitions.into_iter().enumerate() {
            let name = name.into();
            match rels.get(&name) {
                None => {
                    return Err(StructureError::invalid(
                        format!("signature.transitions[{i}]"),
                        format!("'{name}' is not a declared relation"),
                    ))
                }
                Some(&a) if a != 2 => {
                    return Err(StructureError::invalid(
                        format!("signature.transitions[{i}]"),
                        format!("transition '{name}' must be binary, has arity {a}"),
                    ))
                }
                _ => {}
            }
            trans.insert(name);
        }
        Ok(Signature {
            relations: rels,
            transitions: trans,
            num_basepoints,
        })
    }

    /// Unimodal vocabulary `{E} ∪ unary`, one basepoint.
    pub fn unimodal<S: Into<String>>(
        unary: impl IntoIterator<Item = S>,
    ) -> Result<Self, StructureError> {
        let mut rels: Vec<(String, usize)> = vec![("E".to_string(), 2)];
        rels.extend(unary.into_iter().map(|p| (p.into(), 1)));
        Signature::new(rels, ["E"], 1)
    }

    pub fn relations(&self) -> &BTreeMap<String, usize> {
        &self.relations
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.relations.get(name).copied()
    }

    pub fn transitions(&self) -> &BTreeSet<String> {
        &self.transitions
    }

    pub fn is_transition(&self, name: &str) -> bool {
        self.transitions.contains(name)
    }

    pub fn num_basepoints(&self) -> usize {
        self.num_basepoints
    }

    /// Exactly one transition relation, every other symbol unary.
    pub fn is_unimodal(&self) -> bool {
        self.transitions.len() == 1
            && self
                .relations
                .iter()
                .all(|(name, &arity)| self.transitions.contains(name) || arity == 1)
    }

    /// The single transition symbol of a unimodal signature.
    pub fn unimodal_transition(&self) -> Option<&str> {
        if self.is_unimodal() {
            self.transitions.iter().next().map(String::as_str)
        } else {
            None
        }
    }

    pub fn has_identity(&self) -> bool {
        self.relations.contains_key(IDENTITY_RELATION)
    }

    /// Same vocabulary plus the binary `I` symbol, which is never a transition.
    pub(crate) fn with_identity(&self) -> Signature {
        let mut s = self.clone();
        s.relations.insert(IDENTITY_RELATION.to_string(), 2);
        s
    }

    pub(crate) fn with_basepoints(&self, m: usize) -> Signature {
        let mut s = self.clone();
        s.num_basepoints = m;
        s
    }

    /// Vocabularies agree on relations and transitions (constants may differ).
    pub fn same_vocabulary(&self, other: &Signature) -> bool {
        self.relations == other.relations && self.transitions == other.transitions
    }
}
