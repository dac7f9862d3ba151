use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::{Signature, StructureError};

/// A finite relational structure with an ordered universe and an m-tuple of
/// basepoints (the interpretations of the constants `c1..cm`).
///
/// Elements are addressed by their position in the universe; names are kept
/// for input and output only. Tuples are stored sorted, so two structures
/// built from the same data compare equal regardless of input order.
#[derive(Clone)]
pub struct Structure {
    signature: Signature,
    universe: Vec<String>,
    index: HashMap<String, usize>,
    relations: BTreeMap<String, BTreeSet<Vec<usize>>>,
    basepoints: Vec<usize>,
}

/// Structures carry their basepoints; the alias documents intent at call sites.
pub type PointedStructure = Structure;

static EMPTY: BTreeSet<Vec<usize>> = BTreeSet::new();

impl Structure {
    /// Builds a structure from named elements, validating every invariant.
    pub fn new<S: AsRef<str>>(
        signature: Signature,
        universe: Vec<String>,
        relations: BTreeMap<String, Vec<Vec<S>>>,
        basepoints: Vec<S>,
    ) -> Result<Self, StructureError> {
        let mut index = HashMap::with_capacity(universe.len());
        for (i, name) in universe.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(StructureError::invalid(
                    format!("universe[{i}]"),
                    format!("duplicate element '{name}'"),
                ));
            }
        }
        let mut rels: BTreeMap<String, BTreeSet<Vec<usize>>> = signature
            .relations()
            .keys()
            .map(|r| (r.clone(), BTreeSet::new()))
            .collect();
        for (name, tuples) in &relations {
            let Some(arity) = signature.arity(name) else {
                return Err(StructureError::invalid(
                    format!("relations.{name}"),
                    "symbol not in signature",
                ));
            };
            let set = rels.get_mut(name).expect("initialized above");
            for (ti, tuple) in tuples.iter().enumerate() {
                if tuple.len() != arity {
                    return Err(StructureError::invalid(
                        format!("relations.{name}[{ti}]"),
                        format!("tuple has length {}, expected arity {arity}", tuple.len()),
                    ));
                }
                let mut idx = Vec::with_capacity(arity);
                for (ei, e) in tuple.iter().enumerate() {
                    let e = e.as_ref();
                    match index.get(e) {
                        Some(&i) => idx.push(i),
                        None => {
                            return Err(StructureError::invalid(
                                format!("relations.{name}[{ti}][{ei}]"),
                                format!("'{e}' not in universe"),
                            ))
                        }
                    }
                }
                set.insert(idx);
            }
        }
        if basepoints.len() != signature.num_basepoints() {
            return Err(StructureError::invalid(
                "basepoints",
                format!(
                    "expected {} basepoints, found {}",
                    signature.num_basepoints(),
                    basepoints.len()
                ),
            ));
        }
        let mut bps = Vec::with_capacity(basepoints.len());
        for (i, b) in basepoints.iter().enumerate() {
            let b = b.as_ref();
            match index.get(b) {
                Some(&x) => bps.push(x),
                None => {
                    return Err(StructureError::invalid(
                        format!("basepoints[{i}]"),
                        format!("'{b}' not in universe"),
                    ))
                }
            }
        }
        Ok(Structure {
            signature,
            universe,
            index,
            relations: rels,
            basepoints: bps,
        })
    }

    /// Trusted constructor for data already expressed in indices.
    pub(crate) fn from_indexed(
        signature: Signature,
        universe: Vec<String>,
        mut relations: BTreeMap<String, BTreeSet<Vec<usize>>>,
        basepoints: Vec<usize>,
    ) -> Self {
        for r in signature.relations().keys() {
            relations.entry(r.clone()).or_default();
        }
        debug_assert_eq!(basepoints.len(), signature.num_basepoints());
        debug_assert!(relations
            .iter()
            .all(|(r, ts)| ts.iter().all(|t| Some(t.len()) == signature.arity(r)
                && t.iter().all(|&e| e < universe.len()))));
        let index = universe
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        Structure {
            signature,
            universe,
            index,
            relations,
            basepoints,
        }
    }

    pub fn builder(signature: Signature) -> StructureBuilder {
        StructureBuilder {
            signature,
            universe: Vec::new(),
            relations: BTreeMap::new(),
            basepoints: Vec::new(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn name(&self, element: usize) -> &str {
        &self.universe[element]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn basepoints(&self) -> &[usize] {
        &self.basepoints
    }

    pub fn relations(&self) -> &BTreeMap<String, BTreeSet<Vec<usize>>> {
        &self.relations
    }

    pub fn tuples(&self, relation: &str) -> &BTreeSet<Vec<usize>> {
        self.relations.get(relation).unwrap_or(&EMPTY)
    }

    pub fn holds(&self, relation: &str, tuple: &[usize]) -> bool {
        self.relations
            .get(relation)
            .is_some_and(|set| set.contains(tuple))
    }

    /// Union of all transition relations as successor lists.
    pub fn transition_successors(&self) -> Vec<BTreeSet<usize>> {
        let mut succ = vec![BTreeSet::new(); self.len()];
        for t in self.signature.transitions() {
            for tuple in self.tuples(t) {
                succ[tuple[0]].insert(tuple[1]);
            }
        }
        succ
    }

    pub fn transition_predecessors(&self) -> Vec<BTreeSet<usize>> {
        let mut pred = vec![BTreeSet::new(); self.len()];
        for t in self.signature.transitions() {
            for tuple in self.tuples(t) {
                pred[tuple[1]].insert(tuple[0]);
            }
        }
        pred
    }

    /// Substructure induced on `keep`, preserving universe order and basepoints.
    ///
    /// Panics if a basepoint is not kept.
    pub fn induced_substructure(&self, keep: &BTreeSet<usize>) -> Structure {
        let mut remap = vec![usize::MAX; self.len()];
        let mut universe = Vec::with_capacity(keep.len());
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
            universe.push(self.universe[old].clone());
        }
        let relations = self
            .relations
            .iter()
            .map(|(r, ts)| {
                let kept = ts
                    .iter()
                    .filter(|t| t.iter().all(|e| keep.contains(e)))
                    .map(|t| t.iter().map(|&e| remap[e]).collect())
                    .collect();
                (r.clone(), kept)
            })
            .collect();
        let basepoints = self
            .basepoints
            .iter()
            .map(|&b| {
                assert!(keep.contains(&b), "induced substructure must keep basepoints");
                remap[b]
            })
            .collect();
        Structure::from_indexed(self.signature.clone(), universe, relations, basepoints)
    }

    /// Renames every element; `rename` must be injective.
    pub fn relabel(&self, rename: impl Fn(&str) -> String) -> Structure {
        let universe = self.universe.iter().map(|n| rename(n)).collect();
        Structure::from_indexed(
            self.signature.clone(),
            universe,
            self.relations.clone(),
            self.basepoints.clone(),
        )
    }

    /// Isomorphic copy whose universe lists the old elements in `order`.
    pub fn reorder(&self, order: &[usize]) -> Structure {
        assert_eq!(order.len(), self.len());
        let mut remap = vec![0; self.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let universe = order.iter().map(|&o| self.universe[o].clone()).collect();
        let relations = self
            .relations
            .iter()
            .map(|(r, ts)| {
                (
                    r.clone(),
                    ts.iter()
                        .map(|t| t.iter().map(|&e| remap[e]).collect())
                        .collect(),
                )
            })
            .collect();
        let basepoints = self.basepoints.iter().map(|&b| remap[b]).collect();
        Structure::from_indexed(self.signature.clone(), universe, relations, basepoints)
    }

    /// Same structure over a different number of constants.
    pub fn with_basepoints(&self, basepoints: Vec<usize>) -> Structure {
        Structure::from_indexed(
            self.signature.with_basepoints(basepoints.len()),
            self.universe.clone(),
            self.relations.clone(),
            basepoints,
        )
    }

    /// The same structure over the signature extended by `I`, interpreted
    /// as the identity relation.
    pub fn with_identity_relation(&self) -> Structure {
        let mut relations = self.relations.clone();
        relations.insert(
            super::IDENTITY_RELATION.to_string(),
            (0..self.len()).map(|x| vec![x, x]).collect(),
        );
        Structure::from_indexed(
            self.signature.with_identity(),
            self.universe.clone(),
            relations,
            self.basepoints.clone(),
        )
    }

    pub fn format_tuple(&self, relation: &str, tuple: &[usize]) -> String {
        let args: Vec<&str> = tuple.iter().map(|&e| self.name(e)).collect();
        format!("{relation}({})", args.join(","))
    }
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature
            && self.universe == other.universe
            && self.relations == other.relations
            && self.basepoints == other.basepoints
    }
}

impl Eq for Structure {}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        write!(f, "{}", self.universe.join(" "))?;
        for (r, ts) in &self.relations {
            for t in ts {
                write!(f, "; {}", self.format_tuple(r, t))?;
            }
        }
        let bps: Vec<&str> = self.basepoints.iter().map(|&b| self.name(b)).collect();
        write!(f, " @ {}}}", bps.join(","))
    }
}

/// Incremental construction of small structures, mostly for fixtures.
pub struct StructureBuilder {
    signature: Signature,
    universe: Vec<String>,
    relations: BTreeMap<String, Vec<Vec<String>>>,
    basepoints: Vec<String>,
}

impl StructureBuilder {
    pub fn elements<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.universe.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn tuple<S: Into<String>>(
        mut self,
        relation: &str,
        tuple: impl IntoIterator<Item = S>,
    ) -> Self {
        self.relations
            .entry(relation.to_string())
            .or_default()
            .push(tuple.into_iter().map(Into::into).collect());
        self
    }

    pub fn edge(self, from: &str, to: &str) -> Self {
        self.tuple("E", [from, to])
    }

    pub fn basepoints<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.basepoints = names.into_iter().map(Into::into).collect();
        self
    }

    pub fn build(self) -> Result<Structure, StructureError> {
        Structure::new(self.signature, self.universe, self.relations, self.basepoints)
    }
}
