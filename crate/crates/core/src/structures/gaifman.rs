use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::Add;

use super::{Structure, StructureError};

/// Natural number extended with a top element, used for distances, depths and
/// resource bounds. Ordering puts every finite value below `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Finite(usize),
    Infinite,
}

impl ExtNat {
    pub fn finite(self) -> Option<usize> {
        match self {
            ExtNat::Finite(n) => Some(n),
            ExtNat::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Finite(_))
    }
}

impl From<usize> for ExtNat {
    fn from(n: usize) -> Self {
        ExtNat::Finite(n)
    }
}

impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a.saturating_add(b)),
            _ => ExtNat::Infinite,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(n) => write!(f, "{n}"),
            ExtNat::Infinite => write!(f, "inf"),
        }
    }
}

/// Symmetric adjacency of the Gaifman graph: distinct elements co-occurring in
/// some tuple.
pub fn gaifman_graph(s: &Structure) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); s.len()];
    for tuples in s.relations().values() {
        for t in tuples {
            for (i, &x) in t.iter().enumerate() {
                for &y in &t[i + 1..] {
                    if x != y {
                        adj[x].insert(y);
                        adj[y].insert(x);
                    }
                }
            }
        }
    }
    adj
}

/// All-pairs Gaifman path distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    d: Vec<Vec<ExtNat>>,
}

impl DistanceMatrix {
    pub fn get(&self, x: usize, y: usize) -> ExtNat {
        self.d[x][y]
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// `inf { d(x,y) | x ∈ xs, y ∈ ys }`, infinite for empty sets.
    pub fn set_distance(&self, xs: &[usize], ys: &[usize]) -> ExtNat {
        xs.iter()
            .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.d[x][y])
            .min()
            .unwrap_or(ExtNat::Infinite)
    }

    /// Checks zero diagonal, symmetry and the triangle inequality.
    pub fn is_metric(&self) -> bool {
        let n = self.d.len();
        for x in 0..n {
            if self.d[x][x] != ExtNat::Finite(0) {
                return false;
            }
            for y in 0..n {
                if self.d[x][y] != self.d[y][x] {
                    return false;
                }
                if x != y && self.d[x][y] == ExtNat::Finite(0) {
                    return false;
                }
                for z in 0..n {
                    if self.d[x][z] > self.d[x][y] + self.d[y][z] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Multi-source BFS distances over an adjacency list.
pub(crate) fn bfs(adj: &[BTreeSet<usize>], sources: &[usize]) -> Vec<ExtNat> {
    let mut dist = vec![ExtNat::Infinite; adj.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s] == ExtNat::Infinite {
            dist[s] = ExtNat::Finite(0);
            queue.push_back(s);
        }
    }
    while let Some(x) = queue.pop_front() {
        let next = dist[x] + ExtNat::Finite(1);
        for &y in &adj[x] {
            if dist[y] == ExtNat::Infinite {
                dist[y] = next;
                queue.push_back(y);
            }
        }
    }
    dist
}

pub fn gaifman_distance(s: &Structure) -> DistanceMatrix {
    let adj = gaifman_graph(s);
    let d = (0..s.len()).map(|x| bfs(&adj, &[x])).collect();
    DistanceMatrix { d }
}

/// Disjoint sum of tagged parts; element `x` of the part tagged `t` becomes
/// `t:x`. Basepoints are taken from the part at `basepoints_from`.
pub fn disjoint_sum(
    parts: &[(&str, &Structure)],
    basepoints_from: usize,
) -> Result<Structure, StructureError> {
    let (_, first) = parts
        .get(basepoints_from)
        .ok_or_else(|| StructureError::SignatureMismatch("no basepoint summand".into()))?;
    let signature = first.signature().clone();
    for (tag, p) in parts {
        if !p.signature().same_vocabulary(&signature) {
            return Err(StructureError::SignatureMismatch(format!(
                "summand '{tag}' has a different vocabulary"
            )));
        }
    }
    let mut universe = Vec::new();
    let mut relations: BTreeMap<String, BTreeSet<Vec<usize>>> = BTreeMap::new();
    let mut basepoints = Vec::new();
    for (pi, (tag, p)) in parts.iter().enumerate() {
        let offset = universe.len();
        universe.extend(p.universe().iter().map(|x| format!("{tag}:{x}")));
        for (r, ts) in p.relations() {
            let set = relations.entry(r.clone()).or_default();
            set.extend(ts.iter().map(|t| t.iter().map(|&e| e + offset).collect()));
        }
        if pi == basepoints_from {
            basepoints = p.basepoints().iter().map(|&b| b + offset).collect();
        }
    }
    Ok(Structure::from_indexed(
        signature,
        universe,
        relations,
        basepoints,
    ))
}

/// Coproduct `A + B` pointed by the basepoints of `A`; ids are retagged with
/// `L:` and `R:` prefixes.
pub fn disjoint_union(a: &Structure, b: &Structure) -> Result<Structure, StructureError> {
    if !a.signature().same_vocabulary(b.signature()) {
        return Err(StructureError::SignatureMismatch(
            "disjoint union operands differ in vocabulary".into(),
        ));
    }
    disjoint_sum(&[("L", a), ("R", b)], 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn path3_graph_and_distances() {
        let p = fixtures::path3();
        let adj = gaifman_graph(&p);
        assert_eq!(adj[0], BTreeSet::from([1]));
        assert_eq!(adj[1], BTreeSet::from([0, 2]));
        assert_eq!(adj[2], BTreeSet::from([1]));
        let d = gaifman_distance(&p);
        assert_eq!(d.get(0, 2), ExtNat::Finite(2));
        assert!(d.is_metric());
    }

    #[test]
    fn empty_relations_have_no_edges() {
        let s = fixtures::isolated_pair();
        assert!(gaifman_graph(&s).iter().all(BTreeSet::is_empty));
        let single = fixtures::point();
        assert_eq!(gaifman_distance(&single).get(0, 0), ExtNat::Finite(0));
    }

    #[test]
    fn ternary_tuple_is_a_triangle() {
        let sig = crate::structures::Signature::new([("R", 3)], Vec::<String>::new(), 0).unwrap();
        let s = Structure::builder(sig)
            .elements(["a", "b", "c"])
            .tuple("R", ["a", "b", "c"])
            .build()
            .unwrap();
        let adj = gaifman_graph(&s);
        assert_eq!(adj[0], BTreeSet::from([1, 2]));
        assert_eq!(adj[1], BTreeSet::from([0, 2]));
        assert_eq!(adj[2], BTreeSet::from([0, 1]));
    }

    #[test]
    fn union_summands_are_infinitely_far() {
        let a = fixtures::path3();
        let b = fixtures::star(3);
        let u = disjoint_union(&a, &b).unwrap();
        assert_eq!(u.len(), 7);
        assert_eq!(u.name(u.basepoints()[0]), "L:a");
        let d = gaifman_distance(&u);
        let x = u.index_of("L:a").unwrap();
        let y = u.index_of("R:r").unwrap();
        assert_eq!(d.get(x, y), ExtNat::Infinite);
        assert!(d.is_metric());
    }

    #[test]
    fn union_rejects_vocabulary_mismatch() {
        let a = fixtures::path3();
        let b = fixtures::bounded_two_constants();
        assert!(matches!(
            disjoint_union(&a, &b),
            Err(StructureError::SignatureMismatch(_))
        ));
    }

    #[test]
    fn extnat_saturates() {
        assert_eq!(ExtNat::Finite(2) + ExtNat::Infinite, ExtNat::Infinite);
        assert_eq!(ExtNat::Finite(usize::MAX) + ExtNat::Finite(1), ExtNat::Finite(usize::MAX));
        assert!(ExtNat::Finite(1_000_000) < ExtNat::Infinite);
    }
}
