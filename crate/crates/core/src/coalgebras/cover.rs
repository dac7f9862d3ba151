use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::{CoverError, MAX_ENUMERATION_SIZE};
use crate::comonads::ComonadKind;
use crate::structures::{gaifman_graph, ExtNat, Structure};

/// A tree order on the universe, given by its covering relation: each
/// element's parent, `None` at the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeCover {
    pub parent: Vec<Option<usize>>,
}

/// First reason a parent map fails to be a generated tree cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverViolation {
    WrongLength { expected: usize, found: usize },
    Cyclic(usize),
    /// The order does not start with the chain of basepoints.
    Basepoints,
    /// A second root besides the first basepoint.
    ExtraRoot(usize),
    Incomparable(usize, usize),
    NotGenerated(usize),
    TooHigh { height: usize, bound: usize },
}

impl CoverViolation {
    pub fn describe(&self, s: &Structure) -> String {
        match self {
            CoverViolation::WrongLength { expected, found } => {
                format!("parent map has {found} entries for {expected} elements")
            }
            CoverViolation::Cyclic(x) => format!("parent map is cyclic at {}", s.name(*x)),
            CoverViolation::Basepoints => "basepoints do not form the initial chain".into(),
            CoverViolation::ExtraRoot(x) => format!("{} is a second root", s.name(*x)),
            CoverViolation::Incomparable(x, y) => {
                format!("adjacent {} and {} lie on different branches", s.name(*x), s.name(*y))
            }
            CoverViolation::NotGenerated(x) => format!("{} is not seen from any element below it", s.name(*x)),
            CoverViolation::TooHigh { height, bound } => format!("height {height} exceeds {bound}"),
        }
    }
}

impl TreeCover {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Root-to-`x` branch, or `None` if the parent map cycles.
    pub fn branch(&self, x: usize) -> Option<Vec<usize>> {
        let mut chain = vec![x];
        let mut cur = x;
        while let Some(p) = self.parent[cur] {
            if chain.len() > self.parent.len() {
                return None;
            }
            chain.push(p);
            cur = p;
        }
        chain.reverse();
        Some(chain)
    }

    /// `x ≤ y` in the tree order.
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.branch(y).is_some_and(|b| b.contains(&x))
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.le(x, y) || self.le(y, x)
    }

    /// Number of elements on a longest chain.
    pub fn height(&self) -> usize {
        (0..self.len()).filter_map(|x| self.branch(x)).map(|b| b.len()).max().unwrap_or(0)
    }

    pub fn children(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.parent[y] == Some(x)).collect()
    }

    /// Checks the cover conditions; with `bound = Some(k)`, also that the
    /// height less the number of basepoints is at most `k`.
    pub fn violation(&self, s: &Structure, kind: ComonadKind, bound: Option<usize>) -> Option<CoverViolation> {
        let n = s.len();
        if self.len() != n {
            return Some(CoverViolation::WrongLength {
                expected: n,
                found: self.len(),
            });
        }
        let mut branches = Vec::with_capacity(n);
        for x in 0..n {
            match self.branch(x) {
                Some(b) => branches.push(b),
                None => return Some(CoverViolation::Cyclic(x)),
            }
        }
        let bps = s.basepoints();
        let m = bps.len();
        if m == 0 {
            return Some(CoverViolation::Basepoints);
        }
        for (i, &b) in bps.iter().enumerate() {
            if branches[b] != bps[..=i] {
                return Some(CoverViolation::Basepoints);
            }
        }
        let top = bps[m - 1];
        for x in 0..n {
            if self.parent[x].is_none() && x != bps[0] {
                return Some(CoverViolation::ExtraRoot(x));
            }
            if !bps.contains(&x) && !branches[x].contains(&top) {
                return Some(CoverViolation::Basepoints);
            }
        }
        let adj = gaifman_graph(s);
        for x in 0..n {
            for &y in &adj[x] {
                if x < y && !branches[y].contains(&x) && !branches[x].contains(&y) {
                    return Some(CoverViolation::Incomparable(x, y));
                }
            }
        }
        for x in 0..n {
            let b = &branches[x];
            if b.len() > m && !kind.admits(s, &b[..b.len() - 1], x) {
                return Some(CoverViolation::NotGenerated(x));
            }
        }
        // The modal carrier only relates a play to its one-step extensions.
        if kind == ComonadKind::Modal {
            for r in s.signature().transitions() {
                for t in s.tuples(r) {
                    if self.parent[t[1]] != Some(t[0]) {
                        return Some(CoverViolation::NotGenerated(t[1]));
                    }
                }
            }
        }
        if let Some(k) = bound {
            let height = self.height();
            if height > k + m {
                return Some(CoverViolation::TooHigh { height, bound: k + m });
            }
        }
        None
    }
}

/// Whether `t` is a generated tree cover of `s` (for the accessibility
/// notion of `kind`), of height at most `k + m` when a bound is given.
pub fn is_generated_tree_cover(
    s: &Structure,
    t: &TreeCover,
    kind: ComonadKind,
    bound: Option<usize>,
) -> Result<bool, CoverError> {
    if t.len() == s.len() {
        if let Some(x) = (0..t.len()).find(|&x| t.branch(x).is_none()) {
            return Err(CoverError::Cyclic(s.name(x).to_string()));
        }
    }
    Ok(t.violation(s, kind, bound).is_none())
}

/// Every generated tree cover of `s`, parents chosen in universe order.
pub fn enumerate_generated_covers(s: &Structure, kind: ComonadKind) -> Result<Vec<TreeCover>, CoverError> {
    let n = s.len();
    if n > MAX_ENUMERATION_SIZE {
        return Err(CoverError::TooLarge {
            size: n,
            limit: MAX_ENUMERATION_SIZE,
        });
    }
    let bps = s.basepoints();
    let mut fixed: Vec<Option<Option<usize>>> = vec![None; n];
    for (i, &b) in bps.iter().enumerate() {
        let p = if i == 0 { None } else { Some(bps[i - 1]) };
        if fixed[b].is_some() {
            return Ok(Vec::new()); // repeated basepoint: no chain
        }
        fixed[b] = Some(p);
    }
    let mut out = Vec::new();
    let mut parent: Vec<Option<usize>> = fixed.iter().map(|f| f.flatten()).collect();
    fn go(
        x: usize,
        s: &Structure,
        kind: ComonadKind,
        fixed: &[Option<Option<usize>>],
        parent: &mut Vec<Option<usize>>,
        out: &mut Vec<TreeCover>,
    ) {
        if x == parent.len() {
            let t = TreeCover { parent: parent.clone() };
            if t.violation(s, kind, None).is_none() {
                out.push(t);
            }
            return;
        }
        if let Some(p) = fixed[x] {
            parent[x] = p;
            go(x + 1, s, kind, fixed, parent, out);
            return;
        }
        for p in 0..parent.len() {
            if p != x && !closes_cycle(parent, fixed, x, p) {
                parent[x] = Some(p);
                go(x + 1, s, kind, fixed, parent, out);
            }
        }
    }
    if bps.is_empty() {
        return Ok(out);
    }
    go(0, s, kind, &fixed, &mut parent, &mut out);
    Ok(out)
}

/// Whether setting `parent[x] = p` closes a cycle among already assigned
/// entries (those below `x`, plus the fixed basepoint chain).
fn closes_cycle(parent: &[Option<usize>], fixed: &[Option<Option<usize>>], x: usize, p: usize) -> bool {
    let mut cur = p;
    for _ in 0..parent.len() {
        if cur == x {
            return true;
        }
        if cur > x && fixed[cur].is_none() {
            return false;
        }
        match parent[cur] {
            Some(q) => cur = q,
            None => return false,
        }
    }
    true
}

/// A generated cover of least height (least in enumeration order among
/// those), if any.
pub fn minimal_generated_cover(s: &Structure, kind: ComonadKind) -> Result<Option<TreeCover>, CoverError> {
    let covers = enumerate_generated_covers(s, kind)?;
    Ok(covers.into_iter().min_by_key(|t| t.height()))
}

/// Minimum height of a generated tree cover, counting nodes on the longest
/// chain; infinite when there is none.
pub fn generated_tree_depth(s: &Structure, kind: ComonadKind) -> Result<ExtNat, CoverError> {
    Ok(match minimal_generated_cover(s, kind)? {
        Some(t) => ExtNat::Finite(t.height()),
        None => ExtNat::Infinite,
    })
}

/// `{"parent": {"b": "a", "c": "b"}}`; elements without an entry are roots.
pub fn cover_from_json(text: &str, s: &Structure) -> Result<TreeCover, CoverError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CoverError::Invalid(e.to_string()))?;
    let obj = v
        .get("parent")
        .and_then(Value::as_object)
        .ok_or_else(|| CoverError::Invalid("parent: expected an object".into()))?;
    let mut parent = vec![None; s.len()];
    for (child, p) in obj {
        let c = s
            .index_of(child)
            .ok_or_else(|| CoverError::Invalid(format!("parent.{child}: not in universe")))?;
        let p = p
            .as_str()
            .ok_or_else(|| CoverError::Invalid(format!("parent.{child}: expected a string")))?;
        let pi = s
            .index_of(p)
            .ok_or_else(|| CoverError::Invalid(format!("parent.{child}: '{p}' not in universe")))?;
        parent[c] = Some(pi);
    }
    Ok(TreeCover { parent })
}

pub fn cover_to_json(t: &TreeCover, s: &Structure) -> String {
    let map: BTreeMap<&str, &str> = t
        .parent
        .iter()
        .enumerate()
        .filter_map(|(c, p)| p.map(|p| (s.name(c), s.name(p))))
        .collect();
    serde_json::to_string(&json!({ "parent": map })).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cover(s: &Structure, edges: &[(&str, &str)]) -> TreeCover {
        let mut parent = vec![None; s.len()];
        for &(c, p) in edges {
            parent[s.index_of(c).unwrap()] = Some(s.index_of(p).unwrap());
        }
        TreeCover { parent }
    }

    #[test]
    fn path3_chain_and_star() {
        let p = fixtures::path3();
        let chain = cover(&p, &[("b", "a"), ("c", "b")]);
        assert_eq!(is_generated_tree_cover(&p, &chain, ComonadKind::Hybrid, None), Ok(true));
        assert_eq!(chain.height(), 3);
        let flat = cover(&p, &[("b", "a"), ("c", "a")]);
        assert_eq!(
            flat.violation(&p, ComonadKind::Hybrid, None),
            Some(CoverViolation::Incomparable(1, 2))
        );
        let s = fixtures::graph(&["a", "b", "c"], &[("a", "b"), ("a", "c")], &[]);
        let t = cover(&s, &[("b", "a"), ("c", "a")]);
        assert_eq!(is_generated_tree_cover(&s, &t, ComonadKind::Hybrid, Some(1)), Ok(true));
        assert_eq!(t.height(), 2);
    }

    #[test]
    fn depths() {
        assert_eq!(generated_tree_depth(&fixtures::path3(), ComonadKind::Hybrid), Ok(ExtNat::Finite(3)));
        assert_eq!(generated_tree_depth(&fixtures::star(3), ComonadKind::Hybrid), Ok(ExtNat::Finite(2)));
        assert_eq!(generated_tree_depth(&fixtures::isolated_pair(), ComonadKind::Hybrid), Ok(ExtNat::Infinite));
        assert_eq!(generated_tree_depth(&fixtures::point(), ComonadKind::Hybrid), Ok(ExtNat::Finite(1)));
        // reachable only backwards
        assert_eq!(generated_tree_depth(&fixtures::back_edge(), ComonadKind::Hybrid), Ok(ExtNat::Infinite));
        assert_eq!(
            generated_tree_depth(&fixtures::back_edge(), ComonadKind::HybridTemporal),
            Ok(ExtNat::Finite(2))
        );
    }

    #[test]
    fn cyclic_parent_map_is_an_error() {
        let p = fixtures::path3();
        let t = cover(&p, &[("b", "c"), ("c", "b")]);
        assert!(matches!(
            is_generated_tree_cover(&p, &t, ComonadKind::Hybrid, None),
            Err(CoverError::Cyclic(_))
        ));
    }

    #[test]
    fn bounded_covers_start_with_the_basepoint_chain() {
        let s = fixtures::bounded_two_constants();
        let covers = enumerate_generated_covers(&s, ComonadKind::Bounded).unwrap();
        assert!(!covers.is_empty());
        for t in &covers {
            assert_eq!(t.parent[1], Some(0));
            assert!(t.height() - 2 <= 1);
        }
    }

    #[test]
    fn json_round_trip() {
        let p = fixtures::path3();
        let t = cover(&p, &[("b", "a"), ("c", "b")]);
        let text = cover_to_json(&t, &p);
        assert_eq!(text, r#"{"parent":{"b":"a","c":"b"}}"#);
        assert_eq!(cover_from_json(&text, &p), Ok(t));
        assert!(cover_from_json(r#"{"parent":{"z":"a"}}"#, &p).is_err());
    }
}
