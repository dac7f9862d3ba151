//! The play comonads `E_k`, `M_k`, `H_k`, `H_k^±` and `B_k` as explicit
//! finite structures, with counit, coKleisli extension, law checking and
//! coKleisli-morphism search.

mod kleisli;
mod search;

pub use kleisli::{
    check_comonad_laws, check_comonad_laws_with, cokleisli_extension, comultiplication, counit,
    lift_homomorphism, LawReport,
};
pub use search::{find_cokleisli_morphism, find_cokleisli_morphism_ordered, CoKleisliMorphism};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::structures::{Structure, IDENTITY_RELATION};

/// A play: a non-empty sequence of elements of the base structure.
pub type Play = Vec<usize>;

/// Default cap on the number of plays a carrier may have.
pub const DEFAULT_PLAY_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComonadKind {
    /// Every sequence extending the basepoints.
    Ef,
    /// Each move is a successor of the previous one.
    Modal,
    /// Each move is a successor of some earlier move.
    Hybrid,
    /// Each move is a successor or predecessor of some earlier move.
    HybridTemporal,
    /// Each move is seen from some earlier move along some transition.
    Bounded,
}

impl ComonadKind {
    pub const ALL: [ComonadKind; 5] = [
        ComonadKind::Ef,
        ComonadKind::Modal,
        ComonadKind::Hybrid,
        ComonadKind::HybridTemporal,
        ComonadKind::Bounded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ComonadKind::Ef => "ef",
            ComonadKind::Modal => "modal",
            ComonadKind::Hybrid => "hybrid",
            ComonadKind::HybridTemporal => "hybrid-temporal",
            ComonadKind::Bounded => "bounded",
        }
    }

    fn check_signature(self, base: &Structure) -> Result<(), ComonadError> {
        let sig = base.signature();
        let m = sig.num_basepoints();
        match self {
            ComonadKind::Ef => Ok(()),
            ComonadKind::Modal | ComonadKind::Hybrid | ComonadKind::HybridTemporal => {
                if sig.is_unimodal() && m == 1 {
                    Ok(())
                } else {
                    Err(ComonadError::KindMismatch(format!(
                        "{} needs a unimodal signature with one basepoint",
                        self.name()
                    )))
                }
            }
            ComonadKind::Bounded => {
                if m >= 1 {
                    Ok(())
                } else {
                    Err(ComonadError::KindMismatch(
                        "bounded carriers need at least one basepoint".into(),
                    ))
                }
            }
        }
    }

    /// May `x` extend the play `prefix` (which already contains the
    /// basepoints)?
    pub(crate) fn admits(self, base: &Structure, prefix: &[usize], x: usize) -> bool {
        let sees = |r: &str, a: usize, b: usize| base.holds(r, &[a, b]);
        let transitions = base.signature().transitions();
        match self {
            ComonadKind::Ef => true,
            ComonadKind::Modal => {
                let last = *prefix.last().expect("non-empty prefix");
                transitions.iter().any(|r| sees(r, last, x))
            }
            ComonadKind::Hybrid | ComonadKind::Bounded => prefix
                .iter()
                .any(|&a| transitions.iter().any(|r| sees(r, a, x))),
            ComonadKind::HybridTemporal => prefix
                .iter()
                .any(|&a| transitions.iter().any(|r| sees(r, a, x) || sees(r, x, a))),
        }
    }
}

impl fmt::Display for ComonadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ComonadError {
    #[error("kind/signature mismatch: {0}")]
    KindMismatch(String),
    #[error("resource bound must be at least 1")]
    ZeroResource,
    #[error("carrier exceeds the cap of {cap} plays")]
    TooLarge { cap: usize },
    #[error("play {0} is not in the carrier")]
    PlayNotInCarrier(String),
    #[error("map has {found} entries for a carrier of {expected} plays")]
    NotTotal { expected: usize, found: usize },
    #[error("comonads differ in kind or resource")]
    Incompatible,
}

/// A comonad applied to a pointed structure, materialised as a structure
/// whose elements are plays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComonadStructure {
    kind: ComonadKind,
    k: usize,
    with_i: bool,
    base: Structure,
    plays: Vec<Play>,
    parent: Vec<Option<usize>>,
    index: HashMap<Play, usize>,
    carrier: Structure,
}

impl ComonadStructure {
    pub fn kind(&self) -> ComonadKind {
        self.kind
    }

    pub fn resource(&self) -> usize {
        self.k
    }

    pub fn with_i(&self) -> bool {
        self.with_i
    }

    pub fn base(&self) -> &Structure {
        &self.base
    }

    /// Plays ordered by length, then lexicographically by element index.
    pub fn plays(&self) -> &[Play] {
        &self.plays
    }

    pub fn len(&self) -> usize {
        self.plays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plays.is_empty()
    }

    pub fn carrier(&self) -> &Structure {
        &self.carrier
    }

    pub fn index_of(&self, play: &[usize]) -> Option<usize> {
        self.index.get(play).copied()
    }

    /// Index of the longest proper prefix that is itself a play.
    pub fn parent(&self, play: usize) -> Option<usize> {
        self.parent[play]
    }

    /// Indices of the prefixes of `play`, shortest first, ending with `play`.
    pub fn prefixes(&self, play: usize) -> Vec<usize> {
        let mut chain = vec![play];
        let mut cur = play;
        while let Some(p) = self.parent[cur] {
            chain.push(p);
            cur = p;
        }
        chain.reverse();
        chain
    }

    pub fn play_name(&self, play: &[usize]) -> String {
        play_name(&self.base, play)
    }

    /// One play per line, then one line per relation instance.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for p in &self.plays {
            out.push_str(&self.play_name(p));
            out.push('\n');
        }
        for (r, tuples) in self.carrier.relations() {
            out.push_str(&format!("{r}: {}\n", tuples.len()));
            for t in tuples {
                let names: Vec<&str> = t.iter().map(|&i| self.carrier.name(i)).collect();
                out.push_str(&format!("  {}({})\n", r, names.join(", ")));
            }
        }
        out
    }
}

pub(crate) fn play_name(base: &Structure, play: &[usize]) -> String {
    play.iter().map(|&x| base.name(x)).collect::<Vec<_>>().join(".")
}

pub fn build_comonad(
    base: &Structure,
    kind: ComonadKind,
    k: usize,
    with_i: bool,
) -> Result<ComonadStructure, ComonadError> {
    build_comonad_capped(base, kind, k, with_i, DEFAULT_PLAY_CAP)
}

pub fn build_comonad_capped(
    base: &Structure,
    kind: ComonadKind,
    k: usize,
    with_i: bool,
    cap: usize,
) -> Result<ComonadStructure, ComonadError> {
    if k == 0 {
        return Err(ComonadError::ZeroResource);
    }
    kind.check_signature(base)?;
    let bps = base.basepoints();
    let m = bps.len();

    // Breadth-first enumeration yields plays by length; children are added
    // in universe order, so each level is lexicographically sorted.
    let mut plays: Vec<Play> = Vec::new();
    let mut parent: Vec<Option<usize>> = Vec::new();
    let mut level: Vec<usize> = Vec::new();
    for j in 0..m {
        plays.push(bps[..=j].to_vec());
        parent.push(j.checked_sub(1));
    }
    if m == 0 {
        for x in 0..base.len() {
            plays.push(vec![x]);
            parent.push(None);
            level.push(plays.len() - 1);
        }
    } else {
        level.push(m - 1);
    }
    let max_len = k + m;
    while let Some(&first) = level.first() {
        if plays[first].len() >= max_len {
            break;
        }
        let mut next = Vec::new();
        for &p in &level {
            for x in 0..base.len() {
                if kind.admits(base, &plays[p], x) {
                    if plays.len() >= cap {
                        return Err(ComonadError::TooLarge { cap });
                    }
                    let mut child = plays[p].clone();
                    child.push(x);
                    plays.push(child);
                    parent.push(Some(p));
                    next.push(plays.len() - 1);
                }
            }
        }
        level = next;
    }
    if plays.len() > cap {
        return Err(ComonadError::TooLarge { cap });
    }

    let index: HashMap<Play, usize> = plays.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let carrier = lift_relations(base, kind, with_i, &plays, &parent, m);
    Ok(ComonadStructure {
        kind,
        k,
        with_i,
        base: base.clone(),
        plays,
        parent,
        index,
        carrier,
    })
}

/// Relations hold along plays: `R(s1..sn)` iff the plays are pairwise
/// comparable and `R` holds of their last elements. In the modal carrier the
/// transition only links a play to its one-step extensions.
fn lift_relations(
    base: &Structure,
    kind: ComonadKind,
    with_i: bool,
    plays: &[Play],
    parent: &[Option<usize>],
    m: usize,
) -> Structure {
    let mut sig = base.signature().clone();
    let mut relations: BTreeMap<String, BTreeSet<Vec<usize>>> = BTreeMap::new();
    let mut symbols: Vec<(String, usize)> = sig.relations().iter().map(|(r, &a)| (r.clone(), a)).collect();
    if with_i {
        sig = sig.with_identity();
        symbols.push((IDENTITY_RELATION.to_string(), 2));
    }
    let holds = |r: &str, t: &[usize]| {
        if r == IDENTITY_RELATION {
            t[0] == t[1]
        } else {
            base.holds(r, t)
        }
    };
    for (r, arity) in &symbols {
        let set = relations.entry(r.clone()).or_default();
        let local = kind == ComonadKind::Modal && base.signature().is_transition(r);
        for (pi, play) in plays.iter().enumerate() {
            if local {
                if let Some(q) = parent[pi] {
                    let (a, b) = (plays[q][plays[q].len() - 1], play[play.len() - 1]);
                    if holds(r, &[a, b]) {
                        set.insert(vec![q, pi]);
                    }
                }
                continue;
            }
            // Tuples of prefixes of `play` that mention `play` itself.
            let chain = chain_of(pi, parent);
            let l = chain.len();
            let mut idx = vec![0usize; *arity];
            loop {
                if idx.iter().any(|&i| i == l - 1) {
                    let last: Vec<usize> = idx.iter().map(|&i| *plays[chain[i]].last().unwrap()).collect();
                    if holds(r, &last) {
                        set.insert(idx.iter().map(|&i| chain[i]).collect());
                    }
                }
                // odometer
                let mut pos = 0;
                loop {
                    if pos == *arity {
                        break;
                    }
                    idx[pos] += 1;
                    if idx[pos] < l {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == *arity {
                    break;
                }
            }
        }
    }
    let universe = plays.iter().map(|p| play_name(base, p)).collect();
    let basepoints = (0..m).collect();
    Structure::from_indexed(sig, universe, relations, basepoints)
}

fn chain_of(play: usize, parent: &[Option<usize>]) -> Vec<usize> {
    let mut chain = vec![play];
    let mut cur = play;
    while let Some(p) = parent[cur] {
        chain.push(p);
        cur = p;
    }
    chain.reverse();
    chain
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(c: &ComonadStructure) -> Vec<String> {
        c.plays().iter().map(|p| c.play_name(p)).collect()
    }

    #[test]
    fn hybrid_path3() {
        let c = build_comonad(&fixtures::path3(), ComonadKind::Hybrid, 2, false).unwrap();
        assert_eq!(names(&c), ["a", "a.b", "a.b.b", "a.b.c"]);
    }

    #[test]
    fn point_has_one_play() {
        for k in 1..4 {
            let c = build_comonad(&fixtures::point(), ComonadKind::Hybrid, k, true).unwrap();
            assert_eq!(names(&c), ["a"]);
        }
    }

    #[test]
    fn temporal_sees_backwards() {
        let s = fixtures::back_edge();
        let t = build_comonad(&s, ComonadKind::HybridTemporal, 1, false).unwrap();
        let h = build_comonad(&s, ComonadKind::Hybrid, 1, false).unwrap();
        assert_eq!(names(&t), ["a", "a.b"]);
        assert_eq!(names(&h), ["a"]);
    }

    #[test]
    fn ef_counts() {
        // n + n^2 + ... plays after the basepoint, for n = 3, k = 2.
        let c = build_comonad(&fixtures::path3(), ComonadKind::Ef, 2, false).unwrap();
        assert_eq!(c.len(), 1 + 3 + 9);
        let unpointed = fixtures::path3().with_basepoints(vec![]);
        let c = build_comonad(&unpointed, ComonadKind::Ef, 2, false).unwrap();
        assert_eq!(c.len(), 3 + 9);
        assert!(c.carrier().basepoints().is_empty());
    }

    #[test]
    fn modal_edges_are_local() {
        let c = build_comonad(&fixtures::self_loop(), ComonadKind::Modal, 2, false).unwrap();
        assert_eq!(names(&c), ["a", "a.a", "a.a.a"]);
        assert_eq!(c.carrier().tuples("E").len(), 2);
        let h = build_comonad(&fixtures::self_loop(), ComonadKind::Hybrid, 2, false).unwrap();
        // every ordered pair of the chain a ⊑ a.a ⊑ a.a.a
        assert_eq!(h.carrier().tuples("E").len(), 9);
    }

    #[test]
    fn identity_relation_lifting() {
        let c = build_comonad(&fixtures::self_loop(), ComonadKind::Hybrid, 1, true).unwrap();
        let i = c.carrier().tuples(IDENTITY_RELATION);
        assert_eq!(i.len(), 4);
        let p = build_comonad(&fixtures::path3(), ComonadKind::Hybrid, 2, true).unwrap();
        let ab = p.index_of(&[0, 1]).unwrap();
        let abb = p.index_of(&[0, 1, 1]).unwrap();
        assert!(p.carrier().holds(IDENTITY_RELATION, &[ab, abb]));
        let abc = p.index_of(&[0, 1, 2]).unwrap();
        assert!(!p.carrier().holds(IDENTITY_RELATION, &[abb, abc]));
    }

    #[test]
    fn bounded_basepoint_prefixes() {
        let s = fixtures::bounded_two_constants();
        let c = build_comonad(&s, ComonadKind::Bounded, 1, false).unwrap();
        assert_eq!(names(&c), ["a1", "a1.a2", "a1.a2.b"]);
        assert_eq!(c.carrier().basepoints(), &[0, 1]);
    }

    #[test]
    fn kind_requirements() {
        let s = fixtures::bounded_two_constants();
        assert!(matches!(
            build_comonad(&s, ComonadKind::Hybrid, 1, false),
            Err(ComonadError::KindMismatch(_))
        ));
        assert_eq!(
            build_comonad(&fixtures::path3(), ComonadKind::Hybrid, 0, false).unwrap_err(),
            ComonadError::ZeroResource
        );
        let unpointed = s.with_basepoints(vec![]);
        assert!(build_comonad(&unpointed, ComonadKind::Bounded, 1, false).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let s = fixtures::star(4);
        assert_eq!(
            build_comonad_capped(&s, ComonadKind::Ef, 3, false, 50).unwrap_err(),
            ComonadError::TooLarge { cap: 50 }
        );
    }

    #[test]
    fn universe_inclusions() {
        for s in fixtures::unimodal_family() {
            for k in 1..=3 {
                let sets: Vec<BTreeSet<Play>> = [
                    ComonadKind::Modal,
                    ComonadKind::Hybrid,
                    ComonadKind::HybridTemporal,
                    ComonadKind::Ef,
                ]
                .iter()
                .map(|&kind| build_comonad(&s, kind, k, false).unwrap().plays().iter().cloned().collect())
                .collect();
                for w in sets.windows(2) {
                    assert!(w[0].is_subset(&w[1]), "{s:?}");
                }
                let bounded: BTreeSet<Play> =
                    build_comonad(&s, ComonadKind::Bounded, k, false).unwrap().plays().iter().cloned().collect();
                assert_eq!(bounded, sets[1]);
                // induced substructures of the EF carrier
                let ef = build_comonad(&s, ComonadKind::Ef, k, true).unwrap();
                let h = build_comonad(&s, ComonadKind::Hybrid, k, true).unwrap();
                let keep: BTreeSet<usize> = h.plays().iter().map(|p| ef.index_of(p).unwrap()).collect();
                let induced = ef.carrier().induced_substructure(&keep);
                assert_eq!(&induced, h.carrier());
            }
        }
    }

    #[test]
    fn carrier_tuples_are_chains() {
        for s in fixtures::bounded_family().iter().take(10) {
            let c = build_comonad(s, ComonadKind::Bounded, 2, true).unwrap();
            for tuples in c.carrier().relations().values() {
                for t in tuples {
                    for &x in t {
                        for &y in t {
                            let (p, q) = (&c.plays()[x], &c.plays()[y]);
                            assert!(p.starts_with(q) || q.starts_with(p));
                        }
                    }
                }
            }
        }
    }
}
