use std::collections::HashMap;

use super::{build_comonad, ComonadError, ComonadKind, ComonadStructure};
use crate::structures::{Structure, IDENTITY_RELATION};

/// A coKleisli morphism `G(A) → B`, as an element of `B` per play of `A`.
#[derive(Clone, Debug)]
pub struct CoKleisliMorphism {
    pub carrier: ComonadStructure,
    pub images: Vec<usize>,
}

/// Searches for a homomorphism from the `I`-lifted carrier over `a` into
/// `b` (with `I` the identity) that respects basepoints. Plays are visited
/// by length then lexicographically, candidates in universe order, so the
/// witness is the least one in that order.
pub fn find_cokleisli_morphism(
    a: &Structure,
    b: &Structure,
    kind: ComonadKind,
    k: usize,
) -> Result<Option<CoKleisliMorphism>, ComonadError> {
    find_cokleisli_morphism_ordered(a, b, kind, k, |_, n| (0..n).collect())
}

/// As [`find_cokleisli_morphism`] with a caller-chosen candidate order per
/// play (e.g. shuffled, to sample random morphisms).
pub fn find_cokleisli_morphism_ordered(
    a: &Structure,
    b: &Structure,
    kind: ComonadKind,
    k: usize,
    mut order: impl FnMut(usize, usize) -> Vec<usize>,
) -> Result<Option<CoKleisliMorphism>, ComonadError> {
    if !a.signature().same_vocabulary(b.signature()) || a.basepoints().len() != b.basepoints().len() {
        return Err(ComonadError::KindMismatch("structures differ in signature".into()));
    }
    let carrier = build_comonad(a, kind, k, true)?;
    let mut search = Search {
        c: &carrier,
        a,
        b,
        memo: HashMap::new(),
    };
    let mut images = vec![usize::MAX; carrier.len()];
    for s in 0..carrier.len() {
        let chain = carrier.prefixes(s);
        let prior: Vec<(usize, usize)> = chain[..chain.len() - 1]
            .iter()
            .map(|&p| (*carrier.plays()[p].last().unwrap(), images[p]))
            .collect();
        let x = *carrier.plays()[s].last().unwrap();
        let m = a.basepoints().len();
        let candidates = if carrier.plays()[s].len() <= m {
            vec![b.basepoints()[carrier.plays()[s].len() - 1]]
        } else {
            order(s, b.len())
        };
        let mut chosen = None;
        for y in candidates {
            if search.extends(&prior, (x, y)) && search.winnable(&carrier.plays()[s], &with(&prior, (x, y))) {
                chosen = Some(y);
                break;
            }
        }
        match chosen {
            Some(y) => images[s] = y,
            None => return Ok(None),
        }
    }
    Ok(Some(CoKleisliMorphism { carrier, images }))
}

fn with(prior: &[(usize, usize)], pair: (usize, usize)) -> Vec<(usize, usize)> {
    let mut v = prior.to_vec();
    v.push(pair);
    v
}

struct Search<'a> {
    c: &'a ComonadStructure,
    a: &'a Structure,
    b: &'a Structure,
    memo: HashMap<(Vec<(usize, usize)>, (usize, usize), usize), bool>,
}

impl Search<'_> {
    /// Adding `(x,y)` to the pairs along a play keeps every lifted relation
    /// instance ending in the new play preserved.
    fn extends(&self, prior: &[(usize, usize)], (x, y): (usize, usize)) -> bool {
        let modal = self.c.kind() == ComonadKind::Modal;
        for &(x0, y0) in prior {
            if x0 == x && y0 != y {
                return false;
            }
        }
        let pairs = with(prior, (x, y));
        let n = pairs.len();
        for (r, &arity) in self.a.signature().relations() {
            if modal && self.a.signature().is_transition(r) {
                if let Some(&(px, py)) = prior.last() {
                    if self.a.holds(r, &[px, x]) && !self.b.holds(r, &[py, y]) {
                        return false;
                    }
                }
                continue;
            }
            if r == IDENTITY_RELATION {
                continue;
            }
            for t in self.a.tuples(r) {
                if !t.contains(&x) {
                    continue;
                }
                // some occurrence of x in t is the new play; other positions
                // range over all pairs with the matching left element.
                if !self.tuple_preserved(r, arity, t, &pairs, n - 1) {
                    return false;
                }
            }
        }
        true
    }

    fn tuple_preserved(&self, r: &str, arity: usize, t: &[usize], pairs: &[(usize, usize)], new: usize) -> bool {
        let options: Vec<Vec<usize>> = t
            .iter()
            .map(|&e| pairs.iter().enumerate().filter(|(_, p)| p.0 == e).map(|(i, _)| i).collect())
            .collect();
        let mut idx = vec![0usize; arity];
        if options.iter().any(|o| o.is_empty()) {
            return true;
        }
        loop {
            let chosen: Vec<usize> = idx.iter().zip(&options).map(|(&i, o)| o[i]).collect();
            if chosen.contains(&new) {
                let image: Vec<usize> = chosen.iter().map(|&i| pairs[i].1).collect();
                if !self.b.holds(r, &image) {
                    return false;
                }
            }
            let mut pos = 0;
            while pos < arity {
                idx[pos] += 1;
                if idx[pos] < options[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == arity {
                return true;
            }
        }
    }

    /// Can every extension of `play` (with images `pairs`) be answered?
    fn winnable(&mut self, play: &[usize], pairs: &[(usize, usize)]) -> bool {
        let remaining = self.c.resource() + self.a.basepoints().len() - play.len();
        if remaining == 0 {
            return true;
        }
        let mut key_pairs = pairs.to_vec();
        key_pairs.sort_unstable();
        key_pairs.dedup();
        let key = (key_pairs, *pairs.last().unwrap(), remaining);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let m = self.a.basepoints().len();
        let result = if play.len() < m {
            let (x, y) = (self.a.basepoints()[play.len()], self.b.basepoints()[play.len()]);
            self.extends(pairs, (x, y)) && self.winnable(&with_elem(play, x), &with(pairs, (x, y)))
        } else {
            (0..self.a.len()).filter(|&x| self.c.kind().admits(self.a, play, x)).all(|x| {
                (0..self.b.len()).any(|y| {
                    self.extends(pairs, (x, y)) && self.winnable(&with_elem(play, x), &with(pairs, (x, y)))
                })
            })
        };
        self.memo.insert(key, result);
        result
    }
}

fn with_elem(play: &[usize], x: usize) -> Vec<usize> {
    let mut v = play.to_vec();
    v.push(x);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::structures::is_homomorphism;

    fn exists(a: &Structure, b: &Structure, kind: ComonadKind, k: usize) -> bool {
        let w = find_cokleisli_morphism(a, b, kind, k).unwrap();
        if let Some(w) = &w {
            let cod = b.with_identity_relation();
            assert_eq!(is_homomorphism(&w.images, w.carrier.carrier(), &cod), Ok(true));
        }
        w.is_some()
    }

    #[test]
    fn path_into_loop() {
        let w = find_cokleisli_morphism(&fixtures::path3(), &fixtures::self_loop(), ComonadKind::Hybrid, 3)
            .unwrap()
            .unwrap();
        assert!(w.images.iter().all(|&y| y == 0));
    }

    #[test]
    fn loop_into_path() {
        assert!(!exists(&fixtures::self_loop(), &fixtures::path3(), ComonadKind::Hybrid, 1));
    }

    #[test]
    fn identity_always_exists() {
        for s in fixtures::unimodal_family().iter().take(12) {
            for kind in [ComonadKind::Hybrid, ComonadKind::HybridTemporal, ComonadKind::Ef, ComonadKind::Modal] {
                assert!(exists(s, s, kind, 2));
            }
        }
        for s in fixtures::bounded_family().iter().take(8) {
            assert!(exists(s, s, ComonadKind::Bounded, 2));
        }
    }

    #[test]
    fn loop_into_c2_needs_equality() {
        // Repeated visits to the loop must get one image, which c2 lacks.
        assert!(!exists(&fixtures::self_loop(), &fixtures::c2(), ComonadKind::Hybrid, 1));
        assert!(!exists(&fixtures::self_loop(), &fixtures::c2(), ComonadKind::Modal, 1));
        assert!(exists(&fixtures::c2(), &fixtures::self_loop(), ComonadKind::Hybrid, 3));
    }
}
