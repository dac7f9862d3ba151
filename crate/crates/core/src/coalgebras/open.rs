use super::cover::TreeCover;
use super::CoverError;
use crate::structures::{is_homomorphism, is_partial_isomorphism, Structure};

/// Inputs beyond this many elements are refused.
pub const OPEN_MAP_LIMIT: usize = 256;

/// `f` is a homomorphism `A → B` that sends the root of `t` to the root of
/// `u` and covering pairs to covering pairs.
pub fn is_cover_morphism(f: &[usize], a: &Structure, t: &TreeCover, b: &Structure, u: &TreeCover) -> bool {
    if f.len() != a.len() || t.len() != a.len() || u.len() != b.len() {
        return false;
    }
    if !is_homomorphism(f, a, b).unwrap_or(false) {
        return false;
    }
    (0..a.len()).all(|x| match t.parent[x] {
        None => u.parent[f[x]].is_none(),
        Some(p) => u.parent[f[x]] == Some(f[p]),
    })
}

/// `f` restricted to every branch `↓x` is an embedding.
pub fn is_pathwise_embedding(f: &[usize], a: &Structure, t: &TreeCover, b: &Structure) -> bool {
    (0..a.len()).all(|x| match t.branch(x) {
        Some(chain) => {
            let pairs: Vec<(usize, usize)> = chain.iter().map(|&y| (y, f[y])).collect();
            is_partial_isomorphism(&pairs, a, b)
        }
        None => false,
    })
}

/// Pathwise embedding with the path-lifting property: whenever a branch
/// `↓x` embeds and `f(x) ≤ y` in `u`, some `x' ≥ x` has `f(x') = y`.
/// Since `f` preserves the covering relation, lifting one step at a time
/// suffices.
pub fn check_open_pathwise_embedding(
    f: &[usize],
    a: &Structure,
    t: &TreeCover,
    b: &Structure,
    u: &TreeCover,
) -> Result<bool, CoverError> {
    let size = a.len().max(b.len());
    if size > OPEN_MAP_LIMIT {
        return Err(CoverError::TooLarge {
            size,
            limit: OPEN_MAP_LIMIT,
        });
    }
    if !is_cover_morphism(f, a, t, b, u) {
        return Err(CoverError::NotCoverMorphism(
            "map does not preserve relations, root and covering pairs".into(),
        ));
    }
    if !is_pathwise_embedding(f, a, t, b) {
        return Ok(false);
    }
    for x in 0..a.len() {
        let above: Vec<usize> = t.children(x).iter().map(|&c| f[c]).collect();
        if u.children(f[x]).iter().any(|y| !above.contains(y)) {
            return Ok(false);
        }
    }
    Ok(true)
}
