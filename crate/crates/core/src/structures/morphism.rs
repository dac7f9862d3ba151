use super::{Structure, StructureError};

/// Which family of partial maps a correspondence must belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    /// Functional and relation-preserving.
    Homomorphism,
    /// Injective, functional, relation-preserving and relation-reflecting.
    Isomorphism,
}

/// First reason a correspondence fails to be a partial map of the requested kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapViolation {
    NotFunctional {
        left: usize,
        right: (usize, usize),
    },
    NotInjective {
        left: (usize, usize),
        right: usize,
    },
    NotPreserved {
        relation: String,
        left: Vec<usize>,
        right: Vec<usize>,
    },
    NotReflected {
        relation: String,
        left: Vec<usize>,
        right: Vec<usize>,
    },
}

impl MapViolation {
    pub fn describe(&self, a: &Structure, b: &Structure) -> String {
        match self {
            MapViolation::NotFunctional { left, right } => format!(
                "{} is paired with both {} and {}",
                a.name(*left),
                b.name(right.0),
                b.name(right.1)
            ),
            MapViolation::NotInjective { left, right } => format!(
                "distinct {} and {} are both paired with {}",
                a.name(left.0),
                a.name(left.1),
                b.name(*right)
            ),
            MapViolation::NotPreserved {
                relation,
                left,
                right,
            } => format!(
                "{} holds on the left but {} does not hold on the right",
                a.format_tuple(relation, left),
                b.format_tuple(relation, right)
            ),
            MapViolation::NotReflected {
                relation,
                left,
                right,
            } => format!(
                "{} holds on the right but {} does not hold on the left",
                b.format_tuple(relation, right),
                a.format_tuple(relation, left)
            ),
        }
    }
}

/// Checks the correspondence `pairs` (a list of (left, right) element pairs,
/// repetitions allowed) against `kind`, reporting the first violation found.
pub fn partial_map_violation(
    pairs: &[(usize, usize)],
    a: &Structure,
    b: &Structure,
    kind: MapKind,
) -> Option<MapViolation> {
    let mut fwd: Vec<Option<usize>> = vec![None; a.len()];
    let mut bwd: Vec<Option<usize>> = vec![None; b.len()];
    for &(x, y) in pairs {
        match fwd[x] {
            Some(y0) if y0 != y => {
                return Some(MapViolation::NotFunctional {
                    left: x,
                    right: (y0, y),
                })
            }
            _ => fwd[x] = Some(y),
        }
        if kind == MapKind::Isomorphism {
            match bwd[y] {
                Some(x0) if x0 != x => {
                    return Some(MapViolation::NotInjective {
                        left: (x0, x),
                        right: y,
                    })
                }
                _ => bwd[y] = Some(x),
            }
        }
    }
    for (rel, tuples) in a.relations() {
        for t in tuples {
            let image: Option<Vec<usize>> = t.iter().map(|&e| fwd[e]).collect();
            if let Some(image) = image {
                if !b.holds(rel, &image) {
                    return Some(MapViolation::NotPreserved {
                        relation: rel.clone(),
                        left: t.clone(),
                        right: image,
                    });
                }
            }
        }
    }
    if kind == MapKind::Isomorphism {
        for rel in a.relations().keys() {
            for t in b.tuples(rel) {
                let pre: Option<Vec<usize>> = t.iter().map(|&e| bwd[e]).collect();
                if let Some(pre) = pre {
                    if !a.holds(rel, &pre) {
                        return Some(MapViolation::NotReflected {
                            relation: rel.clone(),
                            left: pre,
                            right: t.clone(),
                        });
                    }
                }
            }
        }
    }
    None
}

pub fn is_partial_isomorphism(pairs: &[(usize, usize)], a: &Structure, b: &Structure) -> bool {
    partial_map_violation(pairs, a, b, MapKind::Isomorphism).is_none()
}

pub fn is_partial_homomorphism(pairs: &[(usize, usize)], a: &Structure, b: &Structure) -> bool {
    partial_map_violation(pairs, a, b, MapKind::Homomorphism).is_none()
}

/// Total map `h` (indexed by elements of `a`) preserving every relation and
/// sending basepoints to basepoints componentwise.
pub fn is_homomorphism(h: &[usize], a: &Structure, b: &Structure) -> Result<bool, StructureError> {
    if h.len() != a.len() {
        return Err(StructureError::MapOutOfRange(format!(
            "map has {} entries for a universe of {}",
            h.len(),
            a.len()
        )));
    }
    if let Some((x, &y)) = h.iter().enumerate().find(|(_, &y)| y >= b.len()) {
        return Err(StructureError::MapOutOfRange(format!(
            "{} is sent to index {y}, outside a universe of {}",
            a.name(x),
            b.len()
        )));
    }
    if a.basepoints().len() != b.basepoints().len()
        || a.basepoints()
            .iter()
            .zip(b.basepoints())
            .any(|(&x, &y)| h[x] != y)
    {
        return Ok(false);
    }
    for (rel, tuples) in a.relations() {
        for t in tuples {
            let image: Vec<usize> = t.iter().map(|&e| h[e]).collect();
            if !b.holds(rel, &image) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Name-based front end to [`is_homomorphism`].
pub fn is_homomorphism_named(
    h: &std::collections::BTreeMap<String, String>,
    a: &Structure,
    b: &Structure,
) -> Result<bool, StructureError> {
    let mut idx = Vec::with_capacity(a.len());
    for x in a.universe() {
        let y = h
            .get(x)
            .ok_or_else(|| StructureError::MapOutOfRange(format!("{x} has no image")))?;
        idx.push(
            b.index_of(y)
                .ok_or_else(|| StructureError::MapOutOfRange(format!("{x} is sent to unknown {y}")))?,
        );
    }
    is_homomorphism(&idx, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn collapse_onto_loop_is_a_homomorphism() {
        let p = fixtures::path3();
        let l = fixtures::self_loop();
        assert_eq!(is_homomorphism(&[0, 0, 0], &p, &l), Ok(true));
        let id: Vec<usize> = (0..p.len()).collect();
        assert_eq!(is_homomorphism(&id, &p, &p), Ok(true));
    }

    #[test]
    fn loop_does_not_map_to_path() {
        let p = fixtures::path3();
        let l = fixtures::self_loop();
        assert_eq!(is_homomorphism(&[0], &l, &p), Ok(false));
    }

    #[test]
    fn out_of_range_map_is_an_error() {
        let p = fixtures::path3();
        let l = fixtures::self_loop();
        assert!(is_homomorphism(&[0, 1, 0], &p, &l).is_err());
        assert!(is_homomorphism(&[0], &p, &l).is_err());
    }

    #[test]
    fn partial_isomorphism_cases() {
        let l = fixtures::self_loop();
        let c = fixtures::c2();
        assert!(!is_partial_isomorphism(&[(0, 0)], &l, &c));
        assert!(is_partial_isomorphism(&[], &l, &c));
        let p = fixtures::path3();
        assert!(!is_partial_isomorphism(&[(0, 1), (0, 2)], &p, &p));
        assert!(is_partial_isomorphism(&[(0, 0), (1, 1)], &p, &p));
        assert!(!is_partial_isomorphism(&[(0, 0), (1, 0)], &p, &p));
    }

    #[test]
    fn violation_descriptions_name_the_fact() {
        let l = fixtures::self_loop();
        let c = fixtures::c2();
        let v = partial_map_violation(&[(0, 0)], &l, &c, MapKind::Isomorphism).unwrap();
        assert_eq!(
            v.describe(&l, &c),
            "E(a,a) holds on the left but E(b0,b0) does not hold on the right"
        );
    }
}
