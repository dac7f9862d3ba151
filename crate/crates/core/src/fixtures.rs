//! Named small structures and seeded random generators shared by tests, the
//! acceptance suite and the CLI examples.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::structures::{Signature, Structure};

/// `{E:2, P:1}`, transition `E`, one basepoint.
pub fn unimodal_signature() -> Signature {
    Signature::unimodal(["P"]).expect("valid signature")
}

/// `{E:2, F:2, P:1}`, transitions `E, F`, two basepoints.
pub fn bounded_signature() -> Signature {
    Signature::new([("E", 2), ("F", 2), ("P", 1)], ["E", "F"], 2).expect("valid signature")
}

/// Unimodal structure from an edge list; the first element is the basepoint.
pub fn graph(elements: &[&str], edges: &[(&str, &str)], p: &[&str]) -> Structure {
    let mut b = Structure::builder(unimodal_signature())
        .elements(elements.iter().copied())
        .basepoints([elements[0]]);
    for &(x, y) in edges {
        b = b.edge(x, y);
    }
    for &x in p {
        b = b.tuple("P", [x]);
    }
    b.build().expect("valid fixture")
}

pub fn point() -> Structure {
    graph(&["a"], &[], &[])
}

pub fn isolated_pair() -> Structure {
    graph(&["a", "b"], &[], &[])
}

/// `a → b → c`, pointed at `a`.
pub fn path3() -> Structure {
    graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")], &[])
}

/// `a → x1 → … → x5`, pointed at `a`.
pub fn path6() -> Structure {
    graph(
        &["a", "x1", "x2", "x3", "x4", "x5"],
        &[("a", "x1"), ("x1", "x2"), ("x2", "x3"), ("x3", "x4"), ("x4", "x5")],
        &[],
    )
}

/// `E(a,a)`.
pub fn self_loop() -> Structure {
    graph(&["a"], &[("a", "a")], &[])
}

/// Two-cycle `b0 ⇄ b1`, pointed at `b0`.
pub fn c2() -> Structure {
    graph(&["b0", "b1"], &[("b0", "b1"), ("b1", "b0")], &[])
}

/// Root `r` with `n` leaves `l1..ln`.
pub fn star(n: usize) -> Structure {
    let leaves: Vec<String> = (1..=n).map(|i| format!("l{i}")).collect();
    let mut elements = vec!["r"];
    elements.extend(leaves.iter().map(String::as_str));
    let edges: Vec<(&str, &str)> = leaves.iter().map(|l| ("r", l.as_str())).collect();
    graph(&elements, &edges, &[])
}

/// The single edge `b → a`, pointed at `a`: invisible forwards, visible backwards.
pub fn back_edge() -> Structure {
    graph(&["a", "b"], &[("b", "a")], &[])
}

/// Two constants `a1, a2` with `E(a1,b)` and `F(a2,b)`.
pub fn bounded_two_constants() -> Structure {
    Structure::builder(bounded_signature())
        .elements(["a1", "a2", "b"])
        .tuple("E", ["a1", "b"])
        .tuple("F", ["a2", "b"])
        .tuple("P", ["b"])
        .basepoints(["a1", "a2"])
        .build()
        .expect("valid fixture")
}

/// Parameters for random structure generation.
#[derive(Clone, Debug)]
pub struct RandomSpec {
    pub signature: Signature,
    pub min_size: usize,
    pub max_size: usize,
    /// Probability of each possible tuple of each relation.
    pub density: f64,
}

impl RandomSpec {
    pub fn new(signature: Signature, max_size: usize, density: f64) -> Self {
        RandomSpec {
            signature,
            min_size: 1,
            max_size,
            density,
        }
    }
}

fn all_tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Random structure over `spec.signature`; elements are named `e0, e1, …` and
/// basepoints are drawn uniformly (repetitions allowed).
pub fn random_structure<R: Rng>(rng: &mut R, spec: &RandomSpec) -> Structure {
    let n = rng.gen_range(spec.min_size.max(1)..=spec.max_size.max(1));
    let universe: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let mut relations: BTreeMap<String, Vec<Vec<String>>> = BTreeMap::new();
    for (r, &arity) in spec.signature.relations() {
        let ts = all_tuples(n, arity)
            .into_iter()
            .filter(|_| rng.gen_bool(spec.density))
            .map(|t| t.iter().map(|&e| universe[e].clone()).collect())
            .collect();
        relations.insert(r.clone(), ts);
    }
    let basepoints = (0..spec.signature.num_basepoints())
        .map(|_| universe[rng.gen_range(0..n)].clone())
        .collect();
    Structure::new(spec.signature.clone(), universe, relations, basepoints).expect("valid random structure")
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Thirty unimodal pointed structures of size ≤ 4: hand-picked shapes that
/// separate the logics at various depths, padded with seeded random graphs.
pub fn unimodal_family() -> Vec<Structure> {
    let mut family = vec![
        point(),
        graph(&["a"], &[], &["a"]),
        self_loop(),
        c2(),
        graph(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")], &[]),
        graph(&["a", "b"], &[("a", "b")], &[]),
        path3(),
        graph(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")], &[]),
        star(2),
        star(3),
        back_edge(),
        isolated_pair(),
        graph(&["a", "b"], &[("a", "a"), ("a", "b")], &[]),
        graph(&["a", "b"], &[("a", "b"), ("b", "a")], &["b"]),
        graph(&["a", "b"], &[("a", "b")], &["b"]),
        graph(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d")], &[]),
        graph(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "b")], &[]),
        graph(&["a", "b"], &[("a", "b"), ("b", "b")], &[]),
        graph(&["a", "b", "c"], &[("a", "b"), ("a", "c")], &["b"]),
        graph(&["a", "b", "c"], &[("a", "b"), ("a", "c")], &["b", "c"]),
        graph(&["a", "b", "c"], &[("a", "b"), ("b", "a"), ("a", "c")], &[]),
        graph(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")], &["a"]),
        graph(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")], &[]),
        graph(&["a", "b", "c"], &[("a", "b"), ("c", "b")], &[]),
    ];
    let spec = RandomSpec {
        signature: unimodal_signature(),
        min_size: 2,
        max_size: 4,
        density: 0.3,
    };
    let mut rng = seeded_rng(0x5eed_0001);
    while family.len() < 30 {
        family.push(random_structure(&mut rng, &spec));
    }
    family
}

/// Thirty structures over [`bounded_signature`] (two constants, two
/// transition relations) of size ≤ 4.
pub fn bounded_family() -> Vec<Structure> {
    let sig = bounded_signature();
    let build = |elements: &[&str], e: &[(&str, &str)], f: &[(&str, &str)], p: &[&str], bps: [&str; 2]| {
        let mut b = Structure::builder(sig.clone())
            .elements(elements.iter().copied())
            .basepoints(bps);
        for &(x, y) in e {
            b = b.tuple("E", [x, y]);
        }
        for &(x, y) in f {
            b = b.tuple("F", [x, y]);
        }
        for &x in p {
            b = b.tuple("P", [x]);
        }
        b.build().expect("valid fixture")
    };
    let mut family = vec![
        bounded_two_constants(),
        build(&["a"], &[], &[], &[], ["a", "a"]),
        build(&["a", "b"], &[], &[], &[], ["a", "b"]),
        build(&["a", "b"], &[("a", "b")], &[], &[], ["a", "b"]),
        build(&["a", "b"], &[], &[("a", "b")], &[], ["a", "b"]),
        build(&["a", "b", "c"], &[("a", "c")], &[], &[], ["a", "b"]),
        build(&["a", "b", "c"], &[("b", "c")], &[], &[], ["a", "b"]),
        build(&["a", "b", "c", "d"], &[("a", "c"), ("b", "d")], &[], &[], ["a", "b"]),
        build(&["a", "b", "c"], &[("a", "c"), ("b", "c")], &[], &[], ["a", "b"]),
        build(&["a", "b"], &[("a", "a")], &[("b", "b")], &[], ["a", "b"]),
        build(&["a"], &[("a", "a")], &[("a", "a")], &[], ["a", "a"]),
        build(&["a", "b", "c"], &[("a", "b"), ("b", "c")], &[], &["c"], ["a", "a"]),
    ];
    let spec = RandomSpec {
        signature: sig,
        min_size: 1,
        max_size: 4,
        density: 0.2,
    };
    let mut rng = seeded_rng(0x5eed_0002);
    while family.len() < 30 {
        family.push(random_structure(&mut rng, &spec));
    }
    family
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_have_thirty_small_members() {
        for fam in [unimodal_family(), bounded_family()] {
            assert_eq!(fam.len(), 30);
            assert!(fam.iter().all(|s| s.len() <= 4));
        }
    }

    #[test]
    fn generation_is_seed_deterministic() {
        let spec = RandomSpec::new(unimodal_signature(), 5, 0.3);
        let a = random_structure(&mut seeded_rng(7), &spec);
        let b = random_structure(&mut seeded_rng(7), &spec);
        assert_eq!(a, b);
    }

    #[test]
    fn star_shape() {
        let s = star(3);
        assert_eq!(s.len(), 4);
        assert_eq!(s.tuples("E").len(), 3);
    }
}
