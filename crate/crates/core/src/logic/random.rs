//! Seeded random formula generators for property tests and the acceptance
//! suite. Every generator is a pure function of the RNG state.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{AtTarget, Fo, Guard, Hybrid, Term};
use crate::structures::Signature;

/// Shape of random hybrid formulas.
#[derive(Clone, Debug)]
pub struct HybridSpec {
    /// Unary predicate names usable as atoms.
    pub atoms: Vec<String>,
    /// Nominals `c1..c{nominals}` may occur.
    pub nominals: usize,
    pub max_depth: usize,
    /// Allow `boxinv`/`diainv`.
    pub backward: bool,
}

impl HybridSpec {
    pub fn new(max_depth: usize) -> Self {
        HybridSpec {
            atoms: vec!["P".into()],
            nominals: 1,
            max_depth,
            backward: false,
        }
    }
}

/// A closed hybrid formula of modal depth at most `spec.max_depth`.
pub fn random_hybrid<R: Rng>(rng: &mut R, spec: &HybridSpec) -> Hybrid {
    let mut scope = Vec::new();
    hybrid(rng, spec, spec.max_depth, 3, &mut scope)
}

fn hybrid<R: Rng>(rng: &mut R, spec: &HybridSpec, depth: usize, size: usize, scope: &mut Vec<String>) -> Hybrid {
    let leaf = size == 0 || rng.gen_bool(0.25);
    if leaf {
        let mut options = vec![Hybrid::True, Hybrid::False];
        options.extend(spec.atoms.iter().map(|a| Hybrid::atom(a.clone())));
        options.extend(scope.iter().map(|v| Hybrid::var(v.clone())));
        options.extend((1..=spec.nominals).map(Hybrid::Nominal));
        // A world variable or nominal under a diamond costs no depth.
        let f = options.choose(rng).expect("nonempty").clone();
        if matches!(f, Hybrid::Var(_) | Hybrid::Nominal(_)) && rng.gen_bool(0.4) {
            return if spec.backward && rng.gen_bool(0.5) {
                Hybrid::dia_inv(f)
            } else {
                Hybrid::dia(f)
            };
        }
        return f;
    }
    let mut choices: Vec<u8> = vec![0, 1, 2, 5, 6];
    if depth > 0 {
        choices.extend([3, 4]);
        if spec.backward {
            choices.extend([7, 8]);
        }
    }
    if !scope.is_empty() || spec.nominals > 0 {
        choices.push(9);
    }
    let size = size - 1;
    match *choices.choose(rng).expect("nonempty") {
        0 => Hybrid::not(hybrid(rng, spec, depth, size, scope)),
        1 => Hybrid::and(hybrid(rng, spec, depth, size, scope), hybrid(rng, spec, depth, size, scope)),
        2 => Hybrid::or(hybrid(rng, spec, depth, size, scope), hybrid(rng, spec, depth, size, scope)),
        3 => Hybrid::dia(hybrid(rng, spec, depth - 1, size, scope)),
        4 => Hybrid::boxed(hybrid(rng, spec, depth - 1, size, scope)),
        7 => Hybrid::dia_inv(hybrid(rng, spec, depth - 1, size, scope)),
        8 => Hybrid::box_inv(hybrid(rng, spec, depth - 1, size, scope)),
        5 | 6 => {
            let x = format!("x{}", scope.len() + 1);
            scope.push(x.clone());
            let body = hybrid(rng, spec, depth, size + 1, scope);
            scope.pop();
            Hybrid::down(x, body)
        }
        _ => {
            let mut targets: Vec<AtTarget> = scope.iter().cloned().map(AtTarget::Var).collect();
            targets.extend((1..=spec.nominals).map(AtTarget::Nominal));
            let t = targets.choose(rng).expect("nonempty").clone();
            Hybrid::at(t, hybrid(rng, spec, depth, size, scope))
        }
    }
}

/// A sentence of the bounded fragment over `sig` (constants `c1..cm`) with
/// quantifier rank at most `k`, every quantifier guarded by a forward
/// transition edge from a constant or an enclosing variable.
pub fn random_bounded<R: Rng>(rng: &mut R, sig: &Signature, k: usize) -> Fo {
    let mut scope: Vec<Term> = (1..=sig.num_basepoints()).map(Term::Const).collect();
    fo(rng, sig, k, 3, &mut scope, true)
}

/// An unrestricted first-order sentence over `sig` of rank at most `k`.
pub fn random_fo<R: Rng>(rng: &mut R, sig: &Signature, k: usize) -> Fo {
    let mut scope: Vec<Term> = (1..=sig.num_basepoints()).map(Term::Const).collect();
    fo(rng, sig, k, 3, &mut scope, false)
}

fn random_atom<R: Rng>(rng: &mut R, sig: &Signature, scope: &[Term]) -> Fo {
    if scope.is_empty() {
        return if rng.gen_bool(0.5) { Fo::True } else { Fo::False };
    }
    let rels: Vec<(&String, &usize)> = sig.relations().iter().collect();
    if rels.is_empty() || rng.gen_bool(0.15) {
        let a = scope.choose(rng).expect("nonempty").clone();
        let b = scope.choose(rng).expect("nonempty").clone();
        return Fo::Eq(a, b);
    }
    let (r, &arity) = *rels.choose(rng).expect("nonempty");
    // Favour the innermost variable so quantifiers are not vacuous.
    let args = (0..arity)
        .map(|_| {
            if rng.gen_bool(0.5) {
                scope.last().expect("nonempty").clone()
            } else {
                scope.choose(rng).expect("nonempty").clone()
            }
        })
        .collect();
    Fo::Rel(r.clone(), args)
}

fn fo<R: Rng>(rng: &mut R, sig: &Signature, k: usize, size: usize, scope: &mut Vec<Term>, bounded: bool) -> Fo {
    if size == 0 || rng.gen_bool(0.2) {
        return random_atom(rng, sig, scope);
    }
    let size = size - 1;
    let transitions: Vec<&String> = sig.transitions().iter().collect();
    let can_quantify = k > 0 && (!bounded || (!transitions.is_empty() && !scope.is_empty()));
    let pick = if can_quantify { rng.gen_range(0..6) } else { rng.gen_range(0..3) };
    match pick {
        0 => Fo::not(fo(rng, sig, k, size, scope, bounded)),
        1 => Fo::and(fo(rng, sig, k, size, scope, bounded), fo(rng, sig, k, size, scope, bounded)),
        2 => Fo::or(fo(rng, sig, k, size, scope, bounded), fo(rng, sig, k, size, scope, bounded)),
        q => {
            let y = format!("y{}", scope.iter().filter(|t| matches!(t, Term::Var(_))).count() + 1);
            let guard = bounded.then(|| {
                let r = (*transitions.choose(rng).expect("nonempty")).clone();
                Guard::forward(r, scope.choose(rng).expect("nonempty").clone())
            });
            scope.push(Term::var(y.clone()));
            let body = fo(rng, sig, k - 1, size + 1, scope, bounded);
            scope.pop();
            match (guard, q % 2 == 0) {
                (Some(g), true) => Fo::bexists(y, g, body),
                (Some(g), false) => Fo::bforall(y, g, body),
                (None, true) => Fo::exists(y, body),
                (None, false) => Fo::forall(y, body),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, seeded_rng};

    #[test]
    fn hybrid_formulas_are_closed_and_shallow() {
        let mut rng = seeded_rng(7);
        let spec = HybridSpec {
            backward: true,
            ..HybridSpec::new(2)
        };
        for _ in 0..300 {
            let f = random_hybrid(&mut rng, &spec);
            assert!(f.free_vars().is_empty(), "{f}");
            assert!(f.depth() <= 2, "{f}");
            assert!(f.max_nominal() <= 1);
        }
    }

    #[test]
    fn bounded_sentences_are_bounded() {
        let mut rng = seeded_rng(8);
        for sig in [fixtures::unimodal_signature(), fixtures::bounded_signature()] {
            for _ in 0..300 {
                let f = random_bounded(&mut rng, &sig, 2);
                assert!(f.is_bounded(&sig), "{f}");
                assert!(f.quantifier_rank() <= 2);
                assert!(f.free_vars().is_empty(), "{f}");
            }
        }
    }

    #[test]
    fn same_seed_same_formula() {
        let sig = fixtures::bounded_signature();
        let a: Vec<Fo> = (0..5).scan(seeded_rng(3), |r, _| Some(random_fo(r, &sig, 2))).collect();
        let b: Vec<Fo> = (0..5).scan(seeded_rng(3), |r, _| Some(random_fo(r, &sig, 2))).collect();
        assert_eq!(a, b);
    }
}
