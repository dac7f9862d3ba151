use std::collections::BTreeSet;

use super::fo::{fresh_var, Fo, Term};
use crate::structures::Signature;

/// `d(a,b) ≤ k` in the Gaifman graph of any `sig`-structure, as a
/// first-order formula of quantifier rank `k` (plus one for relations of
/// arity above two).
pub fn distance_at_most(a: &Term, b: &Term, k: usize, sig: &Signature, avoid: &BTreeSet<String>) -> Fo {
    let mut used = avoid.clone();
    for t in [a, b] {
        if let Term::Var(v) = t {
            used.insert(v.clone());
        }
    }
    dist(a, b, k, sig, &mut used)
}

fn dist(a: &Term, b: &Term, k: usize, sig: &Signature, used: &mut BTreeSet<String>) -> Fo {
    let same = Fo::Eq(a.clone(), b.clone());
    if k == 0 {
        return same;
    }
    let z = fresh_var("z", used);
    used.insert(z.clone());
    let zt = Term::Var(z.clone());
    let step = Fo::and(adjacent(a, &zt, sig, used), dist(&zt, b, k - 1, sig, used));
    Fo::or(same, Fo::exists(z, step))
}

/// Gaifman adjacency: `a` and `b` occur together in some tuple.
fn adjacent(a: &Term, b: &Term, sig: &Signature, used: &mut BTreeSet<String>) -> Fo {
    let mut parts = Vec::new();
    for (r, &arity) in sig.relations() {
        if arity < 2 {
            continue;
        }
        for i in 0..arity {
            for j in 0..arity {
                if i == j {
                    continue;
                }
                let mut others = Vec::new();
                let args: Vec<Term> = (0..arity)
                    .map(|p| {
                        if p == i {
                            a.clone()
                        } else if p == j {
                            b.clone()
                        } else {
                            let w = fresh_var("w", used);
                            used.insert(w.clone());
                            others.push(w.clone());
                            Term::Var(w)
                        }
                    })
                    .collect();
                let atom = Fo::Rel(r.clone(), args);
                parts.push(others.into_iter().rev().fold(atom, |f, w| Fo::exists(w, f)));
            }
        }
    }
    Fo::or_all(parts)
}

/// Relativizes every quantifier of `f` to the closed `k`-ball around the
/// fixed tuple `xs`: `∃y.ψ` becomes `∃y.(d(xs,y) ≤ k ∧ ψ')`, `∀y.ψ` becomes
/// `∀y.(d(xs,y) ≤ k → ψ')`, and likewise inside guarded and counting
/// quantifiers. The ball stays centred on `xs` at every depth.
pub fn gaifman_relativize(f: &Fo, xs: &[Term], k: usize, sig: &Signature) -> Fo {
    let mut used = f.all_vars();
    for x in xs {
        if let Term::Var(v) = x {
            used.insert(v.clone());
        }
    }
    let centre: BTreeSet<String> = xs
        .iter()
        .filter_map(|t| match t {
            Term::Var(v) => Some(v.clone()),
            Term::Const(_) => None,
        })
        .collect();
    Relativizer { xs, k, sig, used, centre }.go(f)
}

struct Relativizer<'a> {
    xs: &'a [Term],
    k: usize,
    sig: &'a Signature,
    used: BTreeSet<String>,
    centre: BTreeSet<String>,
}

impl Relativizer<'_> {
    fn near(&mut self, y: &str) -> Fo {
        let yt = Term::var(y);
        let xs = self.xs.to_vec();
        let disjuncts: Vec<Fo> = xs
            .iter()
            .map(|x| distance_at_most(x, &yt, self.k, self.sig, &self.used))
            .collect();
        Fo::or_all(disjuncts)
    }

    /// Renames a bound variable that would shadow a centre variable.
    fn binder(&mut self, y: &str, body: &Fo) -> (String, Fo) {
        if self.centre.contains(y) {
            let fresh = fresh_var(y, &self.used);
            self.used.insert(fresh.clone());
            let renamed = body.substitute(y, &Term::Var(fresh.clone()));
            (fresh, renamed)
        } else {
            (y.to_string(), body.clone())
        }
    }

    fn go(&mut self, f: &Fo) -> Fo {
        match f {
            Fo::True | Fo::False | Fo::Rel(..) | Fo::Eq(..) => f.clone(),
            Fo::Not(a) => Fo::not(self.go(a)),
            Fo::And(a, b) => Fo::and(self.go(a), self.go(b)),
            Fo::Or(a, b) => Fo::or(self.go(a), self.go(b)),
            Fo::Implies(a, b) => Fo::implies(self.go(a), self.go(b)),
            Fo::Exists(y, a) => {
                let (y, a) = self.binder(y, a);
                let body = Fo::and(self.near(&y), self.go(&a));
                Fo::exists(y, body)
            }
            Fo::Forall(y, a) => {
                let (y, a) = self.binder(y, a);
                let body = Fo::implies(self.near(&y), self.go(&a));
                Fo::forall(y, body)
            }
            Fo::BoundedExists(y, g, a) => {
                let (y, a) = self.binder(y, a);
                let body = Fo::and(self.near(&y), self.go(&a));
                Fo::bexists(y, g.clone(), body)
            }
            Fo::BoundedForall(y, g, a) => {
                let (y, a) = self.binder(y, a);
                let body = Fo::implies(self.near(&y), self.go(&a));
                Fo::bforall(y, g.clone(), body)
            }
            Fo::CountExists(i, y, g, a) => {
                let (y, a) = self.binder(y, a);
                let body = Fo::and(self.near(&y), self.go(&a));
                Fo::count(*i, y, g.clone(), body)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::logic::{parse_fo, Assignment};
    use crate::structures::{ball_part, gaifman_distance, ExtNat};

    #[test]
    fn relativized_existential() {
        let sig = fixtures::unimodal_signature();
        let f = parse_fo("exists y P(y)").unwrap();
        let g = gaifman_relativize(&f, &[Term::Const(1)], 1, &sig);
        assert_eq!(
            g.to_string(),
            "exists y ((c1 = y | exists z1 ((E(c1,z1) | E(z1,c1)) & z1 = y)) & P(y))"
        );
    }

    #[test]
    fn quantifier_free_is_unchanged() {
        let sig = fixtures::unimodal_signature();
        let f = parse_fo("E(c1,c1) & !P(c1)").unwrap();
        assert_eq!(gaifman_relativize(&f, &[Term::Const(1)], 3, &sig), f);
    }

    #[test]
    fn distance_formula_matches_bfs() {
        let sig = fixtures::unimodal_signature();
        let s = fixtures::path6();
        let d = gaifman_distance(&s);
        for k in 0..4 {
            let f = distance_at_most(&Term::var("a"), &Term::var("b"), k, &sig, &BTreeSet::new());
            for x in 0..s.len() {
                for y in 0..s.len() {
                    let env = Assignment::from([("a".to_string(), x), ("b".to_string(), y)]);
                    assert_eq!(f.eval(&s, &env).unwrap(), d.get(x, y) <= ExtNat::Finite(k));
                }
            }
        }
    }

    #[test]
    fn ternary_adjacency_uses_an_existential() {
        let sig = Signature::new([("R", 3)], Vec::<String>::new(), 1).unwrap();
        let s = crate::structures::Structure::builder(sig.clone())
            .elements(["a", "b", "c", "d"])
            .tuple("R", ["a", "b", "c"])
            .basepoints(["a"])
            .build()
            .unwrap();
        let f = distance_at_most(&Term::Const(1), &Term::var("v"), 1, &sig, &BTreeSet::new());
        for (x, want) in [(0, true), (1, true), (2, true), (3, false)] {
            let env = Assignment::from([("v".to_string(), x)]);
            assert_eq!(f.eval(&s, &env).unwrap(), want);
        }
    }

    #[test]
    fn property_star_on_path6() {
        let sig = fixtures::unimodal_signature();
        let s = fixtures::path6();
        let ball = ball_part(&s, 1);
        for text in [
            "exists y (E(c1,y) & exists z E(y,z))",
            "forall y exists z E(y,z)",
            "exists y exists z (E(y,z) & !(y = c1))",
            "exists y P(y) | forall y !(y = y)",
        ] {
            let f = parse_fo(text).unwrap();
            let g = gaifman_relativize(&f, &[Term::Const(1)], 1, &sig);
            let env = Assignment::new();
            assert_eq!(g.eval(&s, &env).unwrap(), f.eval(&ball, &env).unwrap(), "{text}");
        }
    }
}
