use std::collections::BTreeSet;

use super::fo::{fresh_var, Fo, Guard, Term};
use super::hybrid::{AtTarget, Hybrid};

/// Standard translation of `f` at the anchor term, over the transition
/// relation `E`.
pub fn standard_translation(f: &Hybrid, anchor: &Term) -> Fo {
    standard_translation_over(f, anchor, "E")
}

/// Standard translation over an arbitrary transition relation. Quantified
/// variables are fresh: they avoid every variable of `f` and the anchor.
pub fn standard_translation_over(f: &Hybrid, anchor: &Term, relation: &str) -> Fo {
    let mut used = f.all_vars();
    if let Term::Var(x) = anchor {
        used.insert(x.clone());
    }
    let mut st = Translator { relation, used };
    st.go(f, anchor)
}

struct Translator<'r> {
    relation: &'r str,
    used: BTreeSet<String>,
}

impl Translator<'_> {
    fn fresh(&mut self) -> String {
        let y = fresh_var("y", &self.used);
        self.used.insert(y.clone());
        y
    }

    fn go(&mut self, f: &Hybrid, x: &Term) -> Fo {
        match f {
            Hybrid::True => Fo::True,
            Hybrid::False => Fo::False,
            Hybrid::Atom(p) => Fo::Rel(p.clone(), vec![x.clone()]),
            Hybrid::Var(v) => Fo::Eq(x.clone(), Term::Var(v.clone())),
            Hybrid::Nominal(i) => Fo::Eq(x.clone(), Term::Const(*i)),
            Hybrid::Not(a) => Fo::not(self.go(a, x)),
            Hybrid::And(a, b) => Fo::and(self.go(a, x), self.go(b, x)),
            Hybrid::Or(a, b) => Fo::or(self.go(a, x), self.go(b, x)),
            Hybrid::Dia(a) => self.modal(a, x, false, false),
            Hybrid::Box(a) => self.modal(a, x, false, true),
            Hybrid::DiaInv(a) => self.modal(a, x, true, false),
            Hybrid::BoxInv(a) => self.modal(a, x, true, true),
            // ST_x(down v. φ) = ST_x(φ)[x/v]
            Hybrid::Down(v, a) => self.go(a, x).substitute(v, x),
            // ST_x(@v φ) = ST_x(φ)[v/x], computed as ST_v(φ) so that a world
            // variable that happens to share the anchor's name is untouched.
            Hybrid::At(AtTarget::Var(v), a) => self.go(a, &Term::Var(v.clone())),
            Hybrid::At(AtTarget::Nominal(i), a) => self.go(a, &Term::Const(*i)),
        }
    }

    fn modal(&mut self, a: &Hybrid, x: &Term, backward: bool, universal: bool) -> Fo {
        let y = self.fresh();
        let body = self.go(a, &Term::Var(y.clone()));
        let guard = Guard::Edge {
            relation: self.relation.to_string(),
            source: x.clone(),
            backward,
        };
        if universal {
            Fo::bforall(y, guard, body)
        } else {
            Fo::bexists(y, guard, body)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::logic::parse::{parse_hybrid, parse_hybrid_with, ParseOptions};

    fn st(text: &str) -> String {
        let f = parse_hybrid_with(text, ParseOptions::open()).unwrap();
        standard_translation(&f, &Term::var("x")).to_string()
    }

    #[test]
    fn table_clauses() {
        assert_eq!(st("dia p"), "exists y1 (E(x,y1) & P(y1))");
        assert_eq!(st("p"), "P(x)");
        assert_eq!(st("down x2. dia x2"), "exists y1 (E(x,y1) & y1 = x)");
        assert_eq!(st("box !p"), "forall y1 (E(x,y1) -> !P(y1))");
        assert_eq!(st("diainv c1"), "exists y1 (E(y1,x) & y1 = c1)");
        assert_eq!(st("@z p"), "P(z)");
    }

    #[test]
    fn output_is_bounded() {
        let sig = fixtures::unimodal_signature();
        let f = parse_hybrid("down x. dia (p & box down y. @x dia y)").unwrap();
        let g = standard_translation(&f, &Term::Const(1));
        assert!(g.is_bounded(&sig));
        assert!(g.free_vars().is_empty());
        // `dia y` has modal depth 0 but still translates to a quantifier.
        assert_eq!(f.depth(), 2);
        assert_eq!(g.quantifier_rank(), 3);
    }

    #[test]
    fn binder_named_like_fresh_variable() {
        // The fresh-variable supply must not collide with the user's y1.
        let f = parse_hybrid("down y1. dia dia y1").unwrap();
        let g = standard_translation(&f, &Term::Const(1));
        for s in [fixtures::c2(), fixtures::self_loop(), fixtures::path3()] {
            assert_eq!(
                g.eval(&s, &Default::default()).unwrap(),
                f.eval(&s).unwrap(),
                "{g} on {s:?}"
            );
        }
    }
}
