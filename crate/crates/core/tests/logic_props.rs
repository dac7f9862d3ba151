use hybrid_core::fixtures::{self, seeded_rng};
use hybrid_core::logic::random::{random_bounded, random_fo, random_hybrid, HybridSpec};
use hybrid_core::logic::{
    parse_fo_with, parse_hybrid, standard_translation, Assignment, Fo, Guard, ParseOptions, Term,
};
use proptest::prelude::*;

fn spec(backward: bool) -> HybridSpec {
    HybridSpec {
        backward,
        ..HybridSpec::new(3)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn st_commutes_with_evaluation(seed in any::<u64>(), backward in any::<bool>()) {
        let f = random_hybrid(&mut seeded_rng(seed), &spec(backward));
        let g = standard_translation(&f, &Term::Const(1));
        let sig = fixtures::unimodal_signature();
        prop_assert!(g.is_bounded(&sig), "{}", g);
        prop_assert!(g.free_vars().is_empty());
        prop_assert!(g.quantifier_rank() >= f.depth());
        for s in fixtures::unimodal_family() {
            prop_assert_eq!(f.eval(&s).unwrap(), g.eval(&s, &Assignment::new()).unwrap(), "{} on {:?}", f, s);
        }
    }

    #[test]
    fn hybrid_printing_round_trips(seed in any::<u64>()) {
        let f = random_hybrid(&mut seeded_rng(seed), &spec(true));
        prop_assert_eq!(parse_hybrid(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn fo_printing_round_trips(seed in any::<u64>(), bounded in any::<bool>()) {
        let sig = fixtures::bounded_signature();
        let mut rng = seeded_rng(seed);
        let f = if bounded { random_bounded(&mut rng, &sig, 2) } else { random_fo(&mut rng, &sig, 2) };
        let opts = ParseOptions::closed().with_constants(2);
        prop_assert_eq!(parse_fo_with(&f.to_string(), opts).unwrap(), f);
    }

    #[test]
    fn guards_expand_to_plain_formulas(seed in any::<u64>()) {
        let sig = fixtures::bounded_signature();
        let f = random_bounded(&mut seeded_rng(seed), &sig, 2);
        let g = f.expand_acc();
        prop_assert!(g.is_plain());
        for s in fixtures::bounded_family() {
            prop_assert_eq!(f.eval(&s, &Assignment::new()).unwrap(), g.eval(&s, &Assignment::new()).unwrap());
        }
    }

    #[test]
    fn counting_quantifier_counts(i in 1usize..5, n in 0usize..5) {
        let s = fixtures::star(n);
        let guard = Guard::Acc { relations: vec!["E".into()], sources: vec![Term::Const(1)] };
        let at_least = Fo::count(i, "y", guard.clone(), Fo::True);
        let exactly = Fo::exactly(i, "y", guard, Fo::True);
        let env = Assignment::new();
        prop_assert_eq!(at_least.eval(&s, &env).unwrap(), n >= i);
        prop_assert_eq!(exactly.eval(&s, &env).unwrap(), n == i);
        prop_assert_eq!(at_least.expand_acc().eval(&s, &env).unwrap(), n >= i);
        prop_assert_eq!(exactly.expand_acc().eval(&s, &env).unwrap(), n == i);
    }
}
