use hybrid_core::characterization::*;
use hybrid_core::fixtures::{self, random_structure, seeded_rng, RandomSpec};
use hybrid_core::games::{duplicator_wins, GameVariant};
use hybrid_core::structures::{
    ball_part, gaifman_distance, is_partial_isomorphism, reachable_part, ExtNat, Structure,
};
use proptest::prelude::*;

fn all_fixtures() -> Vec<Structure> {
    fixtures::unimodal_family()
        .into_iter()
        .chain(fixtures::bounded_family())
        .chain([fixtures::path6()])
        .collect()
}

#[test]
fn workspace_strategy_wins_on_every_fixture() {
    for a in all_fixtures().iter().filter(|a| a.len() <= 4) {
        for q in 1..=2 {
            let opts = WorkspaceOptions {
                sabotage: false,
                solve: true,
            };
            let r = verify_workspace_report(a, q, opts).unwrap();
            assert!(r.workspace_size <= 2 * q * a.len());
            assert!(r.passed(), "q={q} {a:?}: {r:?}");
        }
    }
}

#[test]
fn metric_views_are_sums() {
    for a in fixtures::unimodal_family().iter().take(10) {
        let ws = build_workspace(a, 1).unwrap();
        assert!(ws.left.is_consistent(&[&ws.base, &ws.base, &ws.ball]));
        assert!(ws.right.is_consistent(&[&ws.ball, &ws.base, &ws.ball]));
    }
}

/// Every partial isomorphism of size at most two between `a` and `b`.
fn small_partial_isos(a: &Structure, b: &Structure) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..a.len()).flat_map(|x| (0..b.len()).map(move |y| (x, y))).collect();
    let mut out: Vec<Vec<(usize, usize)>> = pairs.iter().map(|&p| vec![p]).collect();
    for (i, &p) in pairs.iter().enumerate() {
        for &r in &pairs[i + 1..] {
            out.push(vec![p, r]);
        }
    }
    out.retain(|m| is_partial_isomorphism(m, a, b));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn separated_partial_isomorphisms_combine(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let spec = RandomSpec::new(fixtures::unimodal_signature(), 5, 0.25);
        let a = random_structure(&mut rng, &spec);
        let b = random_structure(&mut rng, &spec);
        let (da, db) = (gaifman_distance(&a), gaifman_distance(&b));
        let isos = small_partial_isos(&a, &b);
        for alpha in &isos {
            for beta in &isos {
                let dom = |m: &[(usize, usize)]| m.iter().map(|p| p.0).collect::<Vec<_>>();
                let ran = |m: &[(usize, usize)]| m.iter().map(|p| p.1).collect::<Vec<_>>();
                if da.set_distance(&dom(alpha), &dom(beta)) > ExtNat::Finite(1)
                    && db.set_distance(&ran(alpha), &ran(beta)) > ExtNat::Finite(1)
                {
                    let union: Vec<_> = alpha.iter().chain(beta).copied().collect();
                    prop_assert!(is_partial_isomorphism(&union, &a, &b));
                }
            }
        }
    }
}

fn small_pairs(family: &[Structure]) -> Vec<(&Structure, &Structure)> {
    family
        .iter()
        .flat_map(|a| family.iter().map(move |b| (a, b)))
        .collect()
}

#[test]
fn bounded_equivalence_survives_reachable_restriction() {
    let family = fixtures::unimodal_family();
    for (a, b) in small_pairs(&family) {
        for m in 1..=2 {
            if duplicator_wins(a, b, GameVariant::BackForthBounded, m).unwrap() {
                for k in 1..=2 {
                    let (ra, rb) = (reachable_part(a, ExtNat::Finite(k)), reachable_part(b, ExtNat::Finite(k)));
                    assert!(duplicator_wins(&ra, &rb, GameVariant::BackForthBounded, m).unwrap());
                }
            }
        }
    }
}

#[test]
fn long_bounded_games_on_reachable_parts_give_ef_equivalence() {
    let family = fixtures::unimodal_family();
    for (a, b) in small_pairs(&family) {
        for (k, q) in [(1, 1), (1, 2), (2, 1)] {
            let (ra, rb) = (reachable_part(a, ExtNat::Finite(k)), reachable_part(b, ExtNat::Finite(k)));
            if duplicator_wins(&ra, &rb, GameVariant::BackForthBounded, k * q).unwrap() {
                assert!(duplicator_wins(&ra, &rb, GameVariant::Ef, q).unwrap(), "k={k} q={q} {a:?} {b:?}");
            }
        }
    }
}

#[test]
fn temporal_analogues_with_balls() {
    let family = fixtures::unimodal_family();
    for (a, b) in small_pairs(&family) {
        for m in 1..=2 {
            if duplicator_wins(a, b, GameVariant::BackForthTemporal, m).unwrap() {
                for k in 1..=2 {
                    let (sa, sb) = (ball_part(a, k), ball_part(b, k));
                    assert!(duplicator_wins(&sa, &sb, GameVariant::BackForthTemporal, m).unwrap());
                }
            }
        }
        for (k, q) in [(1, 1), (1, 2), (2, 1)] {
            let (sa, sb) = (ball_part(a, k), ball_part(b, k));
            if duplicator_wins(&sa, &sb, GameVariant::BackForthTemporal, k * q).unwrap() {
                assert!(duplicator_wins(&sa, &sb, GameVariant::Ef, q).unwrap());
            }
        }
    }
}

#[test]
fn reachable_part_of_ball_is_reachable_part() {
    for a in all_fixtures() {
        for k in 1..=3 {
            assert_eq!(
                reachable_part(&ball_part(&a, k), ExtNat::Finite(k)),
                reachable_part(&a, ExtNat::Finite(k))
            );
        }
    }
}
