use std::collections::BTreeMap;

use hybrid_core::comonads::{find_cokleisli_morphism, ComonadKind};
use hybrid_core::fixtures::{self, seeded_rng};
use hybrid_core::games::{
    back_and_forth_rank, duplicator_wins, solve, solve_bijection, solve_gk, solve_with, trace, verify_strategy,
    DuplicatorMove, GameError, GameVariant, Player, SolveOptions, Strategy,
};
use hybrid_core::structures::Structure;
use rand::seq::SliceRandom;

fn wins(a: &Structure, b: &Structure, v: GameVariant, k: usize) -> bool {
    duplicator_wins(a, b, v, k).unwrap()
}

const UNIMODAL_VARIANTS: [GameVariant; 8] = [
    GameVariant::ExistentialEf,
    GameVariant::ExistentialHybrid,
    GameVariant::ExistentialBounded,
    GameVariant::Ef,
    GameVariant::BackForthHybrid,
    GameVariant::BackForthBounded,
    GameVariant::BackForthTemporal,
    GameVariant::ComonadicGk,
];

#[test]
fn loop_and_c2_differ_at_depth_zero() {
    let (l, c) = (fixtures::self_loop(), fixtures::c2());
    let r = solve(&l, &c, GameVariant::BackForthHybrid, 0).unwrap();
    assert_eq!(r.winner, Player::Spoiler);
    assert!(trace(&r, &l, &c).contains("E(a,a) holds on the left but E(b0,b0) does not hold on the right"));
    assert!(!wins(&l, &c, GameVariant::ComonadicGk, 1));
    assert!(!back_and_forth_rank(&l, &c, 0).unwrap());
}

#[test]
fn identical_structures_duplicator_wins() {
    for s in fixtures::unimodal_family().iter().take(10) {
        for v in UNIMODAL_VARIANTS.into_iter().chain([GameVariant::Bijection]) {
            for k in 0..=2 {
                assert!(wins(s, s, v, k), "{v} {s:?}");
            }
        }
    }
}

#[test]
fn existential_path_and_loop() {
    let (p, l) = (fixtures::path3(), fixtures::self_loop());
    assert!(wins(&p, &l, GameVariant::ExistentialHybrid, 3));
    assert!(!wins(&l, &p, GameVariant::ExistentialHybrid, 1));
}

#[test]
fn stars_separate_counting_from_plain() {
    let (s2, s3) = (fixtures::star(2), fixtures::star(3));
    let r = solve_bijection(&s2, &s3, 1).unwrap();
    assert_eq!(r.winner, Player::Spoiler);
    assert!(trace(&r, &s2, &s3).contains("sizes 2 and 3"));
    assert!(wins(&s2, &s3, GameVariant::BackForthBounded, 2));
    assert!(!wins(&s2, &s3, GameVariant::BackForthBounded, 3));
    assert!(wins(&s2, &s3, GameVariant::Bijection, 0));
}

#[test]
fn existential_game_matches_cokleisli_search() {
    let fam = fixtures::unimodal_family();
    for a in fam.iter().take(12) {
        for b in fam.iter().take(12) {
            for k in 1..=2 {
                let game = wins(a, b, GameVariant::ExistentialHybrid, k);
                let morph = find_cokleisli_morphism(a, b, ComonadKind::Hybrid, k).unwrap().is_some();
                assert_eq!(game, morph, "{a:?} {b:?} k={k}");
            }
        }
    }
}

#[test]
fn gk_and_rank_agree_with_back_and_forth() {
    let fam = fixtures::unimodal_family();
    for a in fam.iter().take(10) {
        for b in fam.iter().take(10) {
            for k in 0..=2 {
                let bf = wins(a, b, GameVariant::BackForthHybrid, k);
                assert_eq!(bf, wins(a, b, GameVariant::ComonadicGk, k), "{a:?} {b:?} {k}");
                assert_eq!(bf, back_and_forth_rank(a, b, k).unwrap(), "{a:?} {b:?} {k}");
            }
        }
    }
    let fam = fixtures::bounded_family();
    for a in fam.iter().take(10) {
        for b in fam.iter().take(10) {
            for k in 0..=2 {
                assert_eq!(
                    wins(a, b, GameVariant::BackForthBounded, k),
                    back_and_forth_rank(a, b, k).unwrap()
                );
            }
        }
    }
}

#[test]
fn every_strategy_verifies() {
    let fam = fixtures::unimodal_family();
    for a in fam.iter().take(8) {
        for b in fam.iter().take(8) {
            for v in UNIMODAL_VARIANTS.into_iter().chain([GameVariant::Bijection]) {
                for k in 0..=2 {
                    let r = solve(a, b, v, k).unwrap();
                    assert_eq!(verify_strategy(&r, a, b), Ok(true), "{v} {a:?} {b:?} {k}");
                }
            }
        }
    }
}

#[test]
fn corrupted_strategy_fails_verification() {
    let s = fixtures::path3();
    let mut r = solve(&s, &s, GameVariant::BackForthHybrid, 2).unwrap();
    let Strategy::Duplicator(map) = &mut r.strategy else { panic!() };
    let entry = map.get_mut(&r.initial).unwrap();
    let DuplicatorMove::Responses(answers) = entry else { panic!() };
    // Spoiler plays b; answering c breaks the edge from a.
    *answers.values_mut().next().unwrap() = 2;
    assert_eq!(verify_strategy(&r, &s, &s), Ok(false));

    let mut r = solve(&s, &s, GameVariant::Bijection, 1).unwrap();
    let Strategy::Duplicator(map) = &mut r.strategy else { panic!() };
    map.insert(r.initial.clone(), DuplicatorMove::Bijection(vec![]));
    assert_eq!(verify_strategy(&r, &s, &s), Ok(false));

    let mut r = solve(&s, &s, GameVariant::Ef, 1).unwrap();
    r.strategy = Strategy::Duplicator(BTreeMap::new());
    assert!(matches!(verify_strategy(&r, &s, &s), Err(GameError::NotTotal(_))));
}

#[test]
fn monotone_in_rounds() {
    let fam = fixtures::unimodal_family();
    for a in fam.iter().take(10) {
        for b in fam.iter().skip(5).take(10) {
            for v in UNIMODAL_VARIANTS {
                let mut lost = false;
                for k in 0..=3 {
                    let w = wins(a, b, v, k);
                    assert!(!(lost && w), "{v} {a:?} {b:?}");
                    lost |= !w;
                }
            }
        }
    }
}

#[test]
fn relabelling_never_changes_the_winner() {
    let fam = fixtures::unimodal_family();
    let mut rng = seeded_rng(11);
    for a in fam.iter().take(10) {
        let mut order: Vec<usize> = (0..a.len()).collect();
        order.shuffle(&mut rng);
        let a2 = a.reorder(&order).relabel(|x| format!("{x}'"));
        for b in fam.iter().take(10) {
            for v in [GameVariant::BackForthHybrid, GameVariant::Bijection, GameVariant::ExistentialHybrid] {
                assert_eq!(wins(a, b, v, 2), wins(&a2, b, v, 2));
            }
        }
    }
}

#[test]
fn temporal_game_sees_back_edges() {
    let s = fixtures::back_edge();
    let p = fixtures::point();
    assert!(wins(&s, &p, GameVariant::BackForthHybrid, 3));
    assert!(!wins(&s, &p, GameVariant::BackForthTemporal, 1));
}

#[test]
fn resource_guard_trips() {
    let s = fixtures::star(4);
    let opts = SolveOptions { max_positions: 3 };
    assert!(matches!(
        solve_with(&s, &s, GameVariant::Ef, 3, opts),
        Err(GameError::ResourceExceeded { limit: 3 })
    ));
}

#[test]
fn variant_signature_checks() {
    let b = fixtures::bounded_two_constants();
    assert!(matches!(solve(&b, &b, GameVariant::BackForthHybrid, 1), Err(GameError::Variant(_))));
    assert!(matches!(
        solve(&b, &fixtures::path3(), GameVariant::Ef, 1),
        Err(GameError::SignatureMismatch)
    ));
    assert!(wins(&b, &b, GameVariant::BackForthBounded, 2));
    assert_eq!(solve_gk(&fixtures::c2(), &fixtures::c2(), 2).unwrap().winner, Player::Duplicator);
}
