use hybrid_core::coalgebras::*;
use hybrid_core::comonads::{build_comonad, counit, ComonadKind};
use hybrid_core::fixtures;
use hybrid_core::structures::{ExtNat, Structure};

fn prefix_cover(c: &hybrid_core::comonads::ComonadStructure) -> TreeCover {
    TreeCover {
        parent: (0..c.len()).map(|i| c.parent(i)).collect(),
    }
}

#[test]
fn covers_and_coalgebras_correspond_on_the_unimodal_family() {
    for s in fixtures::unimodal_family() {
        for kind in [ComonadKind::Hybrid, ComonadKind::HybridTemporal] {
            let covers = enumerate_generated_covers(&s, kind).unwrap();
            for k in 1..=3 {
                let mut via_covers: Vec<_> = covers
                    .iter()
                    .filter(|t| t.height() <= k + 1)
                    .map(|t| {
                        let c = cover_to_coalgebra(&s, t, kind, k).unwrap();
                        assert!(check_coalgebra_laws(&c).all_pass());
                        assert_eq!(&coalgebra_to_cover(&c).unwrap(), t);
                        c.alpha
                    })
                    .collect();
                let mut direct: Vec<_> = enumerate_coalgebras(&s, kind, k)
                    .unwrap()
                    .into_iter()
                    .map(|c| c.alpha)
                    .collect();
                via_covers.sort();
                direct.sort();
                assert_eq!(via_covers, direct, "{kind} k={k} on {s:?}");
            }
        }
    }
}

#[test]
fn bounded_covers_and_coalgebras_correspond() {
    for s in fixtures::bounded_family().into_iter().filter(|s| s.len() <= 5) {
        let covers = enumerate_generated_covers(&s, ComonadKind::Bounded).unwrap();
        let m = s.basepoints().len();
        for t in &covers {
            for (i, &b) in s.basepoints().iter().enumerate() {
                assert_eq!(t.branch(b).unwrap(), s.basepoints()[..=i]);
            }
            assert!(t.height() >= m);
        }
        for k in 1..=2 {
            let from_covers = covers.iter().filter(|t| t.height() - m <= k).count();
            let direct = enumerate_coalgebras(&s, ComonadKind::Bounded, k).unwrap();
            assert_eq!(from_covers, direct.len(), "k={k} on {s:?}");
            for c in &direct {
                let t = coalgebra_to_cover(c).unwrap();
                assert_eq!(is_generated_tree_cover(&s, &t, ComonadKind::Bounded, Some(k)), Ok(true));
            }
        }
    }
}

#[test]
fn prefix_order_is_a_generated_cover_of_the_carrier() {
    for s in [fixtures::path3(), fixtures::star(3), fixtures::c2(), fixtures::self_loop()] {
        for k in 1..=2 {
            let c = build_comonad(&s, ComonadKind::Hybrid, k, false).unwrap();
            let carrier: &Structure = c.carrier();
            let r = prefix_cover(&c);
            assert_eq!(
                is_generated_tree_cover(carrier, &r, ComonadKind::Hybrid, Some(k)),
                Ok(true),
                "{s:?} k={k}"
            );
        }
    }
}

#[test]
fn unit_then_counit_is_the_identity() {
    let s = fixtures::path3();
    for t in enumerate_generated_covers(&s, ComonadKind::Hybrid).unwrap() {
        let k = t.height() - 1;
        let coalg = cover_to_coalgebra(&s, &t, ComonadKind::Hybrid, k).unwrap();
        let unit: Vec<usize> = coalg.alpha.iter().map(|p| coalg.target.index_of(p).unwrap()).collect();
        let r = prefix_cover(&coalg.target);
        assert!(is_cover_morphism(&unit, &s, &t, coalg.target.carrier(), &r));
        for (x, p) in coalg.alpha.iter().enumerate() {
            assert_eq!(counit(&coalg.target, p), Ok(x));
        }
    }
}

#[test]
fn coalgebra_number_tracks_depth() {
    for s in fixtures::unimodal_family() {
        let depth = generated_tree_depth(&s, ComonadKind::Hybrid).unwrap();
        let number = coalgebra_number(&s, ComonadKind::Hybrid).unwrap();
        let least_k = match depth {
            ExtNat::Finite(d) => ExtNat::Finite((1..).find(|&k| d <= k + 1).unwrap()),
            ExtNat::Infinite => ExtNat::Infinite,
        };
        assert_eq!(number, least_k, "{s:?}");
    }
}

#[test]
fn bounded_family_has_covers() {
    let with_covers = fixtures::bounded_family()
        .iter()
        .filter(|s| s.len() <= 5)
        .filter(|s| !enumerate_generated_covers(s, ComonadKind::Bounded).unwrap().is_empty())
        .count();
    assert!(with_covers >= 5, "{with_covers}");
}
