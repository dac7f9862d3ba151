//! The idempotent substructure comonads: the k-reachable part `R_k` (directed,
//! transition relations only) and the Gaifman ball `S_k` (undirected, every
//! relation). Both keep the basepoints and their counit is the inclusion.

use std::collections::BTreeSet;

use super::gaifman::{bfs, gaifman_graph};
use super::{ExtNat, Structure};

/// Elements reachable from some basepoint by a directed transition path of
/// length at most `k`.
pub fn reachable_set(s: &Structure, k: ExtNat) -> BTreeSet<usize> {
    let succ = s.transition_successors();
    bfs(&succ, s.basepoints())
        .into_iter()
        .enumerate()
        .filter(|&(_, d)| d.is_finite() && d <= k)
        .map(|(x, _)| x)
        .collect()
}

/// `R_k` for finite `k`, `R` for `ExtNat::Infinite`.
pub fn reachable_part(s: &Structure, k: ExtNat) -> Structure {
    s.induced_substructure(&reachable_set(s, k))
}

pub fn ball_set(s: &Structure, k: usize) -> BTreeSet<usize> {
    let adj = gaifman_graph(s);
    bfs(&adj, s.basepoints())
        .into_iter()
        .enumerate()
        .filter(|&(_, d)| d <= ExtNat::Finite(k))
        .map(|(x, _)| x)
        .collect()
}

/// `S_k`: the substructure induced on the union of closed Gaifman balls of
/// radius `k` around the basepoints.
pub fn ball_part(s: &Structure, k: usize) -> Structure {
    s.induced_substructure(&ball_set(s, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::structures::disjoint_union;

    fn names(s: &Structure) -> Vec<&str> {
        s.universe().iter().map(String::as_str).collect()
    }

    #[test]
    fn reachable_one_step_on_path3() {
        let p = fixtures::path3();
        assert_eq!(names(&reachable_part(&p, ExtNat::Finite(1))), ["a", "b"]);
        assert_eq!(reachable_part(&p, ExtNat::Infinite), p);
    }

    #[test]
    fn direction_matters_for_reachability_but_not_for_balls() {
        let s = fixtures::back_edge();
        assert_eq!(names(&reachable_part(&s, ExtNat::Infinite)), ["a"]);
        assert_eq!(names(&ball_part(&s, 1)), ["a", "b"]);
    }

    #[test]
    fn ball_on_path3() {
        let p = fixtures::path3();
        assert_eq!(names(&ball_part(&p, 1)), ["a", "b"]);
        assert_eq!(ball_part(&p, 5), p);
    }

    #[test]
    fn right_summand_is_ignored() {
        let a = fixtures::path3();
        let b = fixtures::c2();
        let u = disjoint_union(&a, &b).unwrap();
        let ra = reachable_part(&a, ExtNat::Finite(2)).relabel(|x| format!("L:{x}"));
        assert_eq!(reachable_part(&u, ExtNat::Finite(2)), ra);
        let sa = ball_part(&a, 1).relabel(|x| format!("L:{x}"));
        assert_eq!(ball_part(&u, 1), sa);
    }
}
