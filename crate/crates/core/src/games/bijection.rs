//! The bounded bijection game for counting logic. Duplicator's bijection is
//! found as a perfect matching between the accessible sets, where `a` may go
//! to `b` iff Duplicator still wins after the pair `(a,b)`; when none
//! exists, Hall's condition fails on a set Spoiler can exploit.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{
    extended, initial_position, pair_set, DuplicatorMove, GameError, GameResult, GameVariant, Player, Position,
    SolveOptions, SpoilerPlan, Strategy,
};
use crate::structures::{partial_map_violation, MapKind, MapViolation, Structure};

/// Elements one transition step from some element of `from`.
pub(crate) fn accessible(s: &Structure, from: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let succ = s.transition_successors();
    let set: BTreeSet<usize> = from.into_iter().flat_map(|x| succ[x].iter().copied()).collect();
    set.into_iter().collect()
}

pub(crate) struct BijectionGame<'a> {
    a: &'a Structure,
    b: &'a Structure,
    memo: HashMap<(Vec<(usize, usize)>, usize), bool>,
    limit: usize,
}

/// Outcome of the matching step at one position.
enum Round {
    Clash(usize, usize),
    Matched(Vec<(usize, usize)>),
    Hall(Vec<usize>, Vec<usize>),
}

impl<'a> BijectionGame<'a> {
    pub fn new(a: &'a Structure, b: &'a Structure, limit: usize) -> Self {
        BijectionGame {
            a,
            b,
            memo: HashMap::new(),
            limit,
        }
    }

    pub fn violation(&self, pos: &[(usize, usize)]) -> Option<MapViolation> {
        partial_map_violation(pos, self.a, self.b, MapKind::Isomorphism)
    }

    pub fn accessible_sets(&self, pos: &[(usize, usize)]) -> (Vec<usize>, Vec<usize>) {
        (
            accessible(self.a, pos.iter().map(|p| p.0)),
            accessible(self.b, pos.iter().map(|p| p.1)),
        )
    }

    pub fn wins(&mut self, pos: &[(usize, usize)], rounds: usize) -> Result<bool, GameError> {
        if self.violation(pos).is_some() {
            return Ok(false);
        }
        if rounds == 0 {
            return Ok(true);
        }
        let key = (pair_set(pos), rounds);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        if self.memo.len() >= self.limit {
            return Err(GameError::ResourceExceeded { limit: self.limit });
        }
        let value = matches!(self.round(pos, rounds)?, Round::Matched(_));
        self.memo.insert(key, value);
        Ok(value)
    }

    fn round(&mut self, pos: &[(usize, usize)], rounds: usize) -> Result<Round, GameError> {
        let (acc_a, acc_b) = self.accessible_sets(pos);
        if acc_a.len() != acc_b.len() {
            return Ok(Round::Clash(acc_a.len(), acc_b.len()));
        }
        let mut adj: Vec<Vec<usize>> = Vec::with_capacity(acc_a.len());
        for &x in &acc_a {
            let mut row = Vec::new();
            for (j, &y) in acc_b.iter().enumerate() {
                if self.wins(&extended(pos, (x, y)), rounds - 1)? {
                    row.push(j);
                }
            }
            adj.push(row);
        }
        Ok(match perfect_matching(&adj, acc_b.len()) {
            Ok(m) => Round::Matched(m.iter().enumerate().map(|(i, &j)| (acc_a[i], acc_b[j])).collect()),
            Err((s, n)) => Round::Hall(
                s.into_iter().map(|i| acc_a[i]).collect(),
                n.into_iter().map(|j| acc_b[j]).collect(),
            ),
        })
    }

    fn duplicator_strategy(
        &mut self,
        pos: &Position,
        rounds: usize,
        out: &mut BTreeMap<Position, DuplicatorMove>,
    ) -> Result<(), GameError> {
        if rounds == 0 || out.contains_key(pos) {
            return Ok(());
        }
        let Round::Matched(f) = self.round(pos, rounds)? else {
            unreachable!("duplicator_strategy called on a Spoiler win");
        };
        out.insert(pos.clone(), DuplicatorMove::Bijection(f.clone()));
        for pair in f {
            self.duplicator_strategy(&extended(pos, pair), rounds - 1, out)?;
        }
        Ok(())
    }

    fn spoiler_strategy(
        &mut self,
        pos: &Position,
        rounds: usize,
        out: &mut BTreeMap<Position, SpoilerPlan>,
    ) -> Result<(), GameError> {
        if out.contains_key(pos) {
            return Ok(());
        }
        if let Some(v) = self.violation(pos) {
            out.insert(pos.clone(), SpoilerPlan::Violation(v));
            return Ok(());
        }
        match self.round(pos, rounds)? {
            Round::Clash(l, r) => {
                out.insert(pos.clone(), SpoilerPlan::Clash { left: l, right: r });
            }
            Round::Hall(s, n) => {
                let (_, acc_b) = self.accessible_sets(pos);
                out.insert(
                    pos.clone(),
                    SpoilerPlan::Hall {
                        left: s.clone(),
                        right: n.clone(),
                    },
                );
                for &x in &s {
                    for &y in acc_b.iter().filter(|y| !n.contains(y)) {
                        self.spoiler_strategy(&extended(pos, (x, y)), rounds - 1, out)?;
                    }
                }
            }
            Round::Matched(_) => unreachable!("spoiler_strategy called on a Duplicator win"),
        }
        Ok(())
    }
}

/// Perfect matching of left vertices `0..adj.len()` into `0..right`, or a
/// Hall violator `(S, N(S))` with `|N(S)| < |S|`.
fn perfect_matching(adj: &[Vec<usize>], right: usize) -> Result<Vec<usize>, (Vec<usize>, Vec<usize>)> {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                if owner[v].is_none_or(|w| augment(w, adj, seen, owner)) {
                    owner[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let mut owner: Vec<Option<usize>> = vec![None; right];
    for u in 0..adj.len() {
        let mut seen = vec![false; right];
        if !augment(u, adj, &mut seen, &mut owner) {
            // Alternating search from the unmatched u: every right vertex
            // reached is matched, so |N(S)| = |S| − 1.
            let mut s = BTreeSet::from([u]);
            let mut n = BTreeSet::new();
            let mut stack = vec![u];
            while let Some(x) = stack.pop() {
                for &v in &adj[x] {
                    if n.insert(v) {
                        if let Some(w) = owner[v] {
                            if s.insert(w) {
                                stack.push(w);
                            }
                        }
                    }
                }
            }
            return Err((s.into_iter().collect(), n.into_iter().collect()));
        }
    }
    let mut matched = vec![usize::MAX; adj.len()];
    for (v, o) in owner.iter().enumerate() {
        if let Some(u) = o {
            matched[*u] = v;
        }
    }
    Ok(matched)
}

pub(crate) fn solve(a: &Structure, b: &Structure, k: usize, opts: SolveOptions) -> Result<GameResult, GameError> {
    let mut game = BijectionGame::new(a, b, opts.max_positions);
    let initial = initial_position(a, b);
    let win = game.wins(&initial, k)?;
    let strategy = if win {
        let mut out = BTreeMap::new();
        game.duplicator_strategy(&initial, k, &mut out)?;
        Strategy::Duplicator(out)
    } else {
        let mut out = BTreeMap::new();
        game.spoiler_strategy(&initial, k, &mut out)?;
        Strategy::Spoiler(out)
    };
    Ok(GameResult {
        variant: GameVariant::Bijection,
        rounds: k,
        winner: if win { Player::Duplicator } else { Player::Spoiler },
        initial,
        strategy,
        explored: game.memo.len(),
    })
}

/// The `m + k`-round bounded bijection game.
pub fn solve_bijection(a: &Structure, b: &Structure, k: usize) -> Result<GameResult, GameError> {
    super::solve(a, b, GameVariant::Bijection, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_and_hall_sets() {
        let adj = vec![vec![0, 1], vec![0], vec![1]];
        let (s, n) = perfect_matching(&adj, 3).unwrap_err();
        assert!(n.len() < s.len());
        let adj = vec![vec![1], vec![0, 1]];
        assert_eq!(perfect_matching(&adj, 2), Ok(vec![1, 0]));
        assert_eq!(perfect_matching(&[], 0), Ok(vec![]));
    }
}
