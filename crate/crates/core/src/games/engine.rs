//! Pebble-free games on pairs of element sequences: the existential,
//! Ehrenfeucht–Fraïssé and back-and-forth variants.

use std::collections::{BTreeMap, HashMap};

use super::{
    extended, initial_position, pair_set, DuplicatorMove, GameError, GameResult, GameVariant, Player, Position,
    Side, SolveOptions, SpoilerPlan, Strategy,
};
use crate::structures::{partial_map_violation, MapKind, MapViolation, Structure};

pub(crate) struct Game<'a> {
    pub a: &'a Structure,
    pub b: &'a Structure,
    pub variant: GameVariant,
    memo: HashMap<(Vec<(usize, usize)>, usize), bool>,
    limit: usize,
}

impl<'a> Game<'a> {
    pub fn new(a: &'a Structure, b: &'a Structure, variant: GameVariant, limit: usize) -> Self {
        Game {
            a,
            b,
            variant,
            memo: HashMap::new(),
            limit,
        }
    }

    pub fn violation(&self, pos: &[(usize, usize)]) -> Option<MapViolation> {
        let kind = if self.variant.is_existential() {
            MapKind::Homomorphism
        } else {
            MapKind::Isomorphism
        };
        partial_map_violation(pos, self.a, self.b, kind)
    }

    /// Spoiler's legal moves, left side first, each side in universe order.
    pub fn spoiler_moves(&self, pos: &[(usize, usize)]) -> Vec<(Side, usize)> {
        let rule = self.variant.rule();
        let mut moves = Vec::new();
        let lefts = pos.iter().map(|p| p.0);
        for x in 0..self.a.len() {
            if rule.legal(self.a, lefts.clone(), x) {
                moves.push((Side::Left, x));
            }
        }
        if !self.variant.is_existential() {
            let rights = pos.iter().map(|p| p.1);
            for y in 0..self.b.len() {
                if rule.legal(self.b, rights.clone(), y) {
                    moves.push((Side::Right, y));
                }
            }
        }
        moves
    }

    pub fn responses(&self, side: Side) -> std::ops::Range<usize> {
        match side {
            Side::Left => 0..self.b.len(),
            Side::Right => 0..self.a.len(),
        }
    }

    pub fn pair(side: Side, mv: usize, resp: usize) -> (usize, usize) {
        match side {
            Side::Left => (mv, resp),
            Side::Right => (resp, mv),
        }
    }

    /// Duplicator wins from `pos` with `rounds` rounds left.
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
        let mut value = true;
        for (side, mv) in self.spoiler_moves(pos) {
            let mut answered = false;
            for resp in self.responses(side) {
                if self.wins(&extended(pos, Self::pair(side, mv, resp)), rounds - 1)? {
                    answered = true;
                    break;
                }
            }
            if !answered {
                value = false;
                break;
            }
        }
        self.memo.insert(key, value);
        Ok(value)
    }

    pub fn explored(&self) -> usize {
        self.memo.len()
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
        let mut answers = BTreeMap::new();
        let mut next = Vec::new();
        for (side, mv) in self.spoiler_moves(pos) {
            for resp in self.responses(side) {
                let p = extended(pos, Self::pair(side, mv, resp));
                if self.wins(&p, rounds - 1)? {
                    answers.insert((side, mv), resp);
                    next.push(p);
                    break;
                }
            }
        }
        out.insert(pos.clone(), DuplicatorMove::Responses(answers));
        for p in next {
            self.duplicator_strategy(&p, rounds - 1, out)?;
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
        for (side, mv) in self.spoiler_moves(pos) {
            let mut refuted = true;
            for resp in self.responses(side) {
                if self.wins(&extended(pos, Self::pair(side, mv, resp)), rounds - 1)? {
                    refuted = false;
                    break;
                }
            }
            if refuted {
                out.insert(pos.clone(), SpoilerPlan::Move(side, mv));
                for resp in self.responses(side) {
                    let p = extended(pos, Self::pair(side, mv, resp));
                    self.spoiler_strategy(&p, rounds - 1, out)?;
                }
                return Ok(());
            }
        }
        unreachable!("spoiler_strategy called on a Duplicator win")
    }
}

pub(crate) fn solve(
    a: &Structure,
    b: &Structure,
    variant: GameVariant,
    k: usize,
    opts: SolveOptions,
) -> Result<GameResult, GameError> {
    let mut game = Game::new(a, b, variant, opts.max_positions);
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
        variant,
        rounds: k,
        winner: if win { Player::Duplicator } else { Player::Spoiler },
        initial,
        strategy,
        explored: game.explored(),
    })
}
