//! Independent replay of extracted strategies, and readable transcripts.

use std::collections::BTreeSet;
use std::fmt::Write;

use super::bijection::accessible;
use super::{
    extended, DuplicatorMove, GameError, GameResult, GameVariant, MoveRule, Player, Position, Side, SpoilerPlan,
    Strategy,
};
use crate::structures::{partial_map_violation, MapKind, MapViolation, Structure};

struct Replay<'a> {
    a: &'a Structure,
    b: &'a Structure,
    variant: GameVariant,
}

impl Replay<'_> {
    fn rule(&self) -> MoveRule {
        match self.variant {
            GameVariant::ComonadicGk => MoveRule::Forward,
            v => v.rule(),
        }
    }

    fn violation(&self, pos: &[(usize, usize)]) -> Option<MapViolation> {
        let kind = if self.variant.is_existential() {
            MapKind::Homomorphism
        } else {
            MapKind::Isomorphism
        };
        partial_map_violation(pos, self.a, self.b, kind)
    }

    fn moves(&self, pos: &[(usize, usize)]) -> Vec<(Side, usize)> {
        let rule = self.rule();
        let lefts = pos.iter().map(|p| p.0);
        let rights = pos.iter().map(|p| p.1);
        let mut out: Vec<(Side, usize)> = (0..self.a.len())
            .filter(|&x| rule.legal(self.a, lefts.clone(), x))
            .map(|x| (Side::Left, x))
            .collect();
        if !self.variant.is_existential() {
            out.extend(
                (0..self.b.len())
                    .filter(|&y| rule.legal(self.b, rights.clone(), y))
                    .map(|y| (Side::Right, y)),
            );
        }
        out
    }

    fn acc(&self, pos: &[(usize, usize)]) -> (Vec<usize>, Vec<usize>) {
        (
            accessible(self.a, pos.iter().map(|p| p.0)),
            accessible(self.b, pos.iter().map(|p| p.1)),
        )
    }

    fn pair(side: Side, mv: usize, resp: usize) -> (usize, usize) {
        match side {
            Side::Left => (mv, resp),
            Side::Right => (resp, mv),
        }
    }

    /// Duplicator's legal answers: anything, except in `G_k` where the
    /// answer must itself be a covering play.
    fn answers(&self, pos: &[(usize, usize)], side: Side) -> Vec<usize> {
        let (s, played): (&Structure, Vec<usize>) = match side {
            Side::Left => (self.b, pos.iter().map(|p| p.1).collect()),
            Side::Right => (self.a, pos.iter().map(|p| p.0).collect()),
        };
        (0..s.len())
            .filter(|&y| self.variant != GameVariant::ComonadicGk || self.rule().legal(s, played.iter().copied(), y))
            .collect()
    }

    fn duplicator(&self, s: &Strategy, pos: &Position, rounds: usize) -> Result<bool, GameError> {
        let Strategy::Duplicator(map) = s else { unreachable!() };
        if self.violation(pos).is_some() {
            return Ok(false);
        }
        if rounds == 0 {
            return Ok(true);
        }
        let entry = map
            .get(pos)
            .ok_or_else(|| GameError::NotTotal(format!("{pos:?}")))?;
        match entry {
            DuplicatorMove::Responses(answers) => {
                for (side, mv) in self.moves(pos) {
                    let resp = *answers
                        .get(&(side, mv))
                        .ok_or_else(|| GameError::NotTotal(format!("{pos:?} after {side} {mv}")))?;
                    if !self.answers(pos, side).contains(&resp) {
                        return Ok(false);
                    }
                    if !self.duplicator(s, &extended(pos, Self::pair(side, mv, resp)), rounds - 1)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            DuplicatorMove::Bijection(f) => {
                let (acc_a, acc_b) = self.acc(pos);
                let dom: BTreeSet<usize> = f.iter().map(|p| p.0).collect();
                let cod: BTreeSet<usize> = f.iter().map(|p| p.1).collect();
                let is_bijection = dom.len() == f.len()
                    && cod.len() == f.len()
                    && dom == acc_a.iter().copied().collect()
                    && cod == acc_b.iter().copied().collect();
                if !is_bijection {
                    return Ok(false);
                }
                for &pair in f {
                    if !self.duplicator(s, &extended(pos, pair), rounds - 1)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    fn spoiler(&self, s: &Strategy, pos: &Position, rounds: usize) -> Result<bool, GameError> {
        let Strategy::Spoiler(map) = s else { unreachable!() };
        let plan = map
            .get(pos)
            .ok_or_else(|| GameError::NotTotal(format!("{pos:?}")))?;
        match plan {
            SpoilerPlan::Violation(_) => Ok(self.violation(pos).is_some()),
            _ if self.violation(pos).is_some() => Ok(true),
            _ if rounds == 0 => Ok(false),
            SpoilerPlan::Move(side, mv) => {
                if !self.moves(pos).contains(&(*side, *mv)) {
                    return Ok(false);
                }
                for resp in self.answers(pos, *side) {
                    if !self.spoiler(s, &extended(pos, Self::pair(*side, *mv, resp)), rounds - 1)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            SpoilerPlan::Clash { .. } => {
                let (acc_a, acc_b) = self.acc(pos);
                Ok(self.variant == GameVariant::Bijection && acc_a.len() != acc_b.len())
            }
            SpoilerPlan::Hall { left, right } => {
                let (acc_a, acc_b) = self.acc(pos);
                if self.variant != GameVariant::Bijection
                    || right.len() >= left.len()
                    || !left.iter().all(|x| acc_a.contains(x))
                    || !right.iter().all(|y| acc_b.contains(y))
                {
                    return Ok(false);
                }
                if acc_a.len() != acc_b.len() {
                    return Ok(true);
                }
                for &x in left {
                    for &y in acc_b.iter().filter(|y| !right.contains(y)) {
                        if !self.spoiler(s, &extended(pos, (x, y)), rounds - 1)? {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
        }
    }
}

/// Replays every Spoiler option against a Duplicator strategy (or every
/// Duplicator option against a Spoiler strategy) and checks the winning
/// condition at each position reached.
pub fn verify_strategy(result: &GameResult, a: &Structure, b: &Structure) -> Result<bool, GameError> {
    let replay = Replay {
        a,
        b,
        variant: result.variant,
    };
    match (&result.strategy, result.winner) {
        (s @ Strategy::Duplicator(_), Player::Duplicator) => replay.duplicator(s, &result.initial, result.rounds),
        (s @ Strategy::Spoiler(_), Player::Spoiler) => replay.spoiler(s, &result.initial, result.rounds),
        _ => Ok(false),
    }
}

fn verdict(replay: &Replay, pos: &[(usize, usize)]) -> String {
    let what = if replay.variant.is_existential() {
        "partial homomorphism"
    } else {
        "partial isomorphism"
    };
    match replay.violation(pos) {
        None => format!("{what} holds"),
        Some(v) => format!("{what} fails: {}", v.describe(replay.a, replay.b)),
    }
}

fn names(s: &Structure, xs: &[usize]) -> String {
    let v: Vec<&str> = xs.iter().map(|&x| s.name(x)).collect();
    format!("{{{}}}", v.join(", "))
}

/// One line per round along a principal line of play: Spoiler's plan
/// against Duplicator's least reply, or Duplicator's strategy against
/// Spoiler's least move.
pub fn trace(result: &GameResult, a: &Structure, b: &Structure) -> String {
    let replay = Replay {
        a,
        b,
        variant: result.variant,
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "game {} with {} round{}: {} wins",
        result.variant,
        result.rounds,
        if result.rounds == 1 { "" } else { "s" },
        result.winner
    );
    let mut pos = result.initial.clone();
    let bps: Vec<String> = pos.iter().map(|&(x, y)| format!("{} ~ {}", a.name(x), b.name(y))).collect();
    let _ = writeln!(out, "round 0: basepoints [{}]; {}", bps.join(", "), verdict(&replay, &pos));
    for round in 1..=result.rounds {
        if replay.violation(&pos).is_some() {
            break;
        }
        let line = match &result.strategy {
            Strategy::Spoiler(map) => match map.get(&pos) {
                Some(SpoilerPlan::Move(side, mv)) => {
                    // show an answer that survives the round when there is one
                    let answers = replay.answers(&pos, *side);
                    let survives = |&&y: &&usize| replay.violation(&extended(&pos, Replay::pair(*side, *mv, y))).is_none();
                    let Some(&first) = answers.iter().find(survives).or(answers.first()) else {
                        let name = match side {
                            Side::Left => a.name(*mv),
                            Side::Right => b.name(*mv),
                        };
                        let _ = writeln!(
                            out,
                            "round {round}: Spoiler plays {name} on the {side}; Duplicator has no legal answer"
                        );
                        break;
                    };
                    let pair = Replay::pair(*side, *mv, first);
                    let (mover, answer) = match side {
                        Side::Left => (a.name(*mv), b.name(pair.1)),
                        Side::Right => (b.name(*mv), a.name(pair.0)),
                    };
                    pos.push(pair);
                    format!("Spoiler plays {mover} on the {side}; Duplicator answers {answer}")
                }
                Some(SpoilerPlan::Clash { left, right }) => {
                    let _ = writeln!(
                        out,
                        "round {round}: accessible sets have sizes {left} and {right}; no bijection exists"
                    );
                    break;
                }
                Some(SpoilerPlan::Hall { left, right }) => {
                    let (_, acc_b) = replay.acc(&pos);
                    let y = *acc_b.iter().find(|y| !right.contains(y)).expect("Hall deficit");
                    let pair = (left[0], y);
                    pos.push(pair);
                    format!(
                        "Spoiler targets {} with only {} as safe images; Duplicator maps {} to {}",
                        names(a, left),
                        names(b, right),
                        a.name(pair.0),
                        b.name(pair.1)
                    )
                }
                _ => break,
            },
            Strategy::Duplicator(map) => match map.get(&pos) {
                Some(DuplicatorMove::Responses(answers)) => match answers.iter().next() {
                    Some((&(side, mv), &resp)) => {
                        let (mover, answer) = match side {
                            Side::Left => (a.name(mv), b.name(resp)),
                            Side::Right => (b.name(mv), a.name(resp)),
                        };
                        pos.push(Replay::pair(side, mv, resp));
                        format!("Spoiler plays {mover} on the {side}; Duplicator answers {answer}")
                    }
                    None => {
                        let _ = writeln!(out, "round {round}: Spoiler has no legal move");
                        break;
                    }
                },
                Some(DuplicatorMove::Bijection(f)) => match f.first() {
                    Some(&(x, y)) => {
                        pos.push((x, y));
                        let shown: Vec<String> =
                            f.iter().map(|&(x, y)| format!("{}->{}", a.name(x), b.name(y))).collect();
                        format!(
                            "Duplicator picks bijection [{}]; Spoiler plays {}",
                            shown.join(", "),
                            a.name(x)
                        )
                    }
                    None => {
                        let _ = writeln!(out, "round {round}: accessible sets are empty; Spoiler has no move");
                        break;
                    }
                },
                None => break,
            },
        };
        let _ = writeln!(out, "round {round}: {line}; {}", verdict(&replay, &pos));
    }
    out
}
