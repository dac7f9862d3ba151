//! The game `G_k` played directly on hybrid comonad carriers: positions are
//! pairs of equal-length plays, each move steps to a covering play, and a
//! position is winning when pairing the prefixes of the two plays is a
//! partial isomorphism of the (I-lifted) carriers.

use std::collections::{BTreeMap, HashMap};

use super::{
    DuplicatorMove, GameError, GameResult, GameVariant, Player, Position, Side, SolveOptions, SpoilerPlan,
    Strategy,
};
use crate::comonads::{build_comonad, ComonadError, ComonadKind, ComonadStructure};
use crate::structures::{MapViolation, Structure};

struct Gk {
    ca: ComonadStructure,
    cb: ComonadStructure,
    children_a: Vec<Vec<usize>>,
    children_b: Vec<Vec<usize>>,
    memo: HashMap<(usize, usize), bool>,
    limit: usize,
}

fn children(c: &ComonadStructure) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); c.len()];
    for p in 0..c.len() {
        if let Some(q) = c.parent(p) {
            out[q].push(p);
        }
    }
    out
}

fn last(c: &ComonadStructure, p: usize) -> usize {
    *c.plays()[p].last().expect("plays are non-empty")
}

impl Gk {
    /// First lifted relation instance among prefixes that is not matched on
    /// the other side.
    fn violation(&self, s: usize, t: usize) -> Option<MapViolation> {
        let (ps, pt) = (self.ca.prefixes(s), self.cb.prefixes(t));
        let l = ps.len();
        for (r, &arity) in self.ca.carrier().signature().relations() {
            let mut idx = vec![0usize; arity];
            loop {
                let left: Vec<usize> = idx.iter().map(|&i| ps[i]).collect();
                let right: Vec<usize> = idx.iter().map(|&i| pt[i]).collect();
                let (hl, hr) = (self.ca.carrier().holds(r, &left), self.cb.carrier().holds(r, &right));
                if hl != hr {
                    let left = left.iter().map(|&p| last(&self.ca, p)).collect();
                    let right = right.iter().map(|&p| last(&self.cb, p)).collect();
                    return Some(if hl {
                        MapViolation::NotPreserved {
                            relation: r.clone(),
                            left,
                            right,
                        }
                    } else {
                        MapViolation::NotReflected {
                            relation: r.clone(),
                            left,
                            right,
                        }
                    });
                }
                let mut pos = 0;
                while pos < arity {
                    idx[pos] += 1;
                    if idx[pos] < l {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == arity {
                    break;
                }
            }
        }
        None
    }

    fn rounds_left(&self, s: usize) -> usize {
        self.ca.resource() + 1 - self.ca.plays()[s].len()
    }

    fn moves(&self, s: usize, t: usize) -> Vec<(Side, usize)> {
        let mut out: Vec<(Side, usize)> = self.children_a[s].iter().map(|&c| (Side::Left, c)).collect();
        out.extend(self.children_b[t].iter().map(|&c| (Side::Right, c)));
        out
    }

    fn answers(&self, side: Side, s: usize, t: usize) -> &[usize] {
        match side {
            Side::Left => &self.children_b[t],
            Side::Right => &self.children_a[s],
        }
    }

    fn next(side: Side, mv: usize, resp: usize) -> (usize, usize) {
        match side {
            Side::Left => (mv, resp),
            Side::Right => (resp, mv),
        }
    }

    fn wins(&mut self, s: usize, t: usize) -> Result<bool, GameError> {
        if let Some(&v) = self.memo.get(&(s, t)) {
            return Ok(v);
        }
        if self.memo.len() >= self.limit {
            return Err(GameError::ResourceExceeded { limit: self.limit });
        }
        let mut value = self.violation(s, t).is_none();
        if value && self.rounds_left(s) > 0 {
            for (side, mv) in self.moves(s, t) {
                let mut answered = false;
                for &resp in self.answers(side, s, t).to_vec().iter() {
                    let (s2, t2) = Self::next(side, mv, resp);
                    if self.wins(s2, t2)? {
                        answered = true;
                        break;
                    }
                }
                if !answered {
                    value = false;
                    break;
                }
            }
        }
        self.memo.insert((s, t), value);
        Ok(value)
    }

    fn position(&self, s: usize, t: usize) -> Position {
        self.ca.plays()[s].iter().copied().zip(self.cb.plays()[t].iter().copied()).collect()
    }

    fn element(&self, side: Side, play: usize) -> usize {
        match side {
            Side::Left => last(&self.ca, play),
            Side::Right => last(&self.cb, play),
        }
    }

    fn duplicator(&mut self, s: usize, t: usize, out: &mut BTreeMap<Position, DuplicatorMove>) -> Result<(), GameError> {
        if self.rounds_left(s) == 0 {
            return Ok(());
        }
        let mut answers = BTreeMap::new();
        let mut next = Vec::new();
        for (side, mv) in self.moves(s, t) {
            for resp in self.answers(side, s, t).to_vec() {
                let (s2, t2) = Self::next(side, mv, resp);
                if self.wins(s2, t2)? {
                    let other = match side {
                        Side::Left => Side::Right,
                        Side::Right => Side::Left,
                    };
                    answers.insert((side, self.element(side, mv)), self.element(other, resp));
                    next.push((s2, t2));
                    break;
                }
            }
        }
        out.insert(self.position(s, t), DuplicatorMove::Responses(answers));
        for (s2, t2) in next {
            self.duplicator(s2, t2, out)?;
        }
        Ok(())
    }

    fn spoiler(&mut self, s: usize, t: usize, out: &mut BTreeMap<Position, SpoilerPlan>) -> Result<(), GameError> {
        let pos = self.position(s, t);
        if out.contains_key(&pos) {
            return Ok(());
        }
        if let Some(v) = self.violation(s, t) {
            out.insert(pos, SpoilerPlan::Violation(v));
            return Ok(());
        }
        for (side, mv) in self.moves(s, t) {
            let answers = self.answers(side, s, t).to_vec();
            let mut refuted = true;
            for &resp in &answers {
                let (s2, t2) = Self::next(side, mv, resp);
                if self.wins(s2, t2)? {
                    refuted = false;
                    break;
                }
            }
            if refuted {
                out.insert(pos, SpoilerPlan::Move(side, self.element(side, mv)));
                for resp in answers {
                    let (s2, t2) = Self::next(side, mv, resp);
                    self.spoiler(s2, t2, out)?;
                }
                return Ok(());
            }
        }
        unreachable!("spoiler strategy requested at a Duplicator win")
    }
}

fn carrier(s: &Structure, k: usize) -> Result<ComonadStructure, GameError> {
    // H_k needs k ≥ 1; the zero-round game only inspects the root play.
    build_comonad(s, ComonadKind::Hybrid, k.max(1), true).map_err(|e| match e {
        ComonadError::TooLarge { cap } => GameError::ResourceExceeded { limit: cap },
        other => GameError::Variant(other.to_string()),
    })
}

pub(crate) fn solve(a: &Structure, b: &Structure, k: usize, opts: SolveOptions) -> Result<GameResult, GameError> {
    let (ca, cb) = (carrier(a, k)?, carrier(b, k)?);
    let (children_a, children_b) = if k == 0 {
        (vec![Vec::new(); ca.len()], vec![Vec::new(); cb.len()])
    } else {
        (children(&ca), children(&cb))
    };
    let mut g = Gk {
        ca,
        cb,
        children_a,
        children_b,
        memo: HashMap::new(),
        limit: opts.max_positions,
    };
    let win = g.wins(0, 0)?;
    let strategy = if win {
        let mut out = BTreeMap::new();
        g.duplicator(0, 0, &mut out)?;
        Strategy::Duplicator(out)
    } else {
        let mut out = BTreeMap::new();
        g.spoiler(0, 0, &mut out)?;
        Strategy::Spoiler(out)
    };
    Ok(GameResult {
        variant: GameVariant::ComonadicGk,
        rounds: k,
        winner: if win { Player::Duplicator } else { Player::Spoiler },
        initial: g.position(0, 0),
        strategy,
        explored: g.memo.len(),
    })
}

/// The comonadic game `G_k` on hybrid carriers.
pub fn solve_gk(a: &Structure, b: &Structure, k: usize) -> Result<GameResult, GameError> {
    super::solve(a, b, GameVariant::ComonadicGk, k)
}
