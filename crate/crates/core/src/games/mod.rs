//! Model-comparison games solved exactly by memoised backward induction,
//! with strategy extraction, verification and transcripts.
//!
//! `k` always counts the free rounds: the basepoint rounds are played first
//! and the winning condition is checked from the resulting position on.

mod bijection;
mod engine;
mod gk;
mod rank;
mod verify;

pub use bijection::solve_bijection;
pub use gk::solve_gk;
pub use rank::back_and_forth_rank;
pub use verify::{trace, verify_strategy};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::structures::{MapViolation, Structure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GameVariant {
    /// Spoiler plays anywhere in the left structure only.
    ExistentialEf,
    /// Left moves only, each seen from an earlier move.
    ExistentialHybrid,
    /// Left moves only, each seen from an earlier move along some transition.
    ExistentialBounded,
    /// The Ehrenfeucht–Fraïssé game: any element, either side.
    Ef,
    BackForthHybrid,
    BackForthBounded,
    /// Moves may also follow transitions backwards.
    BackForthTemporal,
    /// Duplicator commits to a bijection of the accessible sets each round.
    Bijection,
    /// The game on hybrid comonad carriers, moving to covering plays.
    ComonadicGk,
}

impl GameVariant {
    pub const ALL: [GameVariant; 9] = [
        GameVariant::ExistentialEf,
        GameVariant::ExistentialHybrid,
        GameVariant::ExistentialBounded,
        GameVariant::Ef,
        GameVariant::BackForthHybrid,
        GameVariant::BackForthBounded,
        GameVariant::BackForthTemporal,
        GameVariant::Bijection,
        GameVariant::ComonadicGk,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GameVariant::ExistentialEf => "existential-ef",
            GameVariant::ExistentialHybrid => "existential-hybrid",
            GameVariant::ExistentialBounded => "existential-bounded",
            GameVariant::Ef => "ef",
            GameVariant::BackForthHybrid => "back-forth-hybrid",
            GameVariant::BackForthBounded => "back-forth-bounded",
            GameVariant::BackForthTemporal => "back-forth-temporal",
            GameVariant::Bijection => "bijection",
            GameVariant::ComonadicGk => "comonadic-gk",
        }
    }

    pub fn is_existential(self) -> bool {
        matches!(
            self,
            GameVariant::ExistentialEf | GameVariant::ExistentialHybrid | GameVariant::ExistentialBounded
        )
    }

    pub(crate) fn rule(self) -> MoveRule {
        match self {
            GameVariant::ExistentialEf | GameVariant::Ef => MoveRule::Free,
            GameVariant::BackForthTemporal => MoveRule::EitherDirection,
            _ => MoveRule::Forward,
        }
    }

    fn check(self, a: &Structure, b: &Structure) -> Result<(), GameError> {
        let (sa, sb) = (a.signature(), b.signature());
        if !sa.same_vocabulary(sb) || sa.num_basepoints() != sb.num_basepoints() {
            return Err(GameError::SignatureMismatch);
        }
        let m = sa.num_basepoints();
        let ok = match self {
            GameVariant::ExistentialEf | GameVariant::Ef => true,
            GameVariant::ExistentialHybrid
            | GameVariant::BackForthHybrid
            | GameVariant::BackForthTemporal
            | GameVariant::ComonadicGk => sa.is_unimodal() && m == 1,
            GameVariant::ExistentialBounded | GameVariant::BackForthBounded | GameVariant::Bijection => m >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(GameError::Variant(format!(
                "{} is not defined for this signature",
                self.name()
            )))
        }
    }
}

impl fmt::Display for GameVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which elements Spoiler may pick after the basepoint rounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum MoveRule {
    Free,
    /// Seen from some earlier element along some transition.
    Forward,
    /// Seen from, or seeing, some earlier element.
    EitherDirection,
}

impl MoveRule {
    pub(crate) fn legal(self, s: &Structure, played: impl IntoIterator<Item = usize> + Clone, x: usize) -> bool {
        let transitions = s.signature().transitions();
        match self {
            MoveRule::Free => true,
            MoveRule::Forward => played
                .into_iter()
                .any(|p| transitions.iter().any(|r| s.holds(r, &[p, x]))),
            MoveRule::EitherDirection => played
                .into_iter()
                .any(|p| transitions.iter().any(|r| s.holds(r, &[p, x]) || s.holds(r, &[x, p]))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Player {
    Spoiler,
    Duplicator,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Spoiler => "Spoiler",
            Player::Duplicator => "Duplicator",
        })
    }
}

/// Sequence of (left, right) element pairs, basepoints first.
pub type Position = Vec<(usize, usize)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DuplicatorMove {
    /// Answer for every legal Spoiler move at this position.
    Responses(BTreeMap<(Side, usize), usize>),
    /// Bijection between the accessible sets, as (left, right) pairs.
    Bijection(Vec<(usize, usize)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpoilerPlan {
    /// The position already fails the winning condition.
    Violation(MapViolation),
    Move(Side, usize),
    /// Accessible sets of different sizes: no bijection exists.
    Clash { left: usize, right: usize },
    /// Whatever bijection is chosen, some element of `left` is sent outside
    /// `right`, the fewer elements it could safely go to.
    Hall { left: Vec<usize>, right: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    Duplicator(BTreeMap<Position, DuplicatorMove>),
    Spoiler(BTreeMap<Position, SpoilerPlan>),
}

#[derive(Clone, Debug)]
pub struct GameResult {
    pub variant: GameVariant,
    pub rounds: usize,
    pub winner: Player,
    pub initial: Position,
    pub strategy: Strategy,
    /// Number of memoised positions explored.
    pub explored: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("structures differ in vocabulary or number of basepoints")]
    SignatureMismatch,
    #[error("{0}")]
    Variant(String),
    #[error("resource exceeded: more than {limit} positions")]
    ResourceExceeded { limit: usize },
    #[error("strategy is not total: no entry for position {0}")]
    NotTotal(String),
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub max_positions: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_positions: 2_000_000,
        }
    }
}

pub fn solve(a: &Structure, b: &Structure, variant: GameVariant, k: usize) -> Result<GameResult, GameError> {
    solve_with(a, b, variant, k, SolveOptions::default())
}

pub fn solve_with(
    a: &Structure,
    b: &Structure,
    variant: GameVariant,
    k: usize,
    opts: SolveOptions,
) -> Result<GameResult, GameError> {
    variant.check(a, b)?;
    match variant {
        GameVariant::Bijection => bijection::solve(a, b, k, opts),
        GameVariant::ComonadicGk => gk::solve(a, b, k, opts),
        _ => engine::solve(a, b, variant, k, opts),
    }
}

/// Duplicator wins the `k`-round game.
pub fn duplicator_wins(a: &Structure, b: &Structure, variant: GameVariant, k: usize) -> Result<bool, GameError> {
    Ok(solve(a, b, variant, k)?.winner == Player::Duplicator)
}

pub(crate) fn initial_position(a: &Structure, b: &Structure) -> Position {
    a.basepoints().iter().copied().zip(b.basepoints().iter().copied()).collect()
}

pub(crate) fn extended(pos: &[(usize, usize)], pair: (usize, usize)) -> Position {
    let mut p = pos.to_vec();
    p.push(pair);
    p
}

/// Memo key: the correspondence as a set, which is all the rules and the
/// winning condition depend on.
pub(crate) fn pair_set(pos: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut v = pos.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}
