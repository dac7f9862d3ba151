//! Invariance checks, the workspace construction with its explicit
//! copy-cat strategy, and corpus-relative synthesis of bounded equivalents.

mod invariance;
mod synthesis;
mod workspace;

pub use invariance::{check_invariance, Counterexample, InvarianceReport, Notion};
pub use synthesis::{synthesize_bounded_equivalent, Synthesis, SYNTHESIS_BUDGET};
pub use workspace::{
    build_workspace, verify_workspace, verify_workspace_report, workspace_invariant_violations,
    workspace_strategy_step, Case, Component, MetricSpaceView, Summand, SummandKind, Workspace, WorkspaceOptions,
    WorkspaceReport, WorkspaceState, MAX_WORKSPACE_ROUNDS,
};

use thiserror::Error;

use crate::games::GameError;
use crate::logic::LogicError;
use crate::structures::StructureError;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CharacterizationError {
    #[error("number of rounds must be between 1 and {MAX_WORKSPACE_ROUNDS}, got {0}")]
    Rounds(usize),
    #[error("sentence is not invariant on the corpus ({0} counterexample(s))")]
    NotInvariant(usize),
    #[error("characteristic formulas of rank {rank} exceed the computation budget")]
    Budget { rank: usize },
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Game(#[from] GameError),
}
