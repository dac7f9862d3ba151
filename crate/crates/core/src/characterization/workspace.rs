//! Padding a structure with workspace so that it becomes indistinguishable
//! from its Gaifman ball, together with the explicit Duplicator strategy
//! that witnesses this.
//!
//! Sides: `left = A + C` and `right = N + C` where `N` is the ball of radius
//! `2^q` around the basepoints and `C = q·A + q·N`. The strategy splits the
//! play into a core, copied verbatim near the basepoints, and copy-cat
//! components between isomorphic summands, kept far apart from one another.

use std::collections::BTreeMap;

use super::CharacterizationError;
use crate::games::{
    duplicator_wins, verify_strategy, DuplicatorMove, GameResult, GameVariant, Player, Position, Side, Strategy,
};
use crate::structures::{
    ball_part, disjoint_sum, gaifman_distance, is_partial_isomorphism, DistanceMatrix, ExtNat, Structure,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SummandKind {
    /// A copy of the original structure.
    Full,
    /// A copy of the ball.
    Ball,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub tag: String,
    pub kind: SummandKind,
    /// Global indices, in the order of the copied structure's universe.
    pub elements: Vec<usize>,
}

/// A disjoint sum viewed as a metric space: the Gaifman metric, and which
/// summand each element belongs to.
#[derive(Clone, Debug)]
pub struct MetricSpaceView {
    pub structure: Structure,
    pub dist: DistanceMatrix,
    pub summands: Vec<Summand>,
    /// Summand index and position within it, per element.
    pub location: Vec<(usize, usize)>,
}

impl MetricSpaceView {
    fn new(parts: &[(String, SummandKind, &Structure)]) -> Result<Self, CharacterizationError> {
        let tagged: Vec<(&str, &Structure)> = parts.iter().map(|(t, _, s)| (t.as_str(), *s)).collect();
        let structure = disjoint_sum(&tagged, 0)?;
        let mut summands = Vec::new();
        let mut location = Vec::new();
        let mut offset = 0;
        for (si, (tag, kind, s)) in parts.iter().enumerate() {
            summands.push(Summand {
                tag: tag.clone(),
                kind: *kind,
                elements: (offset..offset + s.len()).collect(),
            });
            location.extend((0..s.len()).map(|i| (si, i)));
            offset += s.len();
        }
        let dist = gaifman_distance(&structure);
        Ok(MetricSpaceView {
            structure,
            dist,
            summands,
            location,
        })
    }

    pub fn summand_of(&self, x: usize) -> usize {
        self.location[x].0
    }

    /// Distance from `x` to the nearest basepoint.
    pub fn distance_to_basepoints(&self, x: usize) -> ExtNat {
        self.dist.set_distance(self.structure.basepoints(), &[x])
    }

    /// Cross-summand distances are infinite, and each summand carries its
    /// own Gaifman metric.
    pub fn is_consistent(&self, parts: &[&Structure]) -> bool {
        let n = self.structure.len();
        (0..n).all(|x| {
            (0..n).all(|y| {
                let (sx, ix) = self.location[x];
                let (sy, iy) = self.location[y];
                if sx != sy {
                    self.dist.get(x, y) == ExtNat::Infinite
                } else {
                    self.dist.get(x, y) == gaifman_distance(parts[sx]).get(ix, iy)
                }
            })
        })
    }
}

#[derive(Clone, Debug)]
pub struct Workspace {
    pub q: usize,
    /// `2^q`, the radius of the ball.
    pub radius: usize,
    pub base: Structure,
    pub ball: Structure,
    /// `C = q·A + q·N`.
    pub workspace: Structure,
    pub left: MetricSpaceView,
    pub right: MetricSpaceView,
}

impl Workspace {
    /// `2q|A|`.
    pub fn bound(&self) -> usize {
        2 * self.q * self.base.len()
    }

    /// `ℓ_k = 2^(q−k)`.
    pub fn radius_at(&self, k: usize) -> usize {
        1 << (self.q - k)
    }
}

/// Largest `q` accepted; `2^q` must stay a sensible radius.
pub const MAX_WORKSPACE_ROUNDS: usize = 16;

pub fn build_workspace(a: &Structure, q: usize) -> Result<Workspace, CharacterizationError> {
    if q == 0 || q > MAX_WORKSPACE_ROUNDS {
        return Err(CharacterizationError::Rounds(q));
    }
    let radius = 1usize << q;
    let ball = ball_part(a, radius);
    let copies: Vec<(String, SummandKind, &Structure)> = (1..=q)
        .map(|i| (format!("M{i}"), SummandKind::Full, a))
        .chain((1..=q).map(|i| (format!("N{i}"), SummandKind::Ball, &ball)))
        .collect();
    let tagged: Vec<(&str, &Structure)> = copies.iter().map(|(t, _, s)| (t.as_str(), *s)).collect();
    let workspace = disjoint_sum(&tagged, 0)?;
    let mut left_parts = vec![("0".to_string(), SummandKind::Full, a)];
    left_parts.extend(copies.iter().cloned());
    let mut right_parts = vec![("0".to_string(), SummandKind::Ball, &ball)];
    right_parts.extend(copies.iter().cloned());
    let left = MetricSpaceView::new(&left_parts)?;
    let right = MetricSpaceView::new(&right_parts)?;
    let ws = Workspace {
        q,
        radius,
        base: a.clone(),
        ball,
        workspace,
        left,
        right,
    };
    assert!(ws.workspace.len() <= ws.bound(), "workspace exceeds 2q|A|");
    Ok(ws)
}

/// How a played pair is matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Component {
    /// Same element of `A` on both sides, inside the ball.
    Core,
    /// Matched by the canonical isomorphism between left summand `from` and
    /// right summand `to`.
    Copy { from: usize, to: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    I,
    II,
    III,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkspaceState {
    pub pairs: Vec<(usize, usize)>,
    pub components: Vec<Component>,
    /// Moves made so far.
    pub round: usize,
}

impl WorkspaceState {
    pub fn initial(ws: &Workspace) -> Self {
        let pairs: Vec<(usize, usize)> = ws
            .left
            .structure
            .basepoints()
            .iter()
            .copied()
            .zip(ws.right.structure.basepoints().iter().copied())
            .collect();
        WorkspaceState {
            components: vec![Component::Core; pairs.len()],
            pairs,
            round: 0,
        }
    }
}

fn views(ws: &Workspace, side: Side) -> (&MetricSpaceView, &MetricSpaceView) {
    match side {
        Side::Left => (&ws.left, &ws.right),
        Side::Right => (&ws.right, &ws.left),
    }
}

fn played(state: &WorkspaceState, side: Side) -> impl Iterator<Item = (usize, Component)> + '_ {
    state.pairs.iter().zip(&state.components).map(move |(&(a, b), &c)| match side {
        Side::Left => (a, c),
        Side::Right => (b, c),
    })
}

/// Responds to a move on `side` and classifies it. With `sabotage`, Case II
/// deliberately routes the answer through the wrong summand.
pub fn workspace_strategy_step(
    ws: &Workspace,
    state: &WorkspaceState,
    side: Side,
    x: usize,
    sabotage: bool,
) -> (WorkspaceState, Case) {
    assert!(state.round < ws.q, "the game has only {} rounds", ws.q);
    let (mine, theirs) = views(ws, side);
    let near = ExtNat::Finite(ws.radius_at(state.round + 1));
    let close: Vec<Component> = played(state, side)
        .filter(|&(a, _)| mine.dist.get(a, x) <= near)
        .map(|(_, c)| c)
        .collect();
    let (case, component, response) = if close.contains(&Component::Core) {
        let name = mine.structure.name(x);
        let y = theirs
            .structure
            .index_of(name)
            .expect("core moves stay inside the ball");
        (Case::I, Component::Core, y)
    } else if let Some(&Component::Copy { from, to }) = close.first() {
        let (src, mut dst) = match side {
            Side::Left => (from, to),
            Side::Right => (to, from),
        };
        if sabotage {
            let kind = theirs.summands[dst].kind;
            if let Some(other) = (0..theirs.summands.len()).find(|&t| t != dst && theirs.summands[t].kind == kind) {
                dst = other;
            }
        }
        debug_assert_eq!(mine.summand_of(x), src, "finite distance keeps moves in one summand");
        let y = theirs.summands[dst].elements[mine.location[x].1];
        let component = match side {
            Side::Left => Component::Copy { from: src, to: dst },
            Side::Right => Component::Copy { from: dst, to: src },
        };
        (Case::II, component, y)
    } else {
        let src = mine.summand_of(x);
        let kind = mine.summands[src].kind;
        let used: Vec<usize> = played(state, match side {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        })
        .map(|(b, _)| theirs.summand_of(b))
        .collect();
        let dst = (0..theirs.summands.len())
            .find(|&t| theirs.summands[t].kind == kind && !used.contains(&t))
            .expect("q rounds never exhaust the q spare summands");
        let y = theirs.summands[dst].elements[mine.location[x].1];
        let component = match side {
            Side::Left => Component::Copy { from: src, to: dst },
            Side::Right => Component::Copy { from: dst, to: src },
        };
        (Case::III, component, y)
    };
    let mut next = state.clone();
    next.pairs.push(match side {
        Side::Left => (x, response),
        Side::Right => (response, x),
    });
    next.components.push(component);
    next.round += 1;
    (next, case)
}

/// The six bookkeeping conditions, each violation described in words.
pub fn workspace_invariant_violations(ws: &Workspace, state: &WorkspaceState) -> Vec<String> {
    let mut out = Vec::new();
    let (l, r) = (&ws.left, &ws.right);
    let lk = ExtNat::Finite(ws.radius_at(state.round));
    let m = ws.base.basepoints().len();
    let reach = ExtNat::Finite(ws.radius - ws.radius_at(state.round));
    let core: Vec<usize> = (0..state.pairs.len())
        .filter(|&i| state.components[i] == Component::Core)
        .collect();
    let copies: Vec<usize> = (0..state.pairs.len())
        .filter(|&i| state.components[i] != Component::Core)
        .collect();
    // (1) basepoints are core, and no element is in both classes
    if core.iter().copied().take(m).ne(0..m) {
        out.push("(1) a basepoint is not in the core".into());
    }
    for &i in &core {
        for &j in &copies {
            if state.pairs[i].0 == state.pairs[j].0 || state.pairs[i].1 == state.pairs[j].1 {
                out.push(format!("(1) move {i} and move {j} put one element in both classes"));
            }
        }
    }
    // (2) the core stays inside the shrinking ball
    for &i in &core {
        let (a, b) = state.pairs[i];
        if l.distance_to_basepoints(a) > reach || r.distance_to_basepoints(b) > reach {
            out.push(format!("(2) core move {i} lies outside the ball of radius {reach}"));
        }
    }
    // (3) the core is copied verbatim
    for &i in &core {
        let (a, b) = state.pairs[i];
        if l.summand_of(a) != 0 || r.summand_of(b) != 0 || l.structure.name(a) != r.structure.name(b) {
            out.push(format!("(3) core move {i} is not an identical copy"));
        }
    }
    // (4) core and copies are far apart
    for &i in &core {
        for &j in &copies {
            let (a, b) = state.pairs[i];
            let (c, d) = state.pairs[j];
            if l.dist.get(a, c) <= lk || r.dist.get(b, d) <= lk {
                out.push(format!("(4) core move {i} is within {lk} of copied move {j}"));
            }
        }
    }
    // (5) copies follow the canonical isomorphism between same-kind summands
    for &i in &copies {
        let Component::Copy { from, to } = state.components[i] else { unreachable!() };
        let (a, b) = state.pairs[i];
        let ok = l.summands[from].kind == r.summands[to].kind
            && l.summand_of(a) == from
            && r.summand_of(b) == to
            && l.location[a].1 == r.location[b].1;
        if !ok {
            out.push(format!("(5) copied move {i} does not follow its isomorphism"));
        }
    }
    // (6) nearby copies share their isomorphism
    for &i in &copies {
        for &j in &copies {
            let (a, b) = state.pairs[i];
            let (c, d) = state.pairs[j];
            if i < j
                && (l.dist.get(a, c) <= lk || r.dist.get(b, d) <= lk)
                && state.components[i] != state.components[j]
            {
                out.push(format!("(6) copied moves {i} and {j} are close but use different isomorphisms"));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkspaceReport {
    pub q: usize,
    pub workspace_size: usize,
    pub bound: usize,
    /// Positions visited by the exhaustive replay, including the initial one.
    pub positions: usize,
    /// How often each case fired.
    pub cases: [usize; 3],
    pub invariant_failures: Vec<String>,
    /// Positions where the played pairs are not a partial isomorphism.
    pub isomorphism_failures: usize,
    /// The strategy, replayed by the game verifier, wins the EF game.
    pub strategy_verified: bool,
    /// The EF solver's verdict, when requested.
    pub solver_agrees: Option<bool>,
}

impl WorkspaceReport {
    pub fn passed(&self) -> bool {
        self.workspace_size <= self.bound
            && self.invariant_failures.is_empty()
            && self.isomorphism_failures == 0
            && self.strategy_verified
            && self.solver_agrees != Some(false)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct WorkspaceOptions {
    pub sabotage: bool,
    /// Also solve the EF game independently.
    pub solve: bool,
}

/// Plays every Spoiler sequence of length `q` against the strategy,
/// checking the invariants and the partial-isomorphism condition at each
/// position, then hands the strategy to the game verifier.
pub fn verify_workspace_report(
    a: &Structure,
    q: usize,
    opts: WorkspaceOptions,
) -> Result<WorkspaceReport, CharacterizationError> {
    let ws = build_workspace(a, q)?;
    let mut report = WorkspaceReport {
        q,
        workspace_size: ws.workspace.len(),
        bound: ws.bound(),
        positions: 0,
        cases: [0; 3],
        invariant_failures: Vec::new(),
        isomorphism_failures: 0,
        strategy_verified: false,
        solver_agrees: None,
    };
    let mut table: BTreeMap<Position, DuplicatorMove> = BTreeMap::new();
    let initial = WorkspaceState::initial(&ws);
    explore(&ws, &initial, opts.sabotage, &mut report, &mut table);
    let result = GameResult {
        variant: GameVariant::Ef,
        rounds: q,
        winner: Player::Duplicator,
        initial: initial.pairs.clone(),
        strategy: Strategy::Duplicator(table),
        explored: report.positions,
    };
    report.strategy_verified = verify_strategy(&result, &ws.left.structure, &ws.right.structure)?;
    if opts.solve {
        report.solver_agrees = Some(duplicator_wins(&ws.left.structure, &ws.right.structure, GameVariant::Ef, q)?);
    }
    Ok(report)
}

fn explore(
    ws: &Workspace,
    state: &WorkspaceState,
    sabotage: bool,
    report: &mut WorkspaceReport,
    table: &mut BTreeMap<Position, DuplicatorMove>,
) {
    report.positions += 1;
    for v in workspace_invariant_violations(ws, state) {
        if report.invariant_failures.len() < 20 && !report.invariant_failures.contains(&v) {
            report.invariant_failures.push(v);
        }
    }
    if !is_partial_isomorphism(&state.pairs, &ws.left.structure, &ws.right.structure) {
        report.isomorphism_failures += 1;
    }
    if state.round == ws.q {
        return;
    }
    let mut answers = BTreeMap::new();
    let moves = (0..ws.left.structure.len())
        .map(|x| (Side::Left, x))
        .chain((0..ws.right.structure.len()).map(|y| (Side::Right, y)));
    for (side, x) in moves {
        let (next, case) = workspace_strategy_step(ws, state, side, x, sabotage);
        report.cases[case as usize] += 1;
        let &(l, r) = next.pairs.last().expect("a move was made");
        answers.insert((side, x), if side == Side::Left { r } else { l });
        explore(ws, &next, sabotage, report, table);
    }
    table.insert(state.pairs.clone(), DuplicatorMove::Responses(answers));
}

/// Exhaustive replay plus the independent EF solver.
pub fn verify_workspace(a: &Structure, q: usize) -> Result<bool, CharacterizationError> {
    Ok(verify_workspace_report(a, q, WorkspaceOptions { sabotage: false, solve: true })?.passed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn sizes() {
        let ws = build_workspace(&fixtures::path3(), 1).unwrap();
        assert!(ws.workspace.len() <= 6);
        let ws = build_workspace(&fixtures::path6(), 1).unwrap();
        let names: Vec<&str> = ws.ball.universe().iter().map(String::as_str).collect();
        assert_eq!(names, ["a", "x1", "x2"]);
        assert_eq!(ws.workspace.len(), 9);
        assert_eq!(ws.bound(), 12);
        assert!(ws.left.is_consistent(&[&ws.base, &ws.base, &ws.ball]));
        assert!(build_workspace(&fixtures::path3(), 0).is_err());
    }

    #[test]
    fn radius_halves() {
        let ws = build_workspace(&fixtures::point(), 3).unwrap();
        for k in 0..3 {
            assert_eq!(ws.radius_at(k), 2 * ws.radius_at(k + 1));
        }
        assert_eq!(ws.radius_at(3), 1);
    }

    #[test]
    fn small_ball_gives_isomorphic_sides() {
        let ws = build_workspace(&fixtures::path3(), 1).unwrap();
        assert_eq!(ws.ball, ws.base);
        assert!(verify_workspace(&fixtures::path3(), 1).unwrap());
    }

    #[test]
    fn the_three_cases() {
        let a = fixtures::path6();
        let ws = build_workspace(&a, 2).unwrap();
        let s0 = WorkspaceState::initial(&ws);
        let x1 = ws.left.structure.index_of("0:x1").unwrap();
        let (s1, case) = workspace_strategy_step(&ws, &s0, Side::Left, x1, false);
        assert_eq!(case, Case::I);
        assert_eq!(ws.right.structure.name(s1.pairs[1].1), "0:x1");

        let far = ws.left.structure.index_of("M1:x3").unwrap();
        let (s2, case) = workspace_strategy_step(&ws, &s0, Side::Left, far, false);
        assert_eq!(case, Case::III);
        assert_eq!(ws.right.structure.name(s2.pairs[1].1), "M1:x3");

        let next = ws.left.structure.index_of("M1:x4").unwrap();
        let (s3, case) = workspace_strategy_step(&ws, &s2, Side::Left, next, false);
        assert_eq!(case, Case::II);
        assert_eq!(s3.components[2], s3.components[1]);
        assert!(workspace_invariant_violations(&ws, &s3).is_empty());
    }

    #[test]
    fn path6_verifies() {
        assert!(verify_workspace(&fixtures::path6(), 1).unwrap());
        let r = verify_workspace_report(&fixtures::path6(), 2, WorkspaceOptions::default()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.cases.iter().all(|&c| c > 0));
    }

    #[test]
    fn sabotaged_case_two_is_caught() {
        let r = verify_workspace_report(
            &fixtures::path6(),
            2,
            WorkspaceOptions {
                sabotage: true,
                solve: false,
            },
        )
        .unwrap();
        assert!(!r.passed());
        assert!(!r.strategy_verified);
        assert!(r.isomorphism_failures > 0);
    }
}
