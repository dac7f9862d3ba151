//! Type descriptors and the formulas that define them: Hintikka-style
//! characteristic formulas for the bounded fragment (and their hybrid
//! rendering), and Scott types for bounded counting logic.
//!
//! A type is always taken of the tuple `c1..cm, y1..yn`: the basepoints
//! followed by the elements chosen so far. Positions index that tuple.

use std::collections::{BTreeMap, BTreeSet};

use super::fo::{Fo, Guard, Term};
use super::hybrid::{AtTarget, Hybrid};
use super::LogicError;
use crate::structures::Structure;

/// Which edges a new element may be reached along.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `E(t,y)` only: the bounded fragment / hybrid logic.
    Forward,
    /// `E(t,y)` or `E(y,t)`: the temporal extension.
    Both,
}

/// Quantifier-free type of a tuple: the relation facts and equalities that
/// hold between its positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomicType {
    pub len: usize,
    pub facts: BTreeSet<(String, Vec<usize>)>,
    pub equalities: BTreeSet<(usize, usize)>,
}

fn position_tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn atomic_type(s: &Structure, vals: &[usize]) -> AtomicType {
    let n = vals.len();
    let mut facts = BTreeSet::new();
    for (r, &arity) in s.signature().relations() {
        for pos in position_tuples(n, arity) {
            let tuple: Vec<usize> = pos.iter().map(|&p| vals[p]).collect();
            if s.holds(r, &tuple) {
                facts.insert((r.clone(), pos));
            }
        }
    }
    let mut equalities = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            if vals[i] == vals[j] {
                equalities.insert((i, j));
            }
        }
    }
    AtomicType {
        len: n,
        facts,
        equalities,
    }
}

/// Rank-k type for the bounded back-and-forth game: the atomic type plus,
/// for every position, transition relation and direction, the set of
/// rank-(k−1) types of the one-step extensions along it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BfType {
    pub atomic: AtomicType,
    pub branches: Vec<Branch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Branch {
    pub source: usize,
    pub relation: String,
    pub backward: bool,
    pub types: BTreeSet<BfType>,
}

fn extensions(s: &Structure, from: usize, relation: &str, backward: bool) -> Vec<usize> {
    (0..s.len())
        .filter(|&y| {
            if backward {
                s.holds(relation, &[y, from])
            } else {
                s.holds(relation, &[from, y])
            }
        })
        .collect()
}

fn bf_type_of(s: &Structure, vals: &mut Vec<usize>, k: usize, dir: Direction) -> BfType {
    let atomic = atomic_type(s, vals);
    let mut branches = Vec::new();
    if k > 0 {
        let dirs: &[bool] = match dir {
            Direction::Forward => &[false],
            Direction::Both => &[false, true],
        };
        for source in 0..vals.len() {
            for relation in s.signature().transitions() {
                for &backward in dirs {
                    let mut types = BTreeSet::new();
                    for y in extensions(s, vals[source], relation, backward) {
                        vals.push(y);
                        types.insert(bf_type_of(s, vals, k - 1, dir));
                        vals.pop();
                    }
                    branches.push(Branch {
                        source,
                        relation: relation.clone(),
                        backward,
                        types,
                    });
                }
            }
        }
    }
    BfType { atomic, branches }
}

/// Rank-`k` back-and-forth type of `(s, basepoints)`.
pub fn bf_type(s: &Structure, k: usize, dir: Direction) -> BfType {
    bf_type_of(s, &mut s.basepoints().to_vec(), k, dir)
}

fn term_at(pos: usize, m: usize) -> Term {
    if pos < m {
        Term::Const(pos + 1)
    } else {
        Term::Var(format!("y{}", pos - m + 1))
    }
}

/// Literals of `at` that mention some position `≥ from`.
fn atomic_literals(at: &AtomicType, sig_rels: &BTreeMap<String, usize>, m: usize, from: usize) -> Vec<Fo> {
    let mut out = Vec::new();
    for (r, &arity) in sig_rels {
        for pos in position_tuples(at.len, arity) {
            if !pos.iter().any(|&p| p >= from) {
                continue;
            }
            let atom = Fo::Rel(r.clone(), pos.iter().map(|&p| term_at(p, m)).collect());
            if at.facts.contains(&(r.clone(), pos)) {
                out.push(atom);
            } else {
                out.push(Fo::not(atom));
            }
        }
    }
    for i in 0..at.len {
        for j in (i + 1).max(from)..at.len {
            let eq = Fo::Eq(term_at(i, m), term_at(j, m));
            if at.equalities.contains(&(i, j)) {
                out.push(eq);
            } else {
                out.push(Fo::not(eq));
            }
        }
    }
    out
}

fn render_bf(t: &BfType, rels: &BTreeMap<String, usize>, m: usize, from: usize) -> Fo {
    let mut parts = atomic_literals(&t.atomic, rels, m, from);
    let n = t.atomic.len;
    let y = match term_at(n, m) {
        Term::Var(v) => v,
        Term::Const(_) => unreachable!("extensions are variables"),
    };
    for b in &t.branches {
        let guard = Guard::Edge {
            relation: b.relation.clone(),
            source: term_at(b.source, m),
            backward: b.backward,
        };
        let bodies: Vec<Fo> = b.types.iter().map(|ty| render_bf(ty, rels, m, n)).collect();
        for body in &bodies {
            parts.push(Fo::bexists(y.clone(), guard.clone(), body.clone()));
        }
        parts.push(Fo::bforall(y.clone(), guard, Fo::or_all(bodies)));
    }
    dedup_and(parts)
}

fn dedup_and(parts: Vec<Fo>) -> Fo {
    let mut seen = BTreeSet::new();
    Fo::and_all(parts.into_iter().filter(|p| seen.insert(p.clone())))
}

/// Bounded sentence of quantifier rank `k` true in exactly the structures
/// that are rank-`k` back-and-forth equivalent to `s` (forward guards), or
/// temporally equivalent when `dir` is [`Direction::Both`].
pub fn characteristic_formula_with(s: &Structure, k: usize, dir: Direction) -> Fo {
    let t = bf_type(s, k, dir);
    render_bf(&t, s.signature().relations(), s.basepoints().len(), 0)
}

pub fn characteristic_formula(s: &Structure, k: usize) -> Fo {
    characteristic_formula_with(s, k, Direction::Forward)
}

fn hybrid_name(pos: usize) -> String {
    if pos == 0 {
        "x".to_string()
    } else {
        format!("y{pos}")
    }
}

fn at(pos: usize, f: Hybrid) -> Hybrid {
    Hybrid::at(AtTarget::Var(hybrid_name(pos)), f)
}

fn render_hybrid(t: &BfType, rels: &BTreeMap<String, usize>, rel: &str, from: usize) -> Hybrid {
    let n = t.atomic.len;
    let mut parts = Vec::new();
    for (r, &arity) in rels {
        for pos in position_tuples(n, arity) {
            if !pos.iter().any(|&p| p >= from) {
                continue;
            }
            let lit = if arity == 1 {
                at(pos[0], Hybrid::Atom(r.clone()))
            } else {
                at(pos[0], Hybrid::dia(Hybrid::Var(hybrid_name(pos[1]))))
            };
            let holds = t.atomic.facts.contains(&(r.clone(), pos));
            parts.push(if holds { lit } else { Hybrid::not(lit) });
        }
    }
    for i in 0..n {
        for j in (i + 1).max(from)..n {
            let lit = at(i, Hybrid::Var(hybrid_name(j)));
            parts.push(if t.atomic.equalities.contains(&(i, j)) {
                lit
            } else {
                Hybrid::not(lit)
            });
        }
    }
    let y = hybrid_name(n);
    for b in &t.branches {
        debug_assert_eq!(b.relation, rel);
        let bodies: Vec<Hybrid> = b
            .types
            .iter()
            .map(|ty| Hybrid::down(y.clone(), render_hybrid(ty, rels, rel, n)))
            .collect();
        let (dia, boxed): (fn(Hybrid) -> Hybrid, fn(Hybrid) -> Hybrid) = if b.backward {
            (Hybrid::dia_inv, Hybrid::box_inv)
        } else {
            (Hybrid::dia, Hybrid::boxed)
        };
        for body in &bodies {
            parts.push(at(b.source, dia(body.clone())));
        }
        let any = bodies
            .iter()
            .map(|h| match h {
                Hybrid::Down(_, inner) => (**inner).clone(),
                _ => unreachable!("bodies bind the new world"),
            })
            .collect::<Vec<_>>();
        parts.push(at(b.source, boxed(Hybrid::down(y.clone(), Hybrid::or_all(any)))));
    }
    let mut seen = BTreeSet::new();
    Hybrid::and_all(parts.into_iter().filter(|p| seen.insert(p.clone())))
}

/// Hybrid formula of depth `k` characterising `(s, a)` up to the rank-`k`
/// hybrid (temporal when `dir` is `Both`) back-and-forth game. The
/// signature must be unimodal with one basepoint.
pub fn characteristic_hybrid(s: &Structure, k: usize, dir: Direction) -> Result<Hybrid, LogicError> {
    let sig = s.signature();
    let rel = sig
        .unimodal_transition()
        .ok_or(LogicError::NotUnimodal(sig.transitions().len()))?;
    if sig.num_basepoints() != 1 {
        return Err(LogicError::MissingConstant(1));
    }
    let t = bf_type(s, k, dir);
    Ok(Hybrid::down("x", render_hybrid(&t, sig.relations(), rel, 0)))
}

/// Canonical descriptor of the rank-k Scott formula satisfied by a tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScottType {
    /// Rank 0: the atomic type.
    Atomic(AtomicType),
    /// No element is one step accessible from the tuple.
    Stuck(AtomicType),
    /// Exact number of accessible elements realising each extended type.
    Counts(BTreeMap<ScottType, usize>),
}

fn accessible(s: &Structure, vals: &[usize]) -> Vec<usize> {
    let succ = s.transition_successors();
    let set: BTreeSet<usize> = vals.iter().flat_map(|&v| succ[v].iter().copied()).collect();
    set.into_iter().collect()
}

fn scott_of(s: &Structure, vals: &mut Vec<usize>, k: usize) -> ScottType {
    if k == 0 {
        return ScottType::Atomic(atomic_type(s, vals));
    }
    let acc = accessible(s, vals);
    if acc.is_empty() {
        return ScottType::Stuck(atomic_type(s, vals));
    }
    let mut counts = BTreeMap::new();
    for y in acc {
        vals.push(y);
        *counts.entry(scott_of(s, vals, k - 1)).or_insert(0) += 1;
        vals.pop();
    }
    ScottType::Counts(counts)
}

pub fn scott_type(s: &Structure, k: usize) -> ScottType {
    scott_of(s, &mut s.basepoints().to_vec(), k)
}

fn render_scott(t: &ScottType, len: usize, rels: &BTreeMap<String, usize>, transitions: &[String], m: usize) -> Fo {
    let acc = || Guard::Acc {
        relations: transitions.to_vec(),
        sources: (0..len).map(|p| term_at(p, m)).collect(),
    };
    let y = match term_at(len, m) {
        Term::Var(v) => v,
        Term::Const(_) => unreachable!("extensions are variables"),
    };
    match t {
        ScottType::Atomic(at) => Fo::and_all(atomic_literals(at, rels, m, 0)),
        ScottType::Stuck(at) => Fo::and(
            Fo::not(Fo::bexists(y, acc(), Fo::True)),
            Fo::and_all(atomic_literals(at, rels, m, 0)),
        ),
        ScottType::Counts(counts) => {
            let mut parts = Vec::new();
            let mut bodies = Vec::new();
            for (ty, &l) in counts {
                let body = render_scott(ty, len + 1, rels, transitions, m);
                parts.push(Fo::exactly(l, &y, acc(), body.clone()));
                bodies.push(body);
            }
            parts.push(Fo::bforall(y, acc(), Fo::or_all(bodies)));
            Fo::and_all(parts)
        }
    }
}

/// The Scott sentence of rank `k` for `s`, with accessibility guards; apply
/// [`Fo::expand_acc`] for single-atom guards.
pub fn scott_formula(s: &Structure, k: usize) -> Fo {
    let t = scott_type(s, k);
    let transitions: Vec<String> = s.signature().transitions().iter().cloned().collect();
    let m = s.basepoints().len();
    render_scott(&t, m, s.signature().relations(), &transitions, m)
}
