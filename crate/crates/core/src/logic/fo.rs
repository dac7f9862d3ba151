use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::LogicError;
use crate::structures::{Signature, Structure};

/// A variable or one of the constants `c1..cm` (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(usize),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn is_var(&self, name: &str) -> bool {
        matches!(self, Term::Var(v) if v == name)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(i) => write!(f, "c{i}"),
        }
    }
}

/// Guard of a bounded quantifier over the variable it binds.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Guard {
    /// `R(t,y)`, or `R(y,t)` when `backward`.
    Edge {
        relation: String,
        source: Term,
        backward: bool,
    },
    /// `y` is one step away from some source along some listed relation:
    /// the disjunction of the forward `Edge` guards.
    Acc {
        relations: Vec<String>,
        sources: Vec<Term>,
    },
}

impl Guard {
    pub fn forward(relation: impl Into<String>, source: Term) -> Guard {
        Guard::Edge {
            relation: relation.into(),
            source,
            backward: false,
        }
    }

    pub fn backward(relation: impl Into<String>, source: Term) -> Guard {
        Guard::Edge {
            relation: relation.into(),
            source,
            backward: true,
        }
    }

    /// The single-atom disjuncts of this guard.
    pub fn disjuncts(&self) -> Vec<Guard> {
        match self {
            Guard::Edge { .. } => vec![self.clone()],
            Guard::Acc { relations, sources } => relations
                .iter()
                .flat_map(|r| sources.iter().map(move |t| Guard::forward(r.clone(), t.clone())))
                .collect(),
        }
    }

    /// The guard as an ordinary formula about `var`.
    pub fn to_formula(&self, var: &str) -> Fo {
        let y = Term::var(var);
        match self {
            Guard::Edge {
                relation,
                source,
                backward: false,
            } => Fo::Rel(relation.clone(), vec![source.clone(), y]),
            Guard::Edge {
                relation,
                source,
                backward: true,
            } => Fo::Rel(relation.clone(), vec![y, source.clone()]),
            Guard::Acc { .. } => Fo::or_all(self.disjuncts().iter().map(|g| g.to_formula(var))),
        }
    }

    fn terms(&self) -> Vec<&Term> {
        match self {
            Guard::Edge { source, .. } => vec![source],
            Guard::Acc { sources, .. } => sources.iter().collect(),
        }
    }

    fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Guard {
        match self {
            Guard::Edge {
                relation,
                source,
                backward,
            } => Guard::Edge {
                relation: relation.clone(),
                source: f(source),
                backward: *backward,
            },
            Guard::Acc { relations, sources } => Guard::Acc {
                relations: relations.clone(),
                sources: sources.iter().map(f).collect(),
            },
        }
    }

    fn fmt_with(&self, var: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guard::Edge {
                relation,
                source,
                backward: false,
            } => write!(f, "{relation}({source},{var})"),
            Guard::Edge {
                relation,
                source,
                backward: true,
            } => write!(f, "{relation}({var},{source})"),
            Guard::Acc { relations, sources } => {
                write!(f, "acc[{}](", relations.join(","))?;
                for s in sources {
                    write!(f, "{s},")?;
                }
                write!(f, "{var})")
            }
        }
    }
}

/// First-order formulas with bounded and counting quantifiers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fo {
    True,
    False,
    Rel(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Fo>),
    And(Box<Fo>, Box<Fo>),
    Or(Box<Fo>, Box<Fo>),
    Implies(Box<Fo>, Box<Fo>),
    Exists(String, Box<Fo>),
    Forall(String, Box<Fo>),
    /// `exists y (guard & body)`
    BoundedExists(String, Guard, Box<Fo>),
    /// `forall y (guard -> body)`
    BoundedForall(String, Guard, Box<Fo>),
    /// `exists>=i y (guard & body)`: at least `i` distinct witnesses.
    CountExists(usize, String, Guard, Box<Fo>),
}

impl Fo {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Fo) -> Fo {
        Fo::Not(Box::new(f))
    }

    pub fn and(a: Fo, b: Fo) -> Fo {
        Fo::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Fo, b: Fo) -> Fo {
        Fo::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Fo, b: Fo) -> Fo {
        Fo::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(var: impl Into<String>, body: Fo) -> Fo {
        Fo::Exists(var.into(), Box::new(body))
    }

    pub fn forall(var: impl Into<String>, body: Fo) -> Fo {
        Fo::Forall(var.into(), Box::new(body))
    }

    pub fn bexists(var: impl Into<String>, guard: Guard, body: Fo) -> Fo {
        Fo::BoundedExists(var.into(), guard, Box::new(body))
    }

    pub fn bforall(var: impl Into<String>, guard: Guard, body: Fo) -> Fo {
        Fo::BoundedForall(var.into(), guard, Box::new(body))
    }

    pub fn count(threshold: usize, var: impl Into<String>, guard: Guard, body: Fo) -> Fo {
        assert!(threshold >= 1, "counting threshold must be positive");
        Fo::CountExists(threshold, var.into(), guard, Box::new(body))
    }

    /// "Exactly `i`": `exists>=i` and not `exists>=i+1` (just the negated
    /// second half when `i = 0`).
    pub fn exactly(i: usize, var: &str, guard: Guard, body: Fo) -> Fo {
        let more = Fo::not(Fo::count(i + 1, var, guard.clone(), body.clone()));
        if i == 0 {
            more
        } else {
            Fo::and(Fo::count(i, var, guard, body), more)
        }
    }

    /// Right-nested conjunction; `true` when empty.
    pub fn and_all(parts: impl IntoIterator<Item = Fo>) -> Fo {
        let parts: Vec<Fo> = parts.into_iter().collect();
        parts
            .into_iter()
            .rev()
            .reduce(|acc, f| Fo::and(f, acc))
            .unwrap_or(Fo::True)
    }

    /// Right-nested disjunction; `false` when empty.
    pub fn or_all(parts: impl IntoIterator<Item = Fo>) -> Fo {
        let parts: Vec<Fo> = parts.into_iter().collect();
        parts
            .into_iter()
            .rev()
            .reduce(|acc, f| Fo::or(f, acc))
            .unwrap_or(Fo::False)
    }

    pub fn quantifier_rank(&self) -> usize {
        match self {
            Fo::True | Fo::False | Fo::Rel(..) | Fo::Eq(..) => 0,
            Fo::Not(a) => a.quantifier_rank(),
            Fo::And(a, b) | Fo::Or(a, b) | Fo::Implies(a, b) => {
                a.quantifier_rank().max(b.quantifier_rank())
            }
            Fo::Exists(_, a)
            | Fo::Forall(_, a)
            | Fo::BoundedExists(_, _, a)
            | Fo::BoundedForall(_, _, a)
            | Fo::CountExists(_, _, _, a) => 1 + a.quantifier_rank(),
        }
    }

    /// No unguarded quantifier, and every guard uses transition symbols of
    /// `sig` with a source term different from the bound variable.
    pub fn is_bounded(&self, sig: &Signature) -> bool {
        match self {
            Fo::True | Fo::False | Fo::Rel(..) | Fo::Eq(..) => true,
            Fo::Not(a) => a.is_bounded(sig),
            Fo::And(a, b) | Fo::Or(a, b) | Fo::Implies(a, b) => a.is_bounded(sig) && b.is_bounded(sig),
            Fo::Exists(..) | Fo::Forall(..) => false,
            Fo::BoundedExists(y, g, a) | Fo::BoundedForall(y, g, a) | Fo::CountExists(_, y, g, a) => {
                guard_is_bounded(y, g, sig) && a.is_bounded(sig)
            }
        }
    }

    /// True when no counting quantifier or accessibility guard occurs.
    pub fn is_plain(&self) -> bool {
        match self {
            Fo::True | Fo::False | Fo::Rel(..) | Fo::Eq(..) => true,
            Fo::Not(a) | Fo::Exists(_, a) | Fo::Forall(_, a) => a.is_plain(),
            Fo::And(a, b) | Fo::Or(a, b) | Fo::Implies(a, b) => a.is_plain() && b.is_plain(),
            Fo::BoundedExists(_, g, a) | Fo::BoundedForall(_, g, a) => {
                matches!(g, Guard::Edge { .. }) && a.is_plain()
            }
            Fo::CountExists(..) => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut term = |t: &Term, bound: &Vec<&str>| {
            if let Term::Var(v) = t {
                if !bound.contains(&v.as_str()) {
                    out.insert(v.clone());
                }
            }
        };
        match self {
            Fo::True | Fo::False => {}
            Fo::Rel(_, ts) => ts.iter().for_each(|t| term(t, bound)),
            Fo::Eq(a, b) => {
                term(a, bound);
                term(b, bound);
            }
            Fo::Not(a) => a.collect_free(bound, out),
            Fo::And(a, b) | Fo::Or(a, b) | Fo::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Fo::Exists(y, a) | Fo::Forall(y, a) => {
                bound.push(y);
                a.collect_free(bound, out);
                bound.pop();
            }
            Fo::BoundedExists(y, g, a) | Fo::BoundedForall(y, g, a) | Fo::CountExists(_, y, g, a) => {
                for t in g.terms() {
                    term(t, bound);
                }
                bound.push(y);
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut |v| {
            out.insert(v.to_string());
        });
        out
    }

    fn visit_vars(&self, f: &mut impl FnMut(&str)) {
        let term = |t: &Term, f: &mut dyn FnMut(&str)| {
            if let Term::Var(v) = t {
                f(v)
            }
        };
        match self {
            Fo::True | Fo::False => {}
            Fo::Rel(_, ts) => ts.iter().for_each(|t| term(t, f)),
            Fo::Eq(a, b) => {
                term(a, f);
                term(b, f);
            }
            Fo::Not(a) => a.visit_vars(f),
            Fo::And(a, b) | Fo::Or(a, b) | Fo::Implies(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
            Fo::Exists(y, a) | Fo::Forall(y, a) => {
                f(y);
                a.visit_vars(f);
            }
            Fo::BoundedExists(y, g, a) | Fo::BoundedForall(y, g, a) | Fo::CountExists(_, y, g, a) => {
                f(y);
                for t in g.terms() {
                    term(t, f);
                }
                a.visit_vars(f);
            }
        }
    }

    /// Capture-avoiding substitution of `to` for the free occurrences of the
    /// variable `from`.
    pub fn substitute(&self, from: &str, to: &Term) -> Fo {
        let sub = |t: &Term| if t.is_var(from) { to.clone() } else { t.clone() };
        match self {
            Fo::True => Fo::True,
            Fo::False => Fo::False,
            Fo::Rel(r, ts) => Fo::Rel(r.clone(), ts.iter().map(sub).collect()),
            Fo::Eq(a, b) => Fo::Eq(sub(a), sub(b)),
            Fo::Not(a) => Fo::not(a.substitute(from, to)),
            Fo::And(a, b) => Fo::and(a.substitute(from, to), b.substitute(from, to)),
            Fo::Or(a, b) => Fo::or(a.substitute(from, to), b.substitute(from, to)),
            Fo::Implies(a, b) => Fo::implies(a.substitute(from, to), b.substitute(from, to)),
            Fo::Exists(..)
            | Fo::Forall(..)
            | Fo::BoundedExists(..)
            | Fo::BoundedForall(..)
            | Fo::CountExists(..) => self.substitute_binder(from, to),
        }
    }

    fn substitute_binder(&self, from: &str, to: &Term) -> Fo {
        let (y, guard, body) = match self {
            Fo::Exists(y, a) | Fo::Forall(y, a) => (y, None, a),
            Fo::BoundedExists(y, g, a) | Fo::BoundedForall(y, g, a) | Fo::CountExists(_, y, g, a) => {
                (y, Some(g), a)
            }
            _ => unreachable!("binder"),
        };
        let sub = |t: &Term| if t.is_var(from) { to.clone() } else { t.clone() };
        let guard = guard.map(|g| g.map_terms(&sub));
        let (y, body) = if y == from {
            (y.clone(), (**body).clone())
        } else if to.is_var(y) && self.free_vars().contains(from) {
            let mut avoid = self.all_vars();
            avoid.insert(from.to_string());
            let fresh = fresh_var(y, &avoid);
            let renamed = body.substitute(y, &Term::Var(fresh.clone()));
            (fresh, renamed.substitute(from, to))
        } else {
            (y.clone(), body.substitute(from, to))
        };
        match self {
            Fo::Exists(..) => Fo::exists(y, body),
            Fo::Forall(..) => Fo::forall(y, body),
            Fo::BoundedExists(..) => Fo::bexists(y, guard.expect("guard"), body),
            Fo::BoundedForall(..) => Fo::bforall(y, guard.expect("guard"), body),
            Fo::CountExists(i, ..) => Fo::count(*i, y, guard.expect("guard"), body),
            _ => unreachable!("binder"),
        }
    }

    /// Rewrites every accessibility guard into single-atom guards of the
    /// same quantifier rank. Counting quantifiers are split by
    /// inclusion–exclusion over the last disjunct so no witness is counted
    /// twice.
    pub fn expand_acc(&self) -> Fo {
        match self {
            Fo::True | Fo::False | Fo::Rel(..) | Fo::Eq(..) => self.clone(),
            Fo::Not(a) => Fo::not(a.expand_acc()),
            Fo::And(a, b) => Fo::and(a.expand_acc(), b.expand_acc()),
            Fo::Or(a, b) => Fo::or(a.expand_acc(), b.expand_acc()),
            Fo::Implies(a, b) => Fo::implies(a.expand_acc(), b.expand_acc()),
            Fo::Exists(y, a) => Fo::exists(y.clone(), a.expand_acc()),
            Fo::Forall(y, a) => Fo::forall(y.clone(), a.expand_acc()),
            Fo::BoundedExists(y, g, a) => {
                let body = a.expand_acc();
                Fo::or_all(g.disjuncts().into_iter().map(|d| Fo::bexists(y.clone(), d, body.clone())))
            }
            Fo::BoundedForall(y, g, a) => {
                let body = a.expand_acc();
                Fo::and_all(g.disjuncts().into_iter().map(|d| Fo::bforall(y.clone(), d, body.clone())))
            }
            Fo::CountExists(i, y, g, a) => {
                let body = a.expand_acc();
                let disjuncts = g.disjuncts();
                let mut memo = HashMap::new();
                split_count(*i, y, &disjuncts, &body, &mut memo)
            }
        }
    }

    /// Tarskian evaluation; constants denote the basepoints.
    pub fn eval(&self, s: &Structure, env: &Assignment) -> Result<bool, LogicError> {
        let mut stack: Vec<(&str, usize)> = env.iter().map(|(k, &v)| (k.as_str(), v)).collect();
        eval(self, s, &mut stack)
    }
}

/// `exists>=l y (β_1 | … | β_n) & φ` as a Boolean combination of
/// single-guard counting formulas, memoized on `(l, n)`.
fn split_count(
    l: usize,
    y: &str,
    disjuncts: &[Guard],
    body: &Fo,
    memo: &mut HashMap<(usize, usize), Fo>,
) -> Fo {
    if l == 0 {
        return Fo::True;
    }
    if let Some(f) = memo.get(&(l, disjuncts.len())) {
        return f.clone();
    }
    let f = match disjuncts {
        [] => Fo::False,
        [only] => Fo::count(l, y, only.clone(), body.clone()),
        [rest @ .., last] => {
            // Witnesses not on `last`, plus witnesses on `last`.
            let not_last = Fo::and(Fo::not(last.to_formula(y)), body.clone());
            let mut inner = HashMap::new();
            Fo::or_all((0..=l).map(|m| {
                let left = split_count(m, y, rest, &not_last, &mut inner);
                let right = if l - m == 0 {
                    Fo::True
                } else {
                    Fo::count(l - m, y, last.clone(), body.clone())
                };
                simplify_and(left, right)
            }))
        }
    };
    memo.insert((l, disjuncts.len()), f.clone());
    f
}

fn simplify_and(a: Fo, b: Fo) -> Fo {
    match (a, b) {
        (Fo::True, b) => b,
        (a, Fo::True) => a,
        (a, b) => Fo::and(a, b),
    }
}

fn guard_is_bounded(y: &str, g: &Guard, sig: &Signature) -> bool {
    match g {
        Guard::Edge { relation, source, .. } => sig.is_transition(relation) && !source.is_var(y),
        Guard::Acc { relations, sources } => {
            !relations.is_empty()
                && relations.iter().all(|r| sig.is_transition(r))
                && sources.iter().all(|t| !t.is_var(y))
        }
    }
}

/// Variable-to-element assignment (elements by universe index).
pub type Assignment = BTreeMap<String, usize>;

/// `base`, or `base` followed by the least numeric suffix, avoiding `used`.
pub(crate) fn fresh_var(base: &str, used: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|v| !used.contains(v))
        .expect("unbounded supply")
}

fn lookup(t: &Term, s: &Structure, stack: &[(&str, usize)]) -> Result<usize, LogicError> {
    match t {
        Term::Var(v) => stack
            .iter()
            .rev()
            .find(|(n, _)| *n == v)
            .map(|&(_, e)| e)
            .ok_or_else(|| LogicError::UnboundVariable(v.clone())),
        Term::Const(i) => s
            .basepoints()
            .get(i.wrapping_sub(1))
            .copied()
            .ok_or(LogicError::MissingConstant(*i)),
    }
}

fn guard_holds(g: &Guard, y: usize, s: &Structure, stack: &[(&str, usize)]) -> Result<bool, LogicError> {
    match g {
        Guard::Edge {
            relation,
            source,
            backward,
        } => {
            let t = lookup(source, s, stack)?;
            let tuple = if *backward { [y, t] } else { [t, y] };
            Ok(s.holds(relation, &tuple))
        }
        Guard::Acc { relations, sources } => {
            for src in sources {
                let t = lookup(src, s, stack)?;
                if relations.iter().any(|r| s.holds(r, &[t, y])) {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

fn check_relation(s: &Structure, r: &str, n: usize) -> Result<(), LogicError> {
    match s.signature().arity(r) {
        Some(a) if a == n => Ok(()),
        Some(a) => Err(LogicError::Arity {
            relation: r.to_string(),
            expected: a,
            found: n,
        }),
        None if r == crate::structures::IDENTITY_RELATION => Ok(()),
        None => Err(LogicError::UnknownRelation(r.to_string())),
    }
}

fn eval<'a>(f: &'a Fo, s: &Structure, stack: &mut Vec<(&'a str, usize)>) -> Result<bool, LogicError> {
    Ok(match f {
        Fo::True => true,
        Fo::False => false,
        Fo::Rel(r, ts) => {
            check_relation(s, r, ts.len())?;
            let tuple = ts
                .iter()
                .map(|t| lookup(t, s, stack))
                .collect::<Result<Vec<_>, _>>()?;
            s.holds(r, &tuple)
        }
        Fo::Eq(a, b) => lookup(a, s, stack)? == lookup(b, s, stack)?,
        Fo::Not(a) => !eval(a, s, stack)?,
        Fo::And(a, b) => eval(a, s, stack)? && eval(b, s, stack)?,
        Fo::Or(a, b) => eval(a, s, stack)? || eval(b, s, stack)?,
        Fo::Implies(a, b) => !eval(a, s, stack)? || eval(b, s, stack)?,
        Fo::Exists(y, a) => {
            let mut found = false;
            for e in 0..s.len() {
                stack.push((y, e));
                let v = eval(a, s, stack);
                stack.pop();
                if v? {
                    found = true;
                    break;
                }
            }
            found
        }
        Fo::Forall(y, a) => {
            let mut all = true;
            for e in 0..s.len() {
                stack.push((y, e));
                let v = eval(a, s, stack);
                stack.pop();
                if !v? {
                    all = false;
                    break;
                }
            }
            all
        }
        Fo::BoundedExists(y, g, a) => count_witnesses(y, g, a, s, stack, 1, true)? >= 1,
        Fo::BoundedForall(y, g, a) => count_witnesses(y, g, a, s, stack, 1, false)? == 0,
        Fo::CountExists(i, y, g, a) => count_witnesses(y, g, a, s, stack, *i, true)? >= *i,
    })
}

/// Counts guarded elements whose body value equals `want`, stopping at `cap`.
fn count_witnesses<'a>(
    y: &'a str,
    g: &Guard,
    body: &'a Fo,
    s: &Structure,
    stack: &mut Vec<(&'a str, usize)>,
    cap: usize,
    want: bool,
) -> Result<usize, LogicError> {
    let mut n = 0;
    for e in 0..s.len() {
        if !guard_holds(g, e, s, stack)? {
            continue;
        }
        stack.push((y, e));
        let v = eval(body, s, stack);
        stack.pop();
        if v? == want {
            n += 1;
            if n >= cap {
                break;
            }
        }
    }
    Ok(n)
}

pub fn eval_fo(f: &Fo, s: &Structure, env: &Assignment) -> Result<bool, LogicError> {
    f.eval(s, env)
}

pub fn quantifier_rank(f: &Fo) -> usize {
    f.quantifier_rank()
}

pub fn is_bounded(f: &Fo, sig: &Signature) -> bool {
    f.is_bounded(sig)
}

// Printing. Precedence, loosest first: `->` (right), `|`, `&`, unary.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Implies,
    Or,
    And,
    Unary,
}

impl Fo {
    fn prec(&self) -> Prec {
        match self {
            Fo::Implies(..) => Prec::Implies,
            Fo::Or(..) => Prec::Or,
            Fo::And(..) => Prec::And,
            _ => Prec::Unary,
        }
    }

    fn fmt_at(&self, min: Prec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.fmt_at(Prec::Implies, f)?;
            return write!(f, ")");
        }
        match self {
            Fo::True => write!(f, "true"),
            Fo::False => write!(f, "false"),
            Fo::Rel(r, ts) => {
                write!(f, "{r}(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Fo::Eq(a, b) => write!(f, "{a} = {b}"),
            Fo::Not(a) => {
                write!(f, "!")?;
                match **a {
                    Fo::Eq(..) => {
                        write!(f, "(")?;
                        a.fmt_at(Prec::Implies, f)?;
                        write!(f, ")")
                    }
                    _ => a.fmt_at(Prec::Unary, f),
                }
            }
            Fo::And(a, b) => {
                a.fmt_at(Prec::Unary, f)?;
                write!(f, " & ")?;
                b.fmt_at(Prec::And, f)
            }
            Fo::Or(a, b) => {
                a.fmt_at(Prec::And, f)?;
                write!(f, " | ")?;
                b.fmt_at(Prec::Or, f)
            }
            Fo::Implies(a, b) => {
                a.fmt_at(Prec::Or, f)?;
                write!(f, " -> ")?;
                b.fmt_at(Prec::Implies, f)
            }
            Fo::Exists(y, a) => {
                write!(f, "exists {y} ")?;
                unguarded_body(a, y, f)
            }
            Fo::Forall(y, a) => {
                write!(f, "forall {y} ")?;
                unguarded_body(a, y, f)
            }
            Fo::BoundedExists(y, g, a) => {
                write!(f, "exists {y} (")?;
                g.fmt_with(y, f)?;
                write!(f, " & ")?;
                a.fmt_at(Prec::And, f)?;
                write!(f, ")")
            }
            Fo::BoundedForall(y, g, a) => {
                write!(f, "forall {y} (")?;
                g.fmt_with(y, f)?;
                write!(f, " -> ")?;
                a.fmt_at(Prec::Implies, f)?;
                write!(f, ")")
            }
            Fo::CountExists(i, y, g, a) => {
                write!(f, "exists>={i} {y} (")?;
                g.fmt_with(y, f)?;
                write!(f, " & ")?;
                a.fmt_at(Prec::And, f)?;
                write!(f, ")")
            }
        }
    }
}

/// Bodies of unguarded quantifiers that would read back as a guard get an
/// extra pair of parentheses.
fn unguarded_body(a: &Fo, y: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if super::parse::looks_guarded(a, y) {
        write!(f, "((")?;
        a.fmt_at(Prec::Implies, f)?;
        write!(f, "))")
    } else {
        a.fmt_at(Prec::Unary, f)
    }
}

impl fmt::Display for Fo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(Prec::Implies, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn c(i: usize) -> Term {
        Term::Const(i)
    }

    #[test]
    fn loop_satisfies_reflexive_edge() {
        let f = Fo::Rel("E".into(), vec![c(1), c(1)]);
        assert_eq!(eval_fo(&f, &fixtures::self_loop(), &Assignment::new()), Ok(true));
        assert_eq!(eval_fo(&f, &fixtures::c2(), &Assignment::new()), Ok(false));
    }

    #[test]
    fn equality_is_reflexive() {
        let f = Fo::Eq(Term::var("x"), Term::var("x"));
        let env = Assignment::from([("x".to_string(), 1)]);
        assert_eq!(eval_fo(&f, &fixtures::path3(), &env), Ok(true));
    }

    #[test]
    fn counting_successors() {
        let f = Fo::count(2, "y", Guard::forward("E", c(1)), Fo::True);
        assert_eq!(eval_fo(&f, &fixtures::star(3), &Assignment::new()), Ok(true));
        assert_eq!(eval_fo(&f, &fixtures::star(1), &Assignment::new()), Ok(false));
    }

    #[test]
    fn unbound_variable_is_an_error() {
        let f = Fo::Rel("P".into(), vec![Term::var("z")]);
        assert_eq!(
            eval_fo(&f, &fixtures::path3(), &Assignment::new()),
            Err(LogicError::UnboundVariable("z".into()))
        );
    }

    #[test]
    fn ranks() {
        let inner = Fo::bexists("z", Guard::forward("E", Term::var("y")), Fo::True);
        let f = Fo::bexists("y", Guard::forward("E", c(1)), inner.clone());
        assert_eq!(Fo::Rel("E".into(), vec![c(1), c(1)]).quantifier_rank(), 0);
        assert_eq!(inner.quantifier_rank(), 1);
        assert_eq!(f.quantifier_rank(), 2);
    }

    #[test]
    fn boundedness() {
        let sig = fixtures::unimodal_signature();
        let p = Fo::Rel("P".into(), vec![Term::var("y")]);
        assert!(!Fo::exists("y", p.clone()).is_bounded(&sig));
        assert!(!Fo::bexists("y", Guard::forward("P", c(1)), p.clone()).is_bounded(&sig));
        assert!(!Fo::bexists("y", Guard::forward("E", Term::var("y")), p.clone()).is_bounded(&sig));
        assert!(Fo::bexists("y", Guard::backward("E", c(1)), p).is_bounded(&sig));
    }

    #[test]
    fn substitution_avoids_capture() {
        // exists y (E(x,y) & y = x) with x := y must rename the bound y.
        let f = Fo::bexists(
            "y",
            Guard::forward("E", Term::var("x")),
            Fo::Eq(Term::var("y"), Term::var("x")),
        );
        let g = f.substitute("x", &Term::var("y"));
        assert_eq!(g.to_string(), "exists y1 (E(y,y1) & y1 = y)");
        assert_eq!(f.substitute("y", &c(1)), f);
    }

    #[test]
    fn exact_counts() {
        let s = fixtures::star(3);
        let env = Assignment::new();
        for i in 0..5 {
            let f = Fo::exactly(i, "y", Guard::forward("E", c(1)), Fo::True);
            assert_eq!(eval_fo(&f, &s, &env), Ok(i == 3), "exactly {i}");
        }
    }

    #[test]
    fn acc_expansion_counts_each_witness_once() {
        // r -> l1, l2, l3 and l1 -> l2: l2 is reachable from both r and l1.
        let s = fixtures::graph(&["r", "l1", "l2", "l3"], &[("r", "l1"), ("r", "l2"), ("r", "l3"), ("l1", "l2")], &[]);
        let acc = Guard::Acc {
            relations: vec!["E".into()],
            sources: vec![c(1), Term::var("x")],
        };
        let env = Assignment::from([("x".to_string(), 1)]);
        for i in 1..=5 {
            let f = Fo::count(i, "y", acc.clone(), Fo::True);
            let g = f.expand_acc();
            assert!(!g.to_string().contains("acc"));
            assert_eq!(eval_fo(&f, &s, &env), Ok(i <= 3));
            assert_eq!(eval_fo(&g, &s, &env), eval_fo(&f, &s, &env), "threshold {i}");
            assert!(g.quantifier_rank() <= 1);
        }
    }
}
