use std::collections::BTreeSet;
use std::fmt;

use super::LogicError;
use crate::structures::Structure;

/// Hybrid formulas with backwards modalities and nominals. Atoms carry the
/// name of the unary predicate they denote (`p1` is `P1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Hybrid {
    True,
    False,
    Atom(String),
    Var(String),
    Nominal(usize),
    Not(Box<Hybrid>),
    And(Box<Hybrid>, Box<Hybrid>),
    Or(Box<Hybrid>, Box<Hybrid>),
    Box(Box<Hybrid>),
    Dia(Box<Hybrid>),
    BoxInv(Box<Hybrid>),
    DiaInv(Box<Hybrid>),
    Down(String, Box<Hybrid>),
    At(AtTarget, Box<Hybrid>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtTarget {
    Var(String),
    Nominal(usize),
}

impl fmt::Display for AtTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtTarget::Var(v) => write!(f, "{v}"),
            AtTarget::Nominal(i) => write!(f, "c{i}"),
        }
    }
}

impl Hybrid {
    pub fn atom(name: impl Into<String>) -> Hybrid {
        Hybrid::Atom(name.into())
    }

    pub fn var(name: impl Into<String>) -> Hybrid {
        Hybrid::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Hybrid) -> Hybrid {
        Hybrid::Not(Box::new(a))
    }

    pub fn and(a: Hybrid, b: Hybrid) -> Hybrid {
        Hybrid::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Hybrid, b: Hybrid) -> Hybrid {
        Hybrid::Or(Box::new(a), Box::new(b))
    }

    pub fn boxed(a: Hybrid) -> Hybrid {
        Hybrid::Box(Box::new(a))
    }

    pub fn dia(a: Hybrid) -> Hybrid {
        Hybrid::Dia(Box::new(a))
    }

    pub fn box_inv(a: Hybrid) -> Hybrid {
        Hybrid::BoxInv(Box::new(a))
    }

    pub fn dia_inv(a: Hybrid) -> Hybrid {
        Hybrid::DiaInv(Box::new(a))
    }

    pub fn down(x: impl Into<String>, a: Hybrid) -> Hybrid {
        Hybrid::Down(x.into(), Box::new(a))
    }

    pub fn at(target: AtTarget, a: Hybrid) -> Hybrid {
        Hybrid::At(target, Box::new(a))
    }

    pub fn at_var(x: impl Into<String>, a: Hybrid) -> Hybrid {
        Hybrid::At(AtTarget::Var(x.into()), Box::new(a))
    }

    pub fn and_all(parts: impl IntoIterator<Item = Hybrid>) -> Hybrid {
        let parts: Vec<Hybrid> = parts.into_iter().collect();
        parts
            .into_iter()
            .rev()
            .reduce(|acc, f| Hybrid::and(f, acc))
            .unwrap_or(Hybrid::True)
    }

    pub fn or_all(parts: impl IntoIterator<Item = Hybrid>) -> Hybrid {
        let parts: Vec<Hybrid> = parts.into_iter().collect();
        parts
            .into_iter()
            .rev()
            .reduce(|acc, f| Hybrid::or(f, acc))
            .unwrap_or(Hybrid::False)
    }

    /// Modal depth, except that `dia x` / `diainv x` for a world variable
    /// (or nominal) only tests an edge between already-named worlds and has
    /// depth zero.
    pub fn depth(&self) -> usize {
        match self {
            Hybrid::True | Hybrid::False | Hybrid::Atom(_) | Hybrid::Var(_) | Hybrid::Nominal(_) => 0,
            Hybrid::Dia(a) | Hybrid::DiaInv(a) if matches!(**a, Hybrid::Var(_) | Hybrid::Nominal(_)) => 0,
            Hybrid::Not(a) | Hybrid::Down(_, a) | Hybrid::At(_, a) => a.depth(),
            Hybrid::And(a, b) | Hybrid::Or(a, b) => a.depth().max(b.depth()),
            Hybrid::Box(a) | Hybrid::Dia(a) | Hybrid::BoxInv(a) | Hybrid::DiaInv(a) => 1 + a.depth(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Hybrid::True | Hybrid::False | Hybrid::Atom(_) | Hybrid::Nominal(_) => {}
            Hybrid::Var(x) => {
                if !bound.contains(&x.as_str()) {
                    out.insert(x.clone());
                }
            }
            Hybrid::Not(a)
            | Hybrid::Box(a)
            | Hybrid::Dia(a)
            | Hybrid::BoxInv(a)
            | Hybrid::DiaInv(a) => a.collect_free(bound, out),
            Hybrid::And(a, b) | Hybrid::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Hybrid::Down(x, a) => {
                bound.push(x);
                a.collect_free(bound, out);
                bound.pop();
            }
            Hybrid::At(t, a) => {
                if let AtTarget::Var(x) = t {
                    if !bound.contains(&x.as_str()) {
                        out.insert(x.clone());
                    }
                }
                a.collect_free(bound, out);
            }
        }
    }

    /// Every world-variable name occurring anywhere.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |h| match h {
            Hybrid::Var(x) | Hybrid::Down(x, _) | Hybrid::At(AtTarget::Var(x), _) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    pub fn max_nominal(&self) -> usize {
        let mut m = 0;
        self.visit(&mut |h| match h {
            Hybrid::Nominal(i) | Hybrid::At(AtTarget::Nominal(i), _) => m = m.max(*i),
            _ => {}
        });
        m
    }

    pub fn uses_backward(&self) -> bool {
        let mut found = false;
        self.visit(&mut |h| found |= matches!(h, Hybrid::BoxInv(_) | Hybrid::DiaInv(_)));
        found
    }

    fn visit(&self, f: &mut impl FnMut(&Hybrid)) {
        f(self);
        match self {
            Hybrid::True | Hybrid::False | Hybrid::Atom(_) | Hybrid::Var(_) | Hybrid::Nominal(_) => {}
            Hybrid::Not(a)
            | Hybrid::Box(a)
            | Hybrid::Dia(a)
            | Hybrid::BoxInv(a)
            | Hybrid::DiaInv(a)
            | Hybrid::Down(_, a)
            | Hybrid::At(_, a) => a.visit(f),
            Hybrid::And(a, b) | Hybrid::Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Direct Kripke semantics at the first basepoint, using the single
    /// transition relation of the signature for the modalities.
    pub fn eval(&self, s: &Structure) -> Result<bool, LogicError> {
        let rel = modal_relation(s)?;
        let &w = s.basepoints().first().ok_or(LogicError::MissingConstant(1))?;
        let (succ, pred) = adjacency(s, rel);
        let ctx = Ctx { s, succ, pred };
        ctx.eval(self, w, &mut Vec::new())
    }
}

/// The relation interpreting `dia`/`box`: the unique transition symbol.
pub(crate) fn modal_relation(s: &Structure) -> Result<&str, LogicError> {
    let t = s.signature().transitions();
    if t.len() == 1 {
        Ok(t.iter().next().expect("one transition"))
    } else {
        Err(LogicError::NotUnimodal(t.len()))
    }
}

fn adjacency(s: &Structure, rel: &str) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut succ = vec![Vec::new(); s.len()];
    let mut pred = vec![Vec::new(); s.len()];
    for t in s.tuples(rel) {
        succ[t[0]].push(t[1]);
        pred[t[1]].push(t[0]);
    }
    (succ, pred)
}

struct Ctx<'s> {
    s: &'s Structure,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl Ctx<'_> {
    fn var(&self, x: &str, env: &[(&str, usize)]) -> Result<usize, LogicError> {
        env.iter()
            .rev()
            .find(|(n, _)| *n == x)
            .map(|&(_, e)| e)
            .ok_or_else(|| LogicError::UnboundVariable(x.to_string()))
    }

    fn nominal(&self, i: usize) -> Result<usize, LogicError> {
        self.s
            .basepoints()
            .get(i.wrapping_sub(1))
            .copied()
            .ok_or(LogicError::MissingConstant(i))
    }

    fn eval<'a>(&self, f: &'a Hybrid, w: usize, env: &mut Vec<(&'a str, usize)>) -> Result<bool, LogicError> {
        Ok(match f {
            Hybrid::True => true,
            Hybrid::False => false,
            Hybrid::Atom(p) => {
                if self.s.signature().arity(p) != Some(1) {
                    return Err(LogicError::UnknownRelation(p.clone()));
                }
                self.s.holds(p, &[w])
            }
            Hybrid::Var(x) => self.var(x, env)? == w,
            Hybrid::Nominal(i) => self.nominal(*i)? == w,
            Hybrid::Not(a) => !self.eval(a, w, env)?,
            Hybrid::And(a, b) => self.eval(a, w, env)? && self.eval(b, w, env)?,
            Hybrid::Or(a, b) => self.eval(a, w, env)? || self.eval(b, w, env)?,
            Hybrid::Dia(a) => self.any(&self.succ[w], a, env)?,
            Hybrid::DiaInv(a) => self.any(&self.pred[w], a, env)?,
            Hybrid::Box(a) => self.all(&self.succ[w], a, env)?,
            Hybrid::BoxInv(a) => self.all(&self.pred[w], a, env)?,
            Hybrid::Down(x, a) => {
                env.push((x, w));
                let v = self.eval(a, w, env);
                env.pop();
                v?
            }
            Hybrid::At(t, a) => {
                let u = match t {
                    AtTarget::Var(x) => self.var(x, env)?,
                    AtTarget::Nominal(i) => self.nominal(*i)?,
                };
                self.eval(a, u, env)?
            }
        })
    }

    fn any<'a>(&self, ws: &[usize], a: &'a Hybrid, env: &mut Vec<(&'a str, usize)>) -> Result<bool, LogicError> {
        for &u in ws {
            if self.eval(a, u, env)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn all<'a>(&self, ws: &[usize], a: &'a Hybrid, env: &mut Vec<(&'a str, usize)>) -> Result<bool, LogicError> {
        for &u in ws {
            if !self.eval(a, u, env)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn hybrid_depth(f: &Hybrid) -> usize {
    f.depth()
}

pub fn eval_hybrid(f: &Hybrid, s: &Structure) -> Result<bool, LogicError> {
    f.eval(s)
}

/// Printed atom name: `P`, `P1`, … become `p`, `p1`; others print verbatim.
pub(crate) fn atom_token(name: &str) -> String {
    match name.strip_prefix('P') {
        Some(rest) if rest.chars().all(|c| c.is_ascii_digit()) => format!("p{rest}"),
        _ => name.to_string(),
    }
}

impl Hybrid {
    fn is_binary(&self) -> bool {
        matches!(self, Hybrid::And(..) | Hybrid::Or(..))
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_binary() {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Hybrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hybrid::True => write!(f, "true"),
            Hybrid::False => write!(f, "false"),
            Hybrid::Atom(p) => write!(f, "{}", atom_token(p)),
            Hybrid::Var(x) => write!(f, "{x}"),
            Hybrid::Nominal(i) => write!(f, "c{i}"),
            Hybrid::Not(a) => {
                write!(f, "!")?;
                a.fmt_operand(f)
            }
            Hybrid::And(a, b) => {
                a.fmt_operand(f)?;
                write!(f, " & ")?;
                match **b {
                    Hybrid::Or(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
            Hybrid::Or(a, b) => {
                match **a {
                    Hybrid::And(..) => write!(f, "{a}")?,
                    _ => a.fmt_operand(f)?,
                }
                write!(f, " | {b}")
            }
            Hybrid::Box(a) => {
                write!(f, "box ")?;
                a.fmt_operand(f)
            }
            Hybrid::Dia(a) => {
                write!(f, "dia ")?;
                a.fmt_operand(f)
            }
            Hybrid::BoxInv(a) => {
                write!(f, "boxinv ")?;
                a.fmt_operand(f)
            }
            Hybrid::DiaInv(a) => {
                write!(f, "diainv ")?;
                a.fmt_operand(f)
            }
            Hybrid::Down(x, a) => {
                write!(f, "down {x}. ")?;
                a.fmt_operand(f)
            }
            Hybrid::At(t, a) => {
                write!(f, "@{t} ")?;
                a.fmt_operand(f)
            }
        }
    }
}
