//! Recursive-descent parsers for the concrete syntax printed by the
//! `Display` impls.
//!
//! Hybrid: `p1`, `x`, `c1`, `true`, `false`, `!`, `&`, `|`, `box`, `dia`,
//! `boxinv`, `diainv`, `down x. φ`, `@x φ`, `@c1 φ`. FO additionally:
//! `R(t1,..,tn)`, `t = u`, `->`, `exists y φ`, `forall y φ`,
//! `exists y (E(t,y) & φ)`, `forall y (E(t,y) -> φ)`, `exists>=i y (E(t,y) & φ)`,
//! backward guards `E(y,t)` and `acc[E,F](t1,..,y)`.
//!
//! `&` binds tighter than `|`, which binds tighter than `->`; all three
//! associate to the right. Unary operators and quantifiers take the
//! smallest following operand.

use super::fo::{Fo, Guard, Term};
use super::hybrid::{AtTarget, Hybrid};
use super::LogicError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Geq,
    Equals,
    At,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, LogicError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
            continue;
        } else if c.is_ascii_digit() {
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i]
                .parse()
                .map_err(|_| syntax(start, "number too large"))?;
            out.push((Tok::Num(n), start));
            continue;
        } else {
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '!' => Tok::Bang,
                '&' => Tok::Amp,
                '|' => Tok::Pipe,
                '=' => Tok::Equals,
                '@' => Tok::At,
                '-' if bytes.get(i + 1) == Some(&b'>') => {
                    i += 1;
                    Tok::Arrow
                }
                '>' if bytes.get(i + 1) == Some(&b'=') => {
                    i += 1;
                    Tok::Geq
                }
                _ => return Err(syntax(start, format!("unexpected character '{c}'"))),
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

fn syntax(pos: usize, message: impl Into<String>) -> LogicError {
    LogicError::Syntax {
        pos,
        message: message.into(),
    }
}

/// Scope and constant-range checking applied while parsing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept variables not bound by an enclosing binder.
    pub allow_free: bool,
    /// Largest admissible constant / nominal index.
    pub max_constant: Option<usize>,
}

impl ParseOptions {
    pub fn closed() -> Self {
        ParseOptions {
            allow_free: false,
            max_constant: None,
        }
    }

    pub fn open() -> Self {
        ParseOptions {
            allow_free: true,
            max_constant: None,
        }
    }

    pub fn with_constants(self, m: usize) -> Self {
        ParseOptions {
            max_constant: Some(m),
            ..self
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    opts: ParseOptions,
    bound: Vec<String>,
}

const HYBRID_KEYWORDS: &[&str] = &["true", "false", "box", "dia", "boxinv", "diainv", "down"];
const FO_KEYWORDS: &[&str] = &["true", "false", "exists", "forall", "acc"];

fn nominal_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('c')?;
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn is_prop_atom(name: &str) -> bool {
    name.strip_prefix('p')
        .is_some_and(|rest| rest.chars().all(|c| c.is_ascii_digit()))
}

impl Parser {
    fn new(text: &str, opts: ParseOptions) -> Result<Self, LogicError> {
        Ok(Parser {
            toks: lex(text)?,
            i: 0,
            opts,
            bound: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), LogicError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, LogicError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(syntax(self.pos(), format!("expected {what}"))),
        }
    }

    fn finish(&mut self) -> Result<(), LogicError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(syntax(self.pos(), "unexpected trailing input"))
        }
    }

    fn check_var(&self, name: &str, pos: usize) -> Result<(), LogicError> {
        if self.opts.allow_free || self.bound.iter().any(|b| b == name) {
            Ok(())
        } else {
            Err(LogicError::Scope {
                name: name.to_string(),
                pos,
            })
        }
    }

    fn check_constant(&self, index: usize, pos: usize) -> Result<(), LogicError> {
        match self.opts.max_constant {
            _ if index == 0 => Err(LogicError::NominalRange { index, max: 0, pos }),
            Some(max) if index > max => Err(LogicError::NominalRange { index, max, pos }),
            _ => Ok(()),
        }
    }

    // ---- hybrid ----

    fn hybrid(&mut self) -> Result<Hybrid, LogicError> {
        let a = self.hybrid_and()?;
        if self.eat(&Tok::Pipe) {
            Ok(Hybrid::or(a, self.hybrid()?))
        } else {
            Ok(a)
        }
    }

    fn hybrid_and(&mut self) -> Result<Hybrid, LogicError> {
        let a = self.hybrid_unary()?;
        if self.eat(&Tok::Amp) {
            Ok(Hybrid::and(a, self.hybrid_and()?))
        } else {
            Ok(a)
        }
    }

    fn hybrid_unary(&mut self) -> Result<Hybrid, LogicError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Bang => Ok(Hybrid::not(self.hybrid_unary()?)),
            Tok::LParen => {
                let f = self.hybrid()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::At => {
                let tpos = self.pos();
                let name = self.ident("a world variable or nominal after '@'")?;
                let target = match nominal_index(&name) {
                    Some(i) => {
                        self.check_constant(i, tpos)?;
                        AtTarget::Nominal(i)
                    }
                    None => {
                        self.check_var(&name, tpos)?;
                        AtTarget::Var(name)
                    }
                };
                Ok(Hybrid::at(target, self.hybrid_unary()?))
            }
            Tok::Ident(name) => match name.as_str() {
                "true" => Ok(Hybrid::True),
                "false" => Ok(Hybrid::False),
                "box" => Ok(Hybrid::boxed(self.hybrid_unary()?)),
                "dia" => Ok(Hybrid::dia(self.hybrid_unary()?)),
                "boxinv" => Ok(Hybrid::box_inv(self.hybrid_unary()?)),
                "diainv" => Ok(Hybrid::dia_inv(self.hybrid_unary()?)),
                "down" => {
                    let vpos = self.pos();
                    let x = self.ident("a world variable after 'down'")?;
                    if HYBRID_KEYWORDS.contains(&x.as_str()) || nominal_index(&x).is_some() || is_prop_atom(&x) {
                        return Err(syntax(vpos, format!("'{x}' cannot be bound")));
                    }
                    self.expect(Tok::Dot, "'.' after the bound variable")?;
                    self.bound.push(x.clone());
                    let body = self.hybrid_unary();
                    self.bound.pop();
                    Ok(Hybrid::down(x, body?))
                }
                _ if name.starts_with(|c: char| c.is_ascii_uppercase()) => Ok(Hybrid::Atom(name)),
                _ if is_prop_atom(&name) => Ok(Hybrid::Atom(format!("P{}", &name[1..]))),
                _ => match nominal_index(&name) {
                    Some(i) => {
                        self.check_constant(i, pos)?;
                        Ok(Hybrid::Nominal(i))
                    }
                    None => {
                        self.check_var(&name, pos)?;
                        Ok(Hybrid::Var(name))
                    }
                },
            },
            _ => Err(syntax(pos, "expected a formula")),
        }
    }

    // ---- first-order ----

    fn fo(&mut self) -> Result<Fo, LogicError> {
        let a = self.fo_or()?;
        if self.eat(&Tok::Arrow) {
            Ok(Fo::implies(a, self.fo()?))
        } else {
            Ok(a)
        }
    }

    fn fo_or(&mut self) -> Result<Fo, LogicError> {
        let a = self.fo_and()?;
        if self.eat(&Tok::Pipe) {
            Ok(Fo::or(a, self.fo_or()?))
        } else {
            Ok(a)
        }
    }

    fn fo_and(&mut self) -> Result<Fo, LogicError> {
        let a = self.fo_unary()?;
        if self.eat(&Tok::Amp) {
            Ok(Fo::and(a, self.fo_and()?))
        } else {
            Ok(a)
        }
    }

    fn term(&mut self) -> Result<Term, LogicError> {
        let pos = self.pos();
        let name = self.ident("a term")?;
        if FO_KEYWORDS.contains(&name.as_str()) {
            return Err(syntax(pos, format!("keyword '{name}' is not a term")));
        }
        match nominal_index(&name) {
            Some(i) => {
                self.check_constant(i, pos)?;
                Ok(Term::Const(i))
            }
            None => {
                self.check_var(&name, pos)?;
                Ok(Term::Var(name))
            }
        }
    }

    fn terms(&mut self) -> Result<Vec<Term>, LogicError> {
        self.expect(Tok::LParen, "'('")?;
        let mut ts = vec![self.term()?];
        while self.eat(&Tok::Comma) {
            ts.push(self.term()?);
        }
        self.expect(Tok::RParen, "')'")?;
        Ok(ts)
    }

    fn fo_unary(&mut self) -> Result<Fo, LogicError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Fo::not(self.fo_unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.fo()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Ident(name) => match name.as_str() {
                "true" => {
                    self.bump();
                    Ok(Fo::True)
                }
                "false" => {
                    self.bump();
                    Ok(Fo::False)
                }
                "exists" | "forall" => self.quantifier(),
                _ if matches!(self.peek_at(1), Tok::LParen) => {
                    self.bump();
                    if name.starts_with(|c: char| c.is_ascii_lowercase()) {
                        return Err(syntax(pos, format!("relation symbol '{name}' must start with an uppercase letter")));
                    }
                    Ok(Fo::Rel(name, self.terms()?))
                }
                _ => {
                    let a = self.term()?;
                    self.expect(Tok::Equals, "'=' after a term")?;
                    let b = self.term()?;
                    Ok(Fo::Eq(a, b))
                }
            },
            _ => Err(syntax(pos, "expected a formula")),
        }
    }

    fn quantifier(&mut self) -> Result<Fo, LogicError> {
        let kw = self.ident("a quantifier")?;
        let threshold = if kw == "exists" && self.eat(&Tok::Geq) {
            let pos = self.pos();
            match self.bump() {
                Tok::Num(n) if n >= 1 => Some(n),
                _ => return Err(syntax(pos, "expected a positive count after '>='")),
            }
        } else {
            None
        };
        let vpos = self.pos();
        let y = self.ident("a bound variable")?;
        if FO_KEYWORDS.contains(&y.as_str()) || nominal_index(&y).is_some() {
            return Err(syntax(vpos, format!("'{y}' cannot be bound")));
        }
        let universal = kw == "forall";
        let save = self.i;
        if let Some(f) = self.try_guarded(&y, universal, threshold)? {
            return Ok(f);
        }
        self.i = save;
        if threshold.is_some() {
            return Err(syntax(self.pos(), "counting quantifiers need a guard: exists>=i y (E(t,y) & ...)"));
        }
        self.bound.push(y.clone());
        let body = self.fo_unary();
        self.bound.pop();
        let body = body?;
        Ok(if universal {
            Fo::forall(y, body)
        } else {
            Fo::exists(y, body)
        })
    }

    /// `(guard & body)` or `(guard -> body)`; `None` (without consuming a
    /// committed error) when the input does not have that shape.
    fn try_guarded(&mut self, y: &str, universal: bool, threshold: Option<usize>) -> Result<Option<Fo>, LogicError> {
        if !self.eat(&Tok::LParen) {
            return Ok(None);
        }
        let Some(guard) = self.try_guard(y)? else {
            return Ok(None);
        };
        let connective = if universal { Tok::Arrow } else { Tok::Amp };
        if !self.eat(&connective) {
            return Ok(None);
        }
        self.bound.push(y.to_string());
        let body = if universal { self.fo() } else { self.fo_and() };
        self.bound.pop();
        let body = match body {
            Ok(b) => b,
            Err(_) => return Ok(None),
        };
        if !self.eat(&Tok::RParen) {
            return Ok(None);
        }
        let y = y.to_string();
        Ok(Some(match (universal, threshold) {
            (true, _) => Fo::bforall(y, guard, body),
            (false, None) => Fo::bexists(y, guard, body),
            (false, Some(i)) => Fo::count(i, y, guard, body),
        }))
    }

    fn try_guard(&mut self, y: &str) -> Result<Option<Guard>, LogicError> {
        let Tok::Ident(name) = self.peek().clone() else {
            return Ok(None);
        };
        if name == "acc" {
            self.bump();
            self.expect(Tok::LBracket, "'[' after acc")?;
            let mut relations = vec![self.ident("a relation symbol")?];
            while self.eat(&Tok::Comma) {
                relations.push(self.ident("a relation symbol")?);
            }
            self.expect(Tok::RBracket, "']'")?;
            self.bound.push(y.to_string());
            let ts = self.terms();
            self.bound.pop();
            let mut ts = ts?;
            if ts.pop() != Some(Term::var(y)) {
                return Ok(None);
            }
            if ts.iter().any(|t| t.is_var(y)) {
                return Ok(None);
            }
            return Ok(Some(Guard::Acc { relations, sources: ts }));
        }
        if !name.starts_with(|c: char| c.is_ascii_uppercase()) || !matches!(self.peek_at(1), Tok::LParen) {
            return Ok(None);
        }
        self.bump();
        self.bound.push(y.to_string());
        let ts = self.terms();
        self.bound.pop();
        let Ok(ts) = ts else { return Ok(None) };
        match ts.as_slice() {
            [t, u] if u.is_var(y) && !t.is_var(y) => Ok(Some(Guard::forward(name, t.clone()))),
            [u, t] if u.is_var(y) && !t.is_var(y) => Ok(Some(Guard::backward(name, t.clone()))),
            _ => Ok(None),
        }
    }
}

/// Whether `body` under an unguarded quantifier on `y` would print like a
/// guarded one.
pub(crate) fn looks_guarded(body: &Fo, y: &str) -> bool {
    let guard_like = |a: &Fo| match a {
        Fo::Rel(r, ts) if r.starts_with(|c: char| c.is_ascii_uppercase()) => match ts.as_slice() {
            [a, b] => (b.is_var(y) && !a.is_var(y)) || (a.is_var(y) && !b.is_var(y)),
            _ => false,
        },
        _ => false,
    };
    match body {
        Fo::And(a, _) | Fo::Implies(a, _) => guard_like(a),
        _ => false,
    }
}

pub fn parse_hybrid(text: &str) -> Result<Hybrid, LogicError> {
    parse_hybrid_with(text, ParseOptions::closed())
}

pub fn parse_hybrid_with(text: &str, opts: ParseOptions) -> Result<Hybrid, LogicError> {
    let mut p = Parser::new(text, opts)?;
    let f = p.hybrid()?;
    p.finish()?;
    Ok(f)
}

/// Parses a first-order formula; free variables are allowed.
pub fn parse_fo(text: &str) -> Result<Fo, LogicError> {
    parse_fo_with(text, ParseOptions::open())
}

pub fn parse_fo_with(text: &str, opts: ParseOptions) -> Result<Fo, LogicError> {
    let mut p = Parser::new(text, opts)?;
    let f = p.fo()?;
    p.finish()?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binder_and_diamond() {
        let f = parse_hybrid("down x. dia x").unwrap();
        assert_eq!(f, Hybrid::down("x", Hybrid::dia(Hybrid::var("x"))));
    }

    #[test]
    fn bounded_exists() {
        let f = parse_fo("exists y (E(c1,y) & P(y))").unwrap();
        assert_eq!(
            f,
            Fo::bexists(
                "y",
                Guard::forward("E", Term::Const(1)),
                Fo::Rel("P".into(), vec![Term::var("y")])
            )
        );
    }

    #[test]
    fn unbound_variable_is_a_scope_error() {
        assert!(matches!(parse_hybrid("dia x"), Err(LogicError::Scope { pos: 4, .. })));
        assert!(parse_hybrid_with("dia x", ParseOptions::open()).is_ok());
        assert!(matches!(
            parse_fo_with("P(x)", ParseOptions::closed()),
            Err(LogicError::Scope { .. })
        ));
    }

    #[test]
    fn nominal_range() {
        let opts = ParseOptions::closed().with_constants(1);
        assert!(parse_hybrid_with("@c1 p", opts).is_ok());
        assert!(matches!(
            parse_hybrid_with("@c2 p", opts),
            Err(LogicError::NominalRange { index: 2, max: 1, .. })
        ));
        assert!(matches!(
            parse_fo_with("E(c1,c3)", opts),
            Err(LogicError::NominalRange { index: 3, .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert!(matches!(parse_hybrid("p &"), Err(LogicError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_hybrid("p $ q"), Err(LogicError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_fo("exists>=0 y (E(c1,y) & true)"), Err(LogicError::Syntax { .. })));
    }

    #[test]
    fn round_trips() {
        for text in [
            "down x. dia (p & dia x)",
            "@c1 box !p1 | diainv (p & Q)",
            "(p | q) & !(p & q)",
            "p & q | r2",
            "down x. boxinv @x dia x",
        ] {
            let f = parse_hybrid_with(text, ParseOptions::open()).unwrap();
            assert_eq!(f.to_string(), text);
            assert_eq!(parse_hybrid_with(&f.to_string(), ParseOptions::open()).unwrap(), f);
        }
        for text in [
            "exists y (E(c1,y) & P(y))",
            "forall y (E(c1,y) -> exists z (E(z,y) & !(z = c1)))",
            "exists>=3 y (E(c1,y) & true)",
            "exists y P(y) & forall z (P(z) | Q(z))",
            "exists y ((E(c1,y) & P(y)))",
            "exists>=2 y (acc[E,F](c1,x,y) & P(y) & Q(y))",
            "A(x) -> B(x) -> C(x)",
            "(A(x) -> B(x)) -> C(x)",
        ] {
            let f = parse_fo(text).unwrap();
            assert_eq!(f.to_string(), text);
            assert_eq!(parse_fo(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn guard_shape_requires_distinct_source() {
        let f = parse_fo("exists y (E(y,y) & P(y))").unwrap();
        assert!(matches!(f, Fo::Exists(..)));
        let g = parse_fo("exists y (E(y,c1) & P(y))").unwrap();
        assert_eq!(
            g,
            Fo::bexists("y", Guard::backward("E", Term::Const(1)), Fo::Rel("P".into(), vec![Term::var("y")]))
        );
    }
}
