use std::fmt;

use crate::logic::{eval_fo, Assignment, Fo, LogicError};
use crate::structures::{ball_part, disjoint_union, reachable_part, ExtNat, Structure};

/// Which structural transformation a sentence should be insensitive to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Notion {
    /// Restriction to the part reachable in at most `k` transition steps.
    Generated(usize),
    /// Disjoint union with another structure; every corpus member with the
    /// same vocabulary serves as a partner.
    Disjoint,
    /// Restriction to the Gaifman ball of radius `k`.
    Ball(usize),
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Notion::Generated(k) => write!(f, "generated:{k}"),
            Notion::Disjoint => f.write_str("disjoint"),
            Notion::Ball(k) => write!(f, "ball:{k}"),
        }
    }
}

impl std::str::FromStr for Notion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bound = |v: &str| v.parse::<usize>().map_err(|_| format!("bad radius '{v}'"));
        match s.split_once(':') {
            None if s == "disjoint" => Ok(Notion::Disjoint),
            Some(("generated", k)) => Ok(Notion::Generated(bound(k)?)),
            Some(("ball", k)) => Ok(Notion::Ball(bound(k)?)),
            _ => Err(format!("unknown notion '{s}' (expected generated:K, disjoint or ball:K)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// Corpus index of the structure.
    pub structure: usize,
    /// Corpus index of the disjoint-union partner.
    pub partner: Option<usize>,
    pub original: bool,
    pub transformed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub notion: Notion,
    /// Number of (structure, transformed structure) comparisons.
    pub comparisons: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl InvarianceReport {
    pub fn invariant(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn holds(f: &Fo, s: &Structure) -> Result<bool, LogicError> {
    eval_fo(f, s, &Assignment::new())
}

/// Compares the truth value of the sentence `f` before and after the
/// transformation on every corpus structure.
pub fn check_invariance(f: &Fo, notion: Notion, corpus: &[Structure]) -> Result<InvarianceReport, LogicError> {
    let mut report = InvarianceReport {
        notion,
        comparisons: 0,
        counterexamples: Vec::new(),
    };
    for (i, s) in corpus.iter().enumerate() {
        let original = holds(f, s)?;
        let mut compare = |t: &Structure, partner: Option<usize>| -> Result<(), LogicError> {
            let transformed = holds(f, t)?;
            report.comparisons += 1;
            if transformed != original {
                report.counterexamples.push(Counterexample {
                    structure: i,
                    partner,
                    original,
                    transformed,
                });
            }
            Ok(())
        };
        match notion {
            Notion::Generated(k) => compare(&reachable_part(s, ExtNat::Finite(k)), None)?,
            Notion::Ball(k) => compare(&ball_part(s, k), None)?,
            Notion::Disjoint => {
                for (j, p) in corpus.iter().enumerate() {
                    if let Ok(u) = disjoint_union(s, p) {
                        compare(&u, Some(j))?;
                    }
                }
            }
        }
    }
    Ok(report)
}
