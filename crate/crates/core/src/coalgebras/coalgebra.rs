use super::cover::TreeCover;
use super::{CoverError, MAX_ENUMERATION_SIZE};
use crate::comonads::{build_comonad, ComonadKind, ComonadStructure, Play};
use crate::structures::{is_homomorphism, ExtNat, Structure};

/// A structure map `α: A → C(A)`, one play per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coalgebra {
    pub target: ComonadStructure,
    pub alpha: Vec<Play>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalgebraReport {
    /// Every α(a) is a play of the target carrier.
    pub in_carrier: bool,
    pub homomorphism: bool,
    /// `ε(α(a)) = a`.
    pub counit: bool,
    /// The i-th prefix of α(a) is α of its i-th element.
    pub comultiplication: bool,
}

impl CoalgebraReport {
    pub fn all_pass(&self) -> bool {
        self.in_carrier && self.homomorphism && self.counit && self.comultiplication
    }
}

pub fn check_coalgebra_laws(c: &Coalgebra) -> CoalgebraReport {
    let base = c.target.base();
    let n = base.len();
    let shaped = c.alpha.len() == n;
    let idx: Option<Vec<usize>> = c.alpha.iter().map(|p| c.target.index_of(p)).collect();
    let in_carrier = shaped && idx.is_some();
    let homomorphism = match &idx {
        Some(idx) if shaped => is_homomorphism(idx, base, c.target.carrier()).unwrap_or(false),
        _ => false,
    };
    let counit = shaped && c.alpha.iter().enumerate().all(|(a, p)| p.last() == Some(&a));
    let comultiplication = shaped
        && c.alpha.iter().all(|p| {
            p.iter()
                .enumerate()
                .all(|(i, &x)| x < n && c.alpha[x].as_slice() == &p[..=i])
        });
    CoalgebraReport {
        in_carrier,
        homomorphism,
        counit,
        comultiplication,
    }
}

/// `α(a)` is the branch of `a`, read from the root.
pub fn cover_to_coalgebra(s: &Structure, t: &TreeCover, kind: ComonadKind, k: usize) -> Result<Coalgebra, CoverError> {
    if let Some(v) = t.violation(s, kind, Some(k)) {
        return Err(CoverError::NotGenerated(v.describe(s)));
    }
    let target = build_comonad(s, kind, k, false)?;
    let alpha = (0..s.len()).map(|x| t.branch(x).expect("acyclic")).collect();
    let c = Coalgebra { target, alpha };
    debug_assert!(check_coalgebra_laws(&c).all_pass());
    Ok(c)
}

/// The parent of `a` is the penultimate element of `α(a)`.
pub fn coalgebra_to_cover(c: &Coalgebra) -> Result<TreeCover, CoverError> {
    let report = check_coalgebra_laws(c);
    if !report.all_pass() {
        return Err(CoverError::LawsFail(format!("{report:?}")));
    }
    let parent = c
        .alpha
        .iter()
        .map(|p| (p.len() >= 2).then(|| p[p.len() - 2]))
        .collect();
    Ok(TreeCover { parent })
}

/// Every coalgebra `A → C_k(A)`, found by searching over plays ending in each
/// element; the counit and comultiplication laws prune the search and the
/// homomorphism property is checked on complete maps.
pub fn enumerate_coalgebras(s: &Structure, kind: ComonadKind, k: usize) -> Result<Vec<Coalgebra>, CoverError> {
    search(s, kind, k, usize::MAX)
}

fn search(s: &Structure, kind: ComonadKind, k: usize, limit: usize) -> Result<Vec<Coalgebra>, CoverError> {
    let n = s.len();
    if n > MAX_ENUMERATION_SIZE {
        return Err(CoverError::TooLarge {
            size: n,
            limit: MAX_ENUMERATION_SIZE,
        });
    }
    let target = build_comonad(s, kind, k, false)?;
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, p) in target.plays().iter().enumerate() {
        candidates[*p.last().expect("non-empty")].push(i);
    }
    let mut chosen: Vec<Option<usize>> = vec![None; n];
    let mut found = Vec::new();
    fn consistent(target: &ComonadStructure, chosen: &[Option<usize>], x: usize, cand: usize) -> bool {
        let p = &target.plays()[cand];
        // prefixes of the new play agree with earlier choices
        for (i, &y) in p.iter().enumerate() {
            if y == x && i + 1 != p.len() {
                return false;
            }
            if let Some(q) = chosen[y] {
                if target.plays()[q].as_slice() != &p[..=i] {
                    return false;
                }
            }
        }
        // earlier plays passing through x agree with the new play
        chosen.iter().flatten().all(|&q| {
            let q = &target.plays()[q];
            q.iter()
                .enumerate()
                .all(|(i, &y)| y != x || &q[..=i] == p.as_slice())
        })
    }
    fn go(
        x: usize,
        s: &Structure,
        target: &ComonadStructure,
        candidates: &[Vec<usize>],
        chosen: &mut Vec<Option<usize>>,
        found: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        if found.len() >= limit {
            return;
        }
        if x == chosen.len() {
            let idx: Vec<usize> = chosen.iter().map(|c| c.expect("complete")).collect();
            if is_homomorphism(&idx, s, target.carrier()).unwrap_or(false) {
                found.push(idx);
            }
            return;
        }
        for &c in &candidates[x] {
            if consistent(target, chosen, x, c) {
                chosen[x] = Some(c);
                go(x + 1, s, target, candidates, chosen, found, limit);
                chosen[x] = None;
            }
        }
    }
    go(0, s, &target, &candidates, &mut chosen, &mut found, limit);
    Ok(found
        .into_iter()
        .map(|idx| Coalgebra {
            alpha: idx.iter().map(|&i| target.plays()[i].clone()).collect(),
            target: target.clone(),
        })
        .collect())
}

/// Least `k ≥ 1` admitting a coalgebra `A → C_k(A)`; infinite when none does.
/// Under node-counting heights this is `max(1, depth − m)`.
pub fn coalgebra_number(s: &Structure, kind: ComonadKind) -> Result<ExtNat, CoverError> {
    let m = s.basepoints().len();
    // a coalgebra's plays never repeat an element, so k = n − m suffices
    let top = s.len().saturating_sub(m).max(1);
    for k in 1..=top {
        if !search(s, kind, k, 1)?.is_empty() {
            return Ok(ExtNat::Finite(k));
        }
    }
    Ok(ExtNat::Infinite)
}
