use super::{ComonadError, ComonadStructure, Play};
use crate::structures::{is_homomorphism, Structure};

/// The counit: last element of a play.
pub fn counit(c: &ComonadStructure, play: &[usize]) -> Result<usize, ComonadError> {
    c.index_of(play)
        .map(|_| *play.last().expect("plays are non-empty"))
        .ok_or_else(|| ComonadError::PlayNotInCarrier(c.play_name(play)))
}

/// `h*(s) = ⟨h(s₁), h(s₁s₂), …, h(s)⟩` for a coKleisli map `h` given by
/// carrier index.
pub fn cokleisli_extension(h: &[usize], c: &ComonadStructure) -> Result<Vec<Play>, ComonadError> {
    if h.len() != c.len() {
        return Err(ComonadError::NotTotal {
            expected: c.len(),
            found: h.len(),
        });
    }
    Ok((0..c.len())
        .map(|s| c.prefixes(s).into_iter().map(|p| h[p]).collect())
        .collect())
}

/// `δ = id*`: the sequence of prefixes of a play.
pub fn comultiplication(c: &ComonadStructure, play: &[usize]) -> Result<Vec<Play>, ComonadError> {
    let s = c
        .index_of(play)
        .ok_or_else(|| ComonadError::PlayNotInCarrier(c.play_name(play)))?;
    Ok(c.prefixes(s).into_iter().map(|p| c.plays()[p].clone()).collect())
}

/// `G f = (f ∘ ε)*` for a homomorphism `f` of base structures, as a map of
/// carrier indices; `None` where the image play is missing from `cb`.
pub fn lift_homomorphism(f: &[usize], ca: &ComonadStructure, cb: &ComonadStructure) -> Vec<Option<usize>> {
    ca.plays()
        .iter()
        .map(|p| {
            let image: Play = p.iter().map(|&x| f[x]).collect();
            cb.index_of(&image)
        })
        .collect()
}

/// Outcome of checking the Kleisli-form comonad equations for given
/// `h : G A → B` and `g : G B → C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport {
    pub h_homomorphism: bool,
    pub g_homomorphism: bool,
    /// `h*` lands in the carrier over `B` and is a homomorphism there.
    pub h_star_homomorphism: bool,
    /// `ε ∘ h* = h`
    pub counit_after_extension: bool,
    /// `ε* = id`
    pub extension_of_counit: bool,
    /// `(g ∘ h*)* = g* ∘ h*`
    pub associativity: bool,
}

impl LawReport {
    pub fn laws_hold(&self) -> bool {
        self.counit_after_extension && self.extension_of_counit && self.associativity
    }

    pub fn all_pass(&self) -> bool {
        self.laws_hold() && self.h_homomorphism && self.g_homomorphism && self.h_star_homomorphism
    }
}

pub fn check_comonad_laws(
    ca: &ComonadStructure,
    cb: &ComonadStructure,
    cc: &ComonadStructure,
    h: &[usize],
    g: &[usize],
) -> Result<LawReport, ComonadError> {
    check_comonad_laws_with(ca, cb, cc, h, g, cokleisli_extension)
}

/// As [`check_comonad_laws`], with the coKleisli extension supplied by the
/// caller (used to confirm that corrupted extensions are caught).
pub fn check_comonad_laws_with(
    ca: &ComonadStructure,
    cb: &ComonadStructure,
    cc: &ComonadStructure,
    h: &[usize],
    g: &[usize],
    extend: impl Fn(&[usize], &ComonadStructure) -> Result<Vec<Play>, ComonadError>,
) -> Result<LawReport, ComonadError> {
    if ca.kind() != cb.kind() || cb.kind() != cc.kind() || ca.resource() != cb.resource() || cb.resource() != cc.resource()
    {
        return Err(ComonadError::Incompatible);
    }
    let codomain = |c: &ComonadStructure| -> Structure {
        if c.with_i() {
            c.base().with_identity_relation()
        } else {
            c.base().clone()
        }
    };
    let hom = |f: &[usize], dom: &ComonadStructure, cod: &ComonadStructure| {
        is_homomorphism(f, dom.carrier(), &codomain(cod)).unwrap_or(false)
    };
    let h_homomorphism = hom(h, ca, cb);
    let g_homomorphism = hom(g, cb, cc);

    let h_star = extend(h, ca)?;
    let counit_after_extension = h_star
        .iter()
        .zip(h)
        .all(|(s, &y)| s.last() == Some(&y));

    let eps: Vec<usize> = ca.plays().iter().map(|p| *p.last().unwrap()).collect();
    let extension_of_counit = extend(&eps, ca)? == ca.plays();

    let h_star_idx: Option<Vec<usize>> = h_star.iter().map(|s| cb.index_of(s)).collect();
    let h_star_homomorphism = match &h_star_idx {
        Some(idx) => is_homomorphism(idx, ca.carrier(), cb.carrier()).unwrap_or(false),
        None => false,
    };
    let associativity = match &h_star_idx {
        Some(idx) => {
            let g_after: Vec<usize> = idx.iter().map(|&i| g[i]).collect();
            let lhs = extend(&g_after, ca)?;
            let g_star = extend(g, cb)?;
            lhs.iter().zip(idx).all(|(l, &i)| *l == g_star[i])
        }
        None => false,
    };
    Ok(LawReport {
        h_homomorphism,
        g_homomorphism,
        h_star_homomorphism,
        counit_after_extension,
        extension_of_counit,
        associativity,
    })
}
