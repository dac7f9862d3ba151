use super::invariance::{check_invariance, Notion};
use super::CharacterizationError;
use crate::logic::{characteristic_formula, eval_fo, Assignment, Fo};
use crate::structures::Structure;

/// Type computations beyond this many expansion steps are refused.
pub const SYNTHESIS_BUDGET: f64 = 2e4;

/// A bounded-fragment sentence agreeing with the input on a finite corpus.
/// Agreement is only ever established relative to that corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Synthesis {
    pub formula: Fo,
    /// `q·2^max(k,q)`.
    pub rank: usize,
    /// Corpus indices of the models whose characteristic formulas form the
    /// disjunction.
    pub models: Vec<usize>,
    /// The output agrees with the input on every corpus structure.
    pub agrees_on_corpus: bool,
}

fn expansion_cost(s: &Structure, rank: usize) -> f64 {
    let m = s.basepoints().len();
    let out = s
        .transition_successors()
        .iter()
        .map(|x| x.len())
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let t = s.signature().transitions().len().max(1) as f64;
    (0..rank).map(|i| (m + i).max(1) as f64 * out * t).product()
}

/// Disjunction of the rank-`q·2^max(k,q)` characteristic formulas of the
/// corpus models of `f`, where `q` is the quantifier rank of `f`; `f` must be
/// invariant under `k`-generated substructures on the corpus.
pub fn synthesize_bounded_equivalent(f: &Fo, k: usize, corpus: &[Structure]) -> Result<Synthesis, CharacterizationError> {
    let q = f.quantifier_rank();
    let report = check_invariance(f, Notion::Generated(k), corpus)?;
    if !report.invariant() {
        return Err(CharacterizationError::NotInvariant(report.counterexamples.len()));
    }
    let exponent = k.max(q);
    let rank = 1usize
        .checked_shl(exponent as u32)
        .and_then(|p| p.checked_mul(q))
        .filter(|_| exponent < 32)
        .ok_or(CharacterizationError::Budget { rank: usize::MAX })?;
    let env = Assignment::new();
    let mut models = Vec::new();
    let mut disjuncts: Vec<Fo> = Vec::new();
    for (i, s) in corpus.iter().enumerate() {
        if eval_fo(f, s, &env)? {
            if expansion_cost(s, rank) > SYNTHESIS_BUDGET {
                return Err(CharacterizationError::Budget { rank });
            }
            models.push(i);
            let chi = characteristic_formula(s, rank);
            if !disjuncts.contains(&chi) {
                disjuncts.push(chi);
            }
        }
    }
    let formula = disjuncts.into_iter().reduce(Fo::or).unwrap_or(Fo::False);
    let mut agrees_on_corpus = true;
    for s in corpus {
        if eval_fo(&formula, s, &env)? != eval_fo(f, s, &env)? {
            agrees_on_corpus = false;
        }
    }
    Ok(Synthesis {
        formula,
        rank,
        models,
        agrees_on_corpus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::logic::{gaifman_relativize, parse_fo, Term};

    #[test]
    fn bounded_input_is_reproduced_on_the_corpus() {
        let f = parse_fo("exists y (E(c1,y) & P(y))").unwrap();
        let corpus = fixtures::unimodal_family();
        let s = synthesize_bounded_equivalent(&f, 1, &corpus).unwrap();
        assert_eq!(s.rank, 2);
        assert!(s.agrees_on_corpus);
        assert!(s.formula.is_bounded(corpus[0].signature()));
    }

    #[test]
    fn single_model_gives_its_characteristic_formula() {
        let f = parse_fo("exists y (E(c1,y) & P(y))").unwrap();
        let s = fixtures::graph(&["a", "b"], &[("a", "b")], &["b"]);
        let out = synthesize_bounded_equivalent(&f, 1, &[s.clone()]).unwrap();
        assert_eq!(out.formula, characteristic_formula(&s, 2));
    }

    #[test]
    fn relativized_sentence() {
        let corpus = fixtures::unimodal_family();
        let sig = corpus[0].signature().clone();
        let f = parse_fo("exists y (E(c1,y) & P(y))").unwrap();
        // radius 0 keeps the rank at 1; wider radii need rank-8 types
        let local = gaifman_relativize(&f, &[Term::Const(1)], 0, &sig);
        let out = synthesize_bounded_equivalent(&local, 1, &corpus).unwrap();
        assert!(out.agrees_on_corpus);
        let wide = gaifman_relativize(&f, &[Term::Const(1)], 1, &sig);
        assert!(matches!(
            synthesize_bounded_equivalent(&wide, 1, &corpus),
            Err(CharacterizationError::Budget { rank: 8 })
        ));
    }

    #[test]
    fn non_invariant_input_is_rejected() {
        let f = parse_fo("exists y P(y)").unwrap();
        let corpus = [fixtures::graph(&["a", "b"], &[], &["b"])];
        assert!(matches!(
            synthesize_bounded_equivalent(&f, 1, &corpus),
            Err(CharacterizationError::NotInvariant(1))
        ));
    }
}
