//! The inductively defined bounded back-and-forth relations, computed by
//! direct recursion on structures expanded with new constants.

use std::collections::HashMap;

use super::GameError;
use crate::logic::atomic_type;
use crate::structures::Structure;

struct Rank<'a> {
    a: &'a Structure,
    b: &'a Structure,
    memo: HashMap<(Vec<usize>, Vec<usize>, usize), bool>,
}

impl Rank<'_> {
    /// `(A, xs) ≡_k (B, ys)`, the tuples holding all constants so far.
    fn related(&mut self, xs: &mut Vec<usize>, ys: &mut Vec<usize>, k: usize) -> bool {
        // ≡_0: the same atomic sentences about the constants.
        if atomic_type(self.a, xs) != atomic_type(self.b, ys) {
            return false;
        }
        if k == 0 {
            return true;
        }
        let key = (xs.clone(), ys.clone(), k);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let mut ok = true;
        'outer: for c in 0..xs.len() {
            for e in self.a.signature().transitions() {
                let (ca, cb) = (xs[c], ys[c]);
                let succ_a: Vec<usize> = (0..self.a.len()).filter(|&x| self.a.holds(e, &[ca, x])).collect();
                let succ_b: Vec<usize> = (0..self.b.len()).filter(|&y| self.b.holds(e, &[cb, y])).collect();
                // forth
                for &x in &succ_a {
                    if !succ_b.iter().any(|&y| self.extended(xs, ys, x, y, k - 1)) {
                        ok = false;
                        break 'outer;
                    }
                }
                // back
                for &y in &succ_b {
                    if !succ_a.iter().any(|&x| self.extended(xs, ys, x, y, k - 1)) {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        self.memo.insert(key, ok);
        ok
    }

    fn extended(&mut self, xs: &mut Vec<usize>, ys: &mut Vec<usize>, x: usize, y: usize, k: usize) -> bool {
        xs.push(x);
        ys.push(y);
        let r = self.related(xs, ys, k);
        xs.pop();
        ys.pop();
        r
    }
}

/// `(A, a⃗) ≡_k (B, b⃗)` for the bounded back-and-forth relations.
pub fn back_and_forth_rank(a: &Structure, b: &Structure, k: usize) -> Result<bool, GameError> {
    if !a.signature().same_vocabulary(b.signature()) || a.basepoints().len() != b.basepoints().len() {
        return Err(GameError::SignatureMismatch);
    }
    if a.basepoints().is_empty() {
        return Err(GameError::Variant("the back-and-forth relations need at least one constant".into()));
    }
    let mut r = Rank {
        a,
        b,
        memo: HashMap::new(),
    };
    Ok(r.related(&mut a.basepoints().to_vec(), &mut b.basepoints().to_vec(), k))
}
