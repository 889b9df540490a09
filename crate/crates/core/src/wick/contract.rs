//! Gaussian moments of trace products by recursive Wick contraction.
//!
//! The first letter of the first trace is paired with every other letter.
//! Pairing within one trace splits it, `Tr(M A M B) -> Tr A Tr B`; pairing
//! across traces merges them, `Tr(M A) Tr(M B) -> Tr(A B)`; an empty trace
//! is `N`. States are canonical multisets of cyclic words, memoized.

use std::collections::HashMap;

use super::model::GaussianModel;
use crate::invariant::canonical_rotation;
use crate::series::{LaurentPolyN, Rational, Ring};

/// Multiset of nonempty canonical words over 0-based colors, sorted.
type State = Vec<Vec<u8>>;

#[derive(Clone, Debug)]
pub struct Contractor {
    c_inv: Vec<Vec<Rational>>,
    memo: HashMap<State, LaurentPolyN>,
}

impl Contractor {
    pub fn new(model: &GaussianModel) -> Self {
        Contractor { c_inv: model.c_inv_matrix().to_vec(), memo: HashMap::new() }
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// `<Π Tr(w_i)>` with un-normalized traces and 1-based colors, as a
    /// Laurent polynomial in `N`. The factor `t^E` (E = half the number of
    /// letters) is left implicit.
    pub fn moment(&mut self, traces: &[Vec<u8>]) -> LaurentPolyN {
        let zero_based: Vec<Vec<u8>> = traces.iter().map(|w| w.iter().map(|c| c - 1).collect()).collect();
        let letters: usize = zero_based.iter().map(Vec::len).sum();
        if letters % 2 == 1 {
            return LaurentPolyN::zero();
        }
        let (state, empties) = normalize(zero_based);
        self.eval(state).shift(empties)
    }

    fn eval(&mut self, state: State) -> LaurentPolyN {
        if state.is_empty() {
            return LaurentPolyN::one();
        }
        if let Some(v) = self.memo.get(&state) {
            return v.clone();
        }
        let first = &state[0];
        let a = first[0] as usize;
        let rest = &first[1..];
        let mut children: HashMap<(State, i64), Rational> = HashMap::new();
        // split
        for (i, &b) in rest.iter().enumerate() {
            let w = &self.c_inv[a][b as usize];
            if w.is_zero() {
                continue;
            }
            let mut next: Vec<Vec<u8>> = state[1..].to_vec();
            next.push(rest[..i].to_vec());
            next.push(rest[i + 1..].to_vec());
            let (s, e) = normalize(next);
            *children.entry((s, e)).or_insert_with(Rational::zero) += w;
        }
        // merge
        for m in 1..state.len() {
            if m > 1 && state[m] == state[m - 1] {
                continue;
            }
            let mult = state[m..].iter().take_while(|w| **w == state[m]).count();
            let other = &state[m];
            for (i, &b) in other.iter().enumerate() {
                let w = &self.c_inv[a][b as usize];
                if w.is_zero() {
                    continue;
                }
                let mut merged = rest.to_vec();
                merged.extend_from_slice(&other[i + 1..]);
                merged.extend_from_slice(&other[..i]);
                let mut next: Vec<Vec<u8>> = Vec::with_capacity(state.len() - 1);
                for (j, x) in state.iter().enumerate() {
                    if j != 0 && j != m {
                        next.push(x.clone());
                    }
                }
                next.push(merged);
                let (s, e) = normalize(next);
                *children.entry((s, e)).or_insert_with(Rational::zero) += w * Rational::from_integer(mult.into());
            }
        }
        let mut total = LaurentPolyN::zero();
        for ((s, e), w) in children {
            if w.is_zero() {
                continue;
            }
            let v = self.eval(s);
            total.add_assign(&v.shift(e - 1).scale(&w));
        }
        self.memo.insert(state, total.clone());
        total
    }
}

/// Drop empty words (counting them) and canonicalize the rest.
fn normalize(words: Vec<Vec<u8>>) -> (State, i64) {
    let mut empties = 0;
    let mut out: State = Vec::with_capacity(words.len());
    for w in words {
        if w.is_empty() {
            empties += 1;
        } else {
            out.push(canonical_rotation(&w));
        }
    }
    out.sort();
    (out, empties)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{int, rat};

    fn n_poly(terms: &[(i64, Rational)]) -> LaurentPolyN {
        LaurentPolyN::from_terms(terms.iter().cloned())
    }

    #[test]
    fn two_point_function() {
        let model = GaussianModel::scalar(int(3)).unwrap();
        let mut c = Contractor::new(&model);
        // <Tr M²> = N² t/(N c)
        assert_eq!(c.moment(&[vec![1, 1]]), n_poly(&[(1, rat(1, 3))]));
    }

    #[test]
    fn quartic_star() {
        let model = GaussianModel::scalar(int(1)).unwrap();
        let mut c = Contractor::new(&model);
        // <Tr M⁴> = 2N³ + N  (times t²/N²)
        assert_eq!(c.moment(&[vec![1; 4]]), n_poly(&[(1, int(2)), (-1, int(1))]));
        assert!(c.moment(&[vec![1; 3]]).is_zero());
    }

    #[test]
    fn disconnected_product() {
        let model = GaussianModel::scalar(int(1)).unwrap();
        let mut c = Contractor::new(&model);
        // <Tr M Tr M> = N · t/N
        assert_eq!(c.moment(&[vec![1], vec![1]]), n_poly(&[(0, int(1))]));
        // <(Tr M²)²> = N² + 2
        assert_eq!(c.moment(&[vec![1, 1], vec![1, 1]]), n_poly(&[(2, int(1)), (0, int(2))]));
    }
}
