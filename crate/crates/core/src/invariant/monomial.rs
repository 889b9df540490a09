use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Matrix color, `1..=p`.
pub type Color = u8;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word(Vec<Color>);

impl Word {
    pub fn new(letters: Vec<Color>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Precondition("empty word".into()));
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[Color] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The lexicographically smallest rotation.
    pub fn canonical(&self) -> Word {
        Word(canonical_rotation(&self.0))
    }

    pub fn rotation_symmetry(&self) -> usize {
        rotation_symmetry(&self.0)
    }
}

/// Lexicographically smallest rotation of a cyclic word (naive; words are short).
pub fn canonical_rotation(letters: &[Color]) -> Vec<Color> {
    let n = letters.len();
    if n == 0 {
        return Vec::new();
    }
    let mut best = 0;
    for s in 1..n {
        for i in 0..n {
            let a = letters[(s + i) % n];
            let b = letters[(best + i) % n];
            if a != b {
                if a < b {
                    best = s;
                }
                break;
            }
        }
    }
    letters[best..].iter().chain(&letters[..best]).copied().collect()
}

/// Number of rotations fixing the cyclic word.
pub fn rotation_symmetry(letters: &[Color]) -> usize {
    let n = letters.len();
    (1..=n)
        .find(|&s| n.is_multiple_of(s) && (0..n).all(|i| letters[i] == letters[(i + s) % n]))
        .map_or(1, |period| n / period)
}

/// A product of traces of words, stored canonically: every word is its
/// minimal rotation and the words are sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct InvariantMonomial {
    words: Vec<Word>,
}

impl InvariantMonomial {
    /// Canonical form of a multiset of words over colors `1..=p`.
    pub fn canonicalize(words: &[Vec<Color>], p: usize) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::Precondition("a monomial needs at least one trace".into()));
        }
        let mut out = Vec::with_capacity(words.len());
        for w in words {
            if let Some(&c) = w.iter().find(|&&c| c == 0 || c as usize > p) {
                return Err(Error::Precondition(format!("color {c} outside 1..={p}")));
            }
            out.push(Word::new(w.clone())?.canonical());
        }
        out.sort();
        Ok(InvariantMonomial { words: out })
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn num_traces(&self) -> usize {
        self.words.len()
    }

    pub fn degree(&self) -> usize {
        self.words.iter().map(Word::len).sum()
    }

    /// Number of traces minus one.
    pub fn crossing_number(&self) -> usize {
        self.words.len() - 1
    }

    /// Largest color used.
    pub fn max_color(&self) -> Color {
        self.words.iter().flat_map(|w| w.0.iter().copied()).max().unwrap_or(0)
    }

    /// Order of the group of relabelings fixing the monomial: permutations of
    /// equal words combined with rotations fixing each word.
    pub fn symmetry_factor(&self) -> BigUint {
        let mut mult: BTreeMap<&Word, u32> = BTreeMap::new();
        for w in &self.words {
            *mult.entry(w).or_default() += 1;
        }
        let mut s = BigUint::one();
        for (w, m) in mult {
            for i in 1..=m {
                s *= i;
            }
            s *= BigUint::from(w.rotation_symmetry()).pow(m);
        }
        s
    }

    /// Count of each color among the letters.
    pub fn color_counts(&self, p: usize) -> Vec<usize> {
        let mut c = vec![0; p + 1];
        for w in &self.words {
            for &l in &w.0 {
                c[l as usize] += 1;
            }
        }
        c
    }
}

impl fmt::Display for InvariantMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .words
            .iter()
            .map(|w| {
                let l: Vec<String> = w.0.iter().map(|c| c.to_string()).collect();
                format!("tr({})", l.join(","))
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> InvariantMonomial {
        InvariantMonomial::canonicalize(&[vec![1, 1, 2], vec![3, 3, 3], vec![2, 2, 4, 1, 1]], 4).unwrap()
    }

    #[test]
    fn rotation_classes() {
        let a = InvariantMonomial::canonicalize(&[vec![1, 2]], 2).unwrap();
        let b = InvariantMonomial::canonicalize(&[vec![2, 1]], 2).unwrap();
        assert_eq!(a, b);
        let c = InvariantMonomial::canonicalize(&[vec![1], vec![2]], 2).unwrap();
        let d = InvariantMonomial::canonicalize(&[vec![2], vec![1]], 2).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn two_triangles_and_a_pentagon() {
        let q = fig1();
        assert_eq!(q.degree(), 11);
        assert_eq!(q.crossing_number(), 2);
        assert_eq!(q.symmetry_factor(), BigUint::from(3u32));
    }

    #[test]
    fn power_symmetry_factors() {
        let sq = InvariantMonomial::canonicalize(&[vec![1; 4]], 1).unwrap();
        assert_eq!(sq.symmetry_factor(), BigUint::from(4u32));
        let pair = InvariantMonomial::canonicalize(&[vec![1; 4], vec![1; 4]], 1).unwrap();
        assert_eq!(pair.symmetry_factor(), BigUint::from(32u32));
        assert_eq!(pair.degree(), 8);
        let single = InvariantMonomial::canonicalize(&[vec![1]], 1).unwrap();
        assert_eq!(single.degree(), 1);
    }

    #[test]
    fn invalid_words_rejected() {
        assert!(InvariantMonomial::canonicalize(&[vec![]], 1).is_err());
        assert!(InvariantMonomial::canonicalize(&[vec![1, 3]], 2).is_err());
        assert!(InvariantMonomial::canonicalize(&[], 2).is_err());
    }

    #[test]
    fn periodic_words() {
        assert_eq!(rotation_symmetry(&[1, 2, 1, 2]), 2);
        assert_eq!(rotation_symmetry(&[1, 2, 3]), 1);
        assert_eq!(rotation_symmetry(&[2, 2, 2]), 3);
        assert_eq!(canonical_rotation(&[2, 1, 1, 2, 1]), vec![1, 1, 2, 1, 2]);
    }
}
