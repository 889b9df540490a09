use std::collections::BTreeMap;
use std::fmt;

use crate::invariant::{canonical_rotation, CouplingPoly};
use crate::series::{format_rational, Ring};

/// Letter of a noncommutative word: a color `1..=p`, or [`FROZEN`] for an
/// occurrence of the differentiated color that is held fixed.
pub type Letter = u8;

/// Placeholder letter used while a single occurrence is active.
pub const FROZEN: Letter = 0;

/// `N^n_power Π Tr(traces) · open`, where `open` is an un-traced word
/// (absent when the term is a scalar).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NCTerm {
    pub n_power: i64,
    pub traces: Vec<Vec<Letter>>,
    pub open: Option<Vec<Letter>>,
}

impl NCTerm {
    pub fn scalar(n_power: i64, traces: Vec<Vec<Letter>>) -> Self {
        NCTerm { n_power, traces, open: None }.normalized()
    }

    pub fn word(open: Vec<Letter>) -> Self {
        NCTerm { n_power: 0, traces: Vec::new(), open: Some(open) }
    }

    /// Empty traces become powers of `N`; traces are rotated to canonical
    /// form and sorted.
    pub fn normalized(mut self) -> Self {
        let mut traces = Vec::with_capacity(self.traces.len());
        for t in self.traces.drain(..) {
            if t.is_empty() {
                self.n_power += 1;
            } else {
                traces.push(canonical_rotation(&t));
            }
        }
        traces.sort();
        self.traces = traces;
        self
    }

    pub fn has_frozen(&self) -> bool {
        self.traces.iter().flatten().chain(self.open.iter().flatten()).any(|&l| l == FROZEN)
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.traces.iter().flatten().chain(self.open.iter().flatten()).filter(|&&l| l == letter).count()
    }
}

/// Linear combination of [`NCTerm`]s.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct NCExpression {
    terms: BTreeMap<NCTerm, CouplingPoly>,
}

impl NCExpression {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(term: NCTerm, coeff: CouplingPoly) -> Self {
        let mut e = Self::new();
        e.add(term, &coeff);
        e
    }

    /// An open word with coefficient one.
    pub fn word(letters: Vec<Letter>) -> Self {
        Self::single(NCTerm::word(letters), CouplingPoly::one())
    }

    pub fn add(&mut self, term: NCTerm, coeff: &CouplingPoly) {
        if coeff.is_zero() {
            return;
        }
        let term = term.normalized();
        let e = self.terms.entry(term.clone()).or_insert_with(CouplingPoly::zero);
        e.add_assign(coeff);
        if e.is_zero() {
            self.terms.remove(&term);
        }
    }

    pub fn add_expr(&mut self, other: &NCExpression) {
        for (t, c) in &other.terms {
            self.add(t.clone(), c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NCTerm, &CouplingPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every term is a product of closed traces.
    pub fn is_closed(&self) -> bool {
        self.terms.keys().all(|t| t.open.is_none())
    }
}

fn fmt_word(w: &[Letter]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|&l| if l == FROZEN { "m".to_string() } else { format!("M{l}") }).collect::<Vec<_>>().join("")
}

impl fmt::Display for NCExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (t, c) in &self.terms {
            let mut s = format!("({})", c.fmt_with(&[], format_rational));
            if t.n_power != 0 {
                s.push_str(&format!("*N^{}", t.n_power));
            }
            for tr in &t.traces {
                s.push_str(&format!("*Tr({})", fmt_word(tr)));
            }
            if let Some(o) = &t.open {
                s.push_str(&format!("*{}", fmt_word(o)));
            }
            parts.push(s);
        }
        write!(f, "{}", parts.join(" + "))
    }
}
