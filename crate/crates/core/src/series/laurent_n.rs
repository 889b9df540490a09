//! Laurent polynomials in one variable with coefficients in any ring. Used
//! for polynomials in the matrix size `N` and in the uniformizing coordinate
//! `z` of spectral curves.

use std::collections::BTreeMap;
use std::fmt;

use super::rational::{format_rational, Rational};
use super::ring::Ring;

#[derive(Clone, PartialEq, Default)]
pub struct LaurentPoly<C> {
    terms: BTreeMap<i64, C>,
}

/// Laurent polynomial in `N`.
pub type LaurentPolyN<C = Rational> = LaurentPoly<C>;

impl<C: Ring> LaurentPoly<C> {
    pub fn new() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::new();
        for (k, c) in terms {
            p.add_term(k, &c);
        }
        p
    }

    pub fn monomial(c: C, k: i64) -> Self {
        Self::from_terms([(k, c)])
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    pub fn add_term(&mut self, k: i64, c: &C) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(C::zero);
        entry.add_assign(c);
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn coeff(&self, k: i64) -> C {
        self.terms.get(&k).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &C)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn min_power(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        LaurentPoly::from_terms(self.terms.iter().map(|(k, c)| (*k, f(c))))
    }

    /// Multiply by the variable to the power `k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        self.map(|x| x.mul(c))
    }

    /// Formal derivative in the variable.
    pub fn derivative(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (k - 1, c.scale(&Rational::from_integer((*k).into())))))
    }

    /// Substitute `var -> 1/var`.
    pub fn invert_var(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    /// Evaluate at a ring element, given its inverse for negative powers.
    pub fn eval(&self, x: &C, x_inv: Option<&C>) -> C {
        let mut acc = C::zero();
        for (k, c) in &self.terms {
            let p = if *k >= 0 {
                x.pow(*k as u32)
            } else {
                x_inv.expect("negative power needs an inverse").pow((-k) as u32)
            };
            acc.add_assign(&c.mul(&p));
        }
        acc
    }
}

impl<C: Ring> Ring for LaurentPoly<C> {
    fn zero() -> Self {
        Self::new()
    }
    fn one() -> Self {
        Self::constant(C::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }
    fn add_assign(&mut self, other: &Self) {
        for (k, c) in &other.terms {
            self.add_term(*k, c);
        }
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a + b, &x.mul(y));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }
    fn scale(&self, r: &Rational) -> Self {
        self.map(|c| c.scale(r))
    }
}

impl<C: Ring> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(k, c)| format!("({c:?})N^{k}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for LaurentPoly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(k, c)| match k {
                0 => format_rational(c),
                _ => format!("{}*N^{k}", format_rational(c)),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
