//! Sparse multivariate polynomials. Variables are addressed by index; names
//! live with whoever owns the polynomial.

use std::collections::BTreeMap;
use std::fmt;

use super::rational::{format_rational, Rational};
use super::ring::Ring;

/// Exponent vector with trailing zeros trimmed, so equal monomials compare equal.
pub type Exponents = Vec<u32>;

fn trim(mut e: Exponents) -> Exponents {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MPoly<C = Rational> {
    terms: BTreeMap<Exponents, C>,
}

impl<C: Ring> MPoly<C> {
    pub fn new() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        let mut p = Self::new();
        p.add_term(Vec::new(), &c);
        p
    }

    /// The variable with index `i`.
    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        let mut p = Self::new();
        p.add_term(e, &C::one());
        p
    }

    pub fn term(exponents: Exponents, c: C) -> Self {
        let mut p = Self::new();
        p.add_term(exponents, &c);
        p
    }

    pub fn add_term(&mut self, exponents: Exponents, c: &C) {
        if c.is_zero() {
            return;
        }
        let e = trim(exponents);
        let entry = self.terms.entry(e.clone()).or_insert_with(C::zero);
        entry.add_assign(c);
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[u32]) -> C {
        self.terms.get(&trim(exponents.to_vec())).cloned().unwrap_or_else(C::zero)
    }

    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.is_empty())
    }

    /// Constant term.
    pub fn constant_term(&self) -> C {
        self.coeff(&[])
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e.get(i).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::new();
        for (e, c) in &self.terms {
            let d = e.get(i).copied().unwrap_or(0);
            if d == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, &c.scale(&Rational::from_integer(d.into())));
        }
        out
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        let mut out = MPoly::new();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &f(c));
        }
        out
    }

    /// Evaluate with `values[i]` substituted for variable `i`, embedding
    /// coefficients through `lift`.
    pub fn eval<S: Ring>(&self, values: &[S], lift: impl Fn(&C) -> S) -> S {
        let mut powers: Vec<Vec<S>> = vec![vec![S::one()]; values.len()];
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut m = lift(c);
            for (i, &d) in e.iter().enumerate() {
                if d == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= d as usize {
                    let next = cache.last().unwrap().mul(&values[i]);
                    cache.push(next);
                }
                m = m.mul(&cache[d as usize]);
            }
            acc.add_assign(&m);
        }
        acc
    }

    /// Substitute values for a subset of variables, keeping the rest symbolic.
    pub fn substitute(&self, assignment: &BTreeMap<usize, C>) -> Self {
        let mut out = Self::new();
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut e2 = e.clone();
            for (i, d) in e.iter().enumerate() {
                if let Some(v) = assignment.get(&i) {
                    coeff = coeff.mul(&v.pow(*d));
                    e2[i] = 0;
                }
            }
            out.add_term(e2, &coeff);
        }
        out
    }

    pub fn fmt_with(&self, names: &[String], coeff: impl Fn(&C) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mut factors = Vec::new();
            for (i, &d) in e.iter().enumerate() {
                let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                match d {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{d}")),
                }
            }
            let cs = coeff(c);
            if factors.is_empty() {
                parts.push(cs);
            } else if cs == "1" {
                parts.push(factors.join("*"));
            } else if cs == "-1" {
                parts.push(format!("-{}", factors.join("*")));
            } else {
                parts.push(format!("{cs}*{}", factors.join("*")));
            }
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl MPoly<Rational> {
    pub fn display(&self, names: &[String]) -> String {
        self.fmt_with(names, format_rational)
    }
}

impl<C: Ring> Ring for MPoly<C> {
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
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c);
        }
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let n = e1.len().max(e2.len());
                let e: Exponents = (0..n)
                    .map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(e, &c1.mul(c2));
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

impl<C: Ring> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&[], |c| format!("({c:?})")))
    }
}
