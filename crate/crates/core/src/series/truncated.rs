//! Truncated (Laurent) series in one variable with explicit absolute
//! precision: a value `Σ c_i t^i + O(t^order)`.
//!
//! Precision propagates the way it does for p-adic numbers: a sum is known
//! to the smaller of the two orders; a product `a·b` is known modulo
//! `t^min(order(a) + val(b), order(b) + val(a))`, which is the minimum of the
//! two orders whenever both factors are units.

use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, parse_rational, Rational};
use super::ring::{Field, Ring};
use crate::error::{Error, Result};

/// Order used for values that are known exactly (polynomials, constants).
pub const EXACT: i64 = i64::MAX / 4;

fn prec_add(a: i64, b: i64) -> i64 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        (a + b).min(EXACT)
    }
}

#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<C = Rational> {
    start: i64,
    coeffs: Vec<C>,
    order: i64,
}

impl<C: Ring> TruncatedSeries<C> {
    /// Laurent series `Σ coeffs[i] t^(start+i) + O(t^order)`.
    pub fn laurent(start: i64, coeffs: Vec<C>, order: i64) -> Self {
        let mut s = TruncatedSeries { start, coeffs, order: order.min(EXACT) };
        s.normalize();
        s
    }

    /// Power series with coefficients of `t^0, t^1, ...`.
    pub fn new(coeffs: Vec<C>, order: i64) -> Self {
        Self::laurent(0, coeffs, order)
    }

    /// Exactly known polynomial.
    pub fn polynomial(coeffs: Vec<C>) -> Self {
        Self::laurent(0, coeffs, EXACT)
    }

    pub fn constant(c: C) -> Self {
        Self::polynomial(vec![c])
    }

    /// `c · t^k`, exact.
    pub fn monomial(c: C, k: i64) -> Self {
        Self::laurent(k, vec![c], EXACT)
    }

    /// The series variable `t`, exact.
    pub fn var() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn zero_to(order: i64) -> Self {
        Self::laurent(0, Vec::new(), order)
    }

    fn normalize(&mut self) {
        let keep = (self.order - self.start).max(0);
        if (self.coeffs.len() as i64) > keep {
            self.coeffs.truncate(keep as usize);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.start = 0;
        }
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order >= EXACT
    }

    /// Lowest power with a nonzero coefficient, or the order for a series
    /// with no known nonzero coefficient.
    pub fn valuation(&self) -> i64 {
        if self.coeffs.is_empty() {
            self.order
        } else {
            self.start
        }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Highest power carrying a stored coefficient plus one.
    pub fn end(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^k`. Returns zero below the valuation; panics when
    /// `k` is at or beyond the truncation order.
    pub fn coeff(&self, k: i64) -> C {
        assert!(k < self.order, "coefficient t^{k} requested beyond order {}", self.order);
        self.get(k).unwrap_or_else(C::zero)
    }

    /// Coefficient of `t^k`, or `None` when it is not determined.
    pub fn get(&self, k: i64) -> Option<C> {
        if k >= self.order {
            return None;
        }
        if k < self.start || k >= self.end() {
            return Some(C::zero());
        }
        Some(self.coeffs[(k - self.start) as usize].clone())
    }

    /// `(power, coefficient)` pairs of the nonzero stored terms.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.start + i as i64, c))
    }

    pub fn truncate(&self, order: i64) -> Self {
        Self::laurent(self.start, self.coeffs.clone(), self.order.min(order))
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self::laurent(self.start + k, self.coeffs.clone(), prec_add(self.order, k))
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> TruncatedSeries<D> {
        TruncatedSeries::laurent(self.start, self.coeffs.iter().map(f).collect(), self.order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        if self.coeffs.is_empty() {
            return other.truncate(order);
        }
        if other.coeffs.is_empty() {
            return self.truncate(order);
        }
        let lo = self.start.min(other.start);
        let hi = self.end().max(other.end()).min(order);
        let mut coeffs = Vec::with_capacity((hi - lo).max(0) as usize);
        for k in lo..hi {
            let a = self.get(k).unwrap_or_else(C::zero);
            let b = other.get(k).unwrap_or_else(C::zero);
            coeffs.push(a.add(&b));
        }
        Self::laurent(lo, coeffs, order)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map_coeffs(|c| c.scale(r))
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        self.map_coeffs(|x| x.mul(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = prec_add(self.order, other.valuation()).min(prec_add(other.order, self.valuation()));
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero_to(order);
        }
        let start = self.start + other.start;
        let len = (self.coeffs.len() + other.coeffs.len() - 1) as i64;
        let len = len.min((order - start).max(0)) as usize;
        let mut coeffs = vec![C::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j].add_assign(&a.mul(b));
                }
            }
        }
        Self::laurent(start, coeffs, order)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(C::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal derivative `d/dt`.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&Rational::from_integer((self.start + i as i64).into())))
            .collect();
        Self::laurent(self.start - 1, coeffs, prec_add(self.order, -1))
    }

    /// The unit part `a / t^val(a)` together with `val(a)`.
    pub fn split_valuation(&self) -> Option<(i64, Self)> {
        if self.coeffs.is_empty() {
            return None;
        }
        let v = self.start;
        Some((v, self.shift(-v)))
    }
}

impl<C: Field> TruncatedSeries<C> {
    /// Multiplicative inverse. Needs a known nonzero leading coefficient; an
    /// exact non-monomial input has no finite inverse and gives `None`.
    pub fn inv(&self) -> Option<Self> {
        let (v, unit) = self.split_valuation()?;
        if unit.coeffs.len() == 1 {
            let c = unit.coeffs[0].inv()?;
            let order = if self.is_exact() { EXACT } else { self.order - 2 * v };
            return Some(Self::laurent(-v, vec![c], order));
        }
        if self.is_exact() {
            return None;
        }
        let rel = self.order - v;
        let u = &unit.coeffs;
        let a0inv = u[0].inv()?;
        let mut out: Vec<C> = Vec::with_capacity(rel.max(0) as usize);
        for n in 0..rel.max(0) as usize {
            if n == 0 {
                out.push(a0inv.clone());
                continue;
            }
            let mut acc = C::zero();
            for k in 1..=n.min(u.len() - 1) {
                acc.add_assign(&u[k].mul(&out[n - k]));
            }
            out.push(acc.mul(&a0inv).neg());
        }
        Some(Self::laurent(-v, out, self.order - 2 * v))
    }

    /// Inverse of an exactly known value computed to the given absolute order.
    pub fn inv_to(&self, order: i64) -> Option<Self> {
        if self.is_exact() {
            let v = self.valuation();
            self.truncate((order + 2 * v).max(v + 1)).inv().map(|s| s.truncate(order))
        } else {
            self.inv().map(|s| s.truncate(order))
        }
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.mul(&other.inv()?))
    }

    /// Reciprocal of a unit power series to the order of `self`.
    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.div(other)
            .ok_or_else(|| Error::Precision("division by a series without a known invertible leading term".into()))
    }
}

impl TruncatedSeries<Rational> {
    /// Embed into any coefficient ring.
    pub fn lift<D: Ring>(&self) -> TruncatedSeries<D> {
        self.map_coeffs(D::from_rational)
    }
}

impl<C: Ring> TruncatedSeries<C> {
    /// Formal logarithm of a power series with constant term 1, by the
    /// recurrence `n L_n = n a_n - Σ_{k=1}^{n-1} k L_k a_{n-k}`.
    pub fn log(&self) -> Result<Self> {
        if self.valuation() < 0 || self.get(0) != Some(C::one()) {
            return Err(Error::Precondition("log needs a power series with constant term 1".into()));
        }
        if self.is_exact() {
            if self.coeffs.len() == 1 {
                return Ok(Self::zero_to(EXACT));
            }
            return Err(Error::Precondition("log of an exact non-constant series needs a truncation order".into()));
        }
        let n = self.order.max(0) as usize;
        let a: Vec<C> = (0..n as i64).map(|k| self.coeff(k)).collect();
        let mut l = vec![C::zero(); n];
        for m in 1..n {
            let mut acc = a[m].scale(&Rational::from_integer((m as i64).into()));
            for k in 1..m {
                acc = acc.sub(&l[k].mul(&a[m - k]).scale(&Rational::from_integer((k as i64).into())));
            }
            l[m] = acc.scale(&Rational::new(1.into(), (m as i64).into()));
        }
        Ok(Self::new(l, self.order))
    }

    /// Formal exponential of a power series with zero constant term, by
    /// `n E_n = Σ_{k=1}^{n} k a_k E_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        if self.valuation() < 1 {
            return Err(Error::Precondition("exp needs a power series with zero constant term".into()));
        }
        if self.is_exact() {
            return Err(Error::Precondition("exp of an exact series needs a truncation order".into()));
        }
        let n = self.order.max(0) as usize;
        let a: Vec<C> = (0..n as i64).map(|k| self.coeff(k)).collect();
        let mut e = vec![C::zero(); n];
        if n > 0 {
            e[0] = C::one();
        }
        for m in 1..n {
            let mut acc = C::zero();
            for k in 1..=m {
                if !a[k].is_zero() {
                    acc.add_assign(&a[k].mul(&e[m - k]).scale(&Rational::from_integer((k as i64).into())));
                }
            }
            e[m] = acc.scale(&Rational::new(1.into(), (m as i64).into()));
        }
        Ok(Self::new(e, self.order))
    }

    /// Inverse of a power series whose constant term is exactly one; needs
    /// no division in the coefficient ring.
    pub fn inv_unit(&self) -> Result<Self> {
        if self.valuation() < 0 || self.get(0) != Some(C::one()) {
            return Err(Error::Precondition("inverse needs a power series with constant term 1".into()));
        }
        if self.is_exact() {
            if self.coeffs.len() == 1 {
                return Ok(Self::one());
            }
            return Err(Error::Precondition("inverse of an exact non-constant series needs a truncation order".into()));
        }
        let n = self.order.max(0) as usize;
        let a: Vec<C> = (0..n as i64).map(|k| self.coeff(k)).collect();
        let mut out: Vec<C> = Vec::with_capacity(n);
        for m in 0..n {
            if m == 0 {
                out.push(C::one());
                continue;
            }
            let mut acc = C::zero();
            for k in 1..=m {
                if !a[k].is_zero() {
                    acc.add_assign(&a[k].mul(&out[m - k]));
                }
            }
            out.push(acc.neg());
        }
        Ok(Self::new(out, self.order))
    }

    /// Evaluate `Σ c_k u^k` for a power series `u` with positive valuation
    /// (Horner scheme; negative powers use `inv_u`).
    pub fn compose_with(&self, u: &Self, inv_u: Option<&Self>) -> Result<Self> {
        if u.valuation() < 1 {
            return Err(Error::Precondition("composition needs an inner series with positive valuation".into()));
        }
        if !self.is_exact() && self.order < 0 {
            return Err(Error::Precondition("composition with negative truncation order".into()));
        }
        let order = if self.is_exact() { EXACT } else { self.order.saturating_mul(u.valuation()).min(EXACT) };
        let mut acc = Self::zero_to(EXACT);
        for k in (0..self.end()).rev() {
            acc = acc.mul(u).add(&Self::constant(self.get(k).unwrap_or_else(C::zero)));
        }
        acc = acc.truncate(order);
        if self.start < 0 {
            let inv_u = inv_u.ok_or_else(|| Error::Precondition("negative powers need the inverse of the inner series".into()))?;
            let mut p = Self::constant(C::one());
            for k in 1..=(-self.start) {
                p = p.mul(inv_u);
                let c = self.get(-k).unwrap_or_else(C::zero);
                if !c.is_zero() {
                    acc = acc.add(&p.mul_coeff(&c));
                }
            }
        }
        Ok(acc)
    }
}

impl<C: Ring> Ring for TruncatedSeries<C> {
    fn zero() -> Self {
        Self::zero_to(EXACT)
    }
    fn one() -> Self {
        Self::constant(C::one())
    }
    /// Exact zero only: `O(t^n)` is not zero as a coefficient, so nested
    /// series keep its precision.
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.is_exact()
    }
    fn add(&self, other: &Self) -> Self {
        TruncatedSeries::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        TruncatedSeries::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        TruncatedSeries::mul(self, other)
    }
    fn neg(&self) -> Self {
        TruncatedSeries::neg(self)
    }
    fn scale(&self, r: &Rational) -> Self {
        TruncatedSeries::scale(self, r)
    }
}

impl<C: Field> Field for TruncatedSeries<C> {
    fn inv(&self) -> Option<Self> {
        TruncatedSeries::inv(self)
    }
}

impl<C: Ring> fmt::Debug for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})t^{k}")?;
        }
        if first {
            write!(f, "0")?;
        }
        if !self.is_exact() {
            write!(f, " + O(t^{})", self.order)?;
        }
        Ok(())
    }
}

impl fmt::Display for TruncatedSeries<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            let s = format_rational(c);
            if first {
                write!(f, "{s}")?;
            } else if let Some(rest) = s.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {s}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "*t")?,
                _ => write!(f, "*t^{k}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        if !self.is_exact() {
            write!(f, " + O(t^{})", self.order)?;
        }
        Ok(())
    }
}

/// Textual serialization: `{"order": 4, "coeffs": ["0", "-1/2", "0", "-9/8"]}`.
/// A nonzero `start` is written for Laurent series; `order` is null for exact values.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SeriesRecord {
    #[serde(default, skip_serializing_if = "is_zero_i64")]
    pub start: i64,
    pub order: Option<i64>,
    pub coeffs: Vec<String>,
}

fn is_zero_i64(v: &i64) -> bool {
    *v == 0
}

impl TruncatedSeries<Rational> {
    pub fn to_record(&self) -> SeriesRecord {
        let start = self.start.min(0);
        let end = if self.is_exact() { self.end().max(start + 1) } else { self.order };
        let coeffs = (start..end).map(|k| format_rational(&self.get(k).unwrap_or_default())).collect();
        SeriesRecord { start, order: (!self.is_exact()).then_some(self.order), coeffs }
    }

    pub fn from_record(rec: &SeriesRecord) -> Result<Self> {
        let coeffs = rec.coeffs.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>()?;
        Ok(Self::laurent(rec.start, coeffs, rec.order.unwrap_or(EXACT)))
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.start == 0 && self.coeffs[0].is_one()
    }
}
