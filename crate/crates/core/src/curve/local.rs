//! Local expansions around points of the uniformizing sphere.
//!
//! Coefficients live in `GSeries`, truncated series in the uniformizing
//! parameter γ. A point of the sphere near a marked point `a` is an
//! `EpsSeries` `a + δ(ε)`; functions of the remaining variables are kept as
//! partial-fraction tensors [`Pf`], so residues become coefficient reads.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::series::rational::binomial;
use crate::series::{LaurentPoly, Rational, Ring, TruncatedSeries};

pub type GSeries = TruncatedSeries<Rational>;
pub type EpsSeries = TruncatedSeries<GSeries>;
pub type LocalSeries = TruncatedSeries<Pf>;
/// Laurent polynomial in `z` with γ-series coefficients.
pub type ZPoly = LaurentPoly<GSeries>;

/// Per-slot basis element: `(point, n)` stands for `1/(w − a_point)^n`; `n = 0`
/// is the constant 1 and is stored as `(0, 0)`.
pub type Key = Vec<(u8, u32)>;

fn trim(mut k: Key) -> Key {
    while k.last() == Some(&(0, 0)) {
        k.pop();
    }
    k
}

fn slot(k: &Key, i: usize) -> (u8, u32) {
    k.get(i).copied().unwrap_or((0, 0))
}

/// Partial-fraction tensor: `Σ_key c_key Π_slot 1/(w_slot − a)^n`.
#[derive(Clone, PartialEq, Default)]
pub struct Pf {
    terms: BTreeMap<Key, GSeries>,
}

impl Pf {
    pub fn constant(c: GSeries) -> Self {
        let mut p = Pf::default();
        p.add_term(Vec::new(), c);
        p
    }

    /// `c / (w_slot − a_point)^n`.
    pub fn basis(slot_idx: usize, point: u8, n: u32, c: GSeries) -> Self {
        let mut key = vec![(0, 0); slot_idx + 1];
        key[slot_idx] = if n == 0 { (0, 0) } else { (point, n) };
        let mut p = Pf::default();
        p.add_term(trim(key), c);
        p
    }

    pub fn add_term(&mut self, key: Key, c: GSeries) {
        let key = trim(key);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = v.add(&c);
                if Ring::is_zero(v) {
                    self.terms.remove(&key);
                }
            }
            None => {
                if !Ring::is_zero(&c) {
                    self.terms.insert(key, c);
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &GSeries)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant part (all slots at the basis element 1).
    pub fn constant_term(&self) -> GSeries {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(GSeries::zero)
    }

    pub fn num_slots(&self) -> usize {
        self.terms.keys().map(|k| k.len()).max().unwrap_or(0)
    }

    pub fn map(&self, f: impl Fn(&GSeries) -> GSeries) -> Self {
        let mut out = Pf::default();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c));
        }
        out
    }

    /// Move slot `i` to slot `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut out = Pf::default();
        for (k, c) in &self.terms {
            let width = perm.iter().copied().max().map_or(0, |m| m + 1);
            let mut nk = vec![(0, 0); width.max(k.len())];
            for (i, e) in k.iter().enumerate() {
                if *e != (0, 0) {
                    nk[perm[i]] = *e;
                }
            }
            out.add_term(nk, c.clone());
        }
        out
    }

    /// Largest pole order appearing in any slot.
    pub fn max_pole(&self) -> u32 {
        self.terms.keys().flat_map(|k| k.iter().map(|e| e.1)).max().unwrap_or(0)
    }

    /// Evaluate every slot at a rational value (`values[i]` for slot `i`),
    /// given the marked points.
    pub fn eval(&self, points: &[GSeries], values: &[Rational]) -> Result<GSeries> {
        let mut acc = GSeries::zero();
        for (k, c) in &self.terms {
            let mut f = c.clone();
            for (i, &(pt, n)) in k.iter().enumerate() {
                if n == 0 {
                    continue;
                }
                let d = GSeries::constant(values[i].clone()).sub(&points[pt as usize]);
                let inv = d.inv().ok_or_else(|| Error::Precondition("evaluation at a pole".into()))?;
                f = f.mul(&inv.pow(n));
            }
            acc = acc.add(&f);
        }
        Ok(acc)
    }
}

impl std::fmt::Debug for Pf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl Ring for Pf {
    fn zero() -> Self {
        Pf::default()
    }
    fn one() -> Self {
        Pf::constant(GSeries::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    /// Products are only formed between tensors whose slots carry poles at
    /// the same point (or are disjoint); that is all the residue calculus
    /// here needs.
    fn mul(&self, other: &Self) -> Self {
        let mut out = Pf::default();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let width = ka.len().max(kb.len());
                let mut key = Vec::with_capacity(width);
                for i in 0..width {
                    let (pa, na) = slot(ka, i);
                    let (pb, nb) = slot(kb, i);
                    key.push(match (na, nb) {
                        (0, _) => (pb, nb),
                        (_, 0) => (pa, na),
                        _ => {
                            assert_eq!(pa, pb, "poles at distinct points in one slot");
                            (pa, na + nb)
                        }
                    });
                }
                out.add_term(key, ca.mul(cb));
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

pub fn lift(s: &EpsSeries) -> LocalSeries {
    s.map_coeffs(|c| Pf::constant(c.clone()))
}

/// The ε-series of a rational constant.
pub fn eps_const(r: &Rational) -> EpsSeries {
    EpsSeries::constant(GSeries::constant(r.clone()))
}

pub fn eps_gconst(g: &GSeries) -> EpsSeries {
    EpsSeries::constant(g.clone())
}

/// Residue: coefficient of `ε^{-1}`.
pub fn residue(f: &LocalSeries) -> Result<Pf> {
    f.get(-1)
        .ok_or_else(|| Error::Precision(format!("local expansion known only to ε^{}", f.order())))
}

pub fn residue_scalar(f: &EpsSeries) -> Result<GSeries> {
    f.get(-1)
        .ok_or_else(|| Error::Precision(format!("local expansion known only to ε^{}", f.order())))
}

/// Inverse of an ε-series, as an error when the leading coefficient is not
/// invertible.
pub fn eps_inv(s: &EpsSeries) -> Result<EpsSeries> {
    s.inv().ok_or_else(|| Error::Precision("no invertible leading term in a local series".into()))
}

/// A point `a_idx + δ(ε)` near the marked point `idx`.
pub struct LocalPoint<'a> {
    pub idx: u8,
    pub delta: EpsSeries,
    points: &'a [GSeries],
    order: i64,
    cache: RefCell<HashMap<u8, Vec<EpsSeries>>>,
}

impl<'a> LocalPoint<'a> {
    /// `delta` must have positive ε-valuation; expansions are carried to
    /// absolute ε-order `order`.
    pub fn new(idx: u8, delta: EpsSeries, points: &'a [GSeries], order: i64) -> Self {
        LocalPoint { idx, delta: delta.truncate(order), points, order, cache: RefCell::new(HashMap::new()) }
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// The point itself as an ε-series.
    pub fn value(&self) -> EpsSeries {
        eps_gconst(&self.points[self.idx as usize]).add(&self.delta)
    }

    /// `1/(P − a_b)^n`.
    pub fn basis(&self, b: u8, n: u32) -> Result<EpsSeries> {
        if n == 0 {
            return Ok(EpsSeries::one());
        }
        let mut cache = self.cache.borrow_mut();
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(b) {
            let base = if b == self.idx {
                self.delta.clone()
            } else {
                eps_gconst(&self.points[self.idx as usize].sub(&self.points[b as usize])).add(&self.delta)
            };
            e.insert(vec![EpsSeries::one(), eps_inv(&base)?]);
        }
        let powers = cache.get_mut(&b).expect("inserted");
        while powers.len() <= n as usize {
            let next = powers.last().unwrap().mul(&powers[1]);
            powers.push(next);
        }
        Ok(powers[n as usize].clone())
    }

    /// `1/(w_slot − P)^m` as a local series with partial-fraction
    /// coefficients in the slot variable.
    pub fn coupling(&self, slot_idx: usize, m: u32) -> LocalSeries {
        let mut acc = LocalSeries::zero_to(self.order);
        let mut dk = EpsSeries::one();
        let v = self.delta.valuation().max(1);
        let mut k = 0u32;
        while (k as i64) * v < self.order {
            let b = Rational::from_integer(binomial((m + k - 1) as u64, k as u64));
            let term = dk.map_coeffs(|c| Pf::basis(slot_idx, self.idx, m + k, c.scale(&b)));
            acc = acc.add(&term);
            dk = dk.mul(&self.delta).truncate(self.order);
            k += 1;
        }
        acc
    }

    /// Evaluate a Laurent polynomial in `z` at the point.
    pub fn eval(&self, p: &ZPoly) -> Result<EpsSeries> {
        let z = self.value();
        let mut acc = EpsSeries::zero_to(self.order);
        let (Some(lo), Some(hi)) = (p.min_power(), p.max_power()) else {
            return Ok(acc);
        };
        let mut zp = EpsSeries::one();
        for k in 0..=hi.max(0) {
            if k > 0 {
                zp = zp.mul(&z).truncate(self.order);
            }
            if k >= lo && k <= hi {
                acc = acc.add(&zp.mul_coeff(&p.coeff(k)));
            }
        }
        if lo < 0 {
            let zi = eps_inv(&z)?.truncate(self.order);
            let mut zp = EpsSeries::one();
            for k in 1..=(-lo) {
                zp = zp.mul(&zi).truncate(self.order);
                if -k <= hi {
                    acc = acc.add(&zp.mul_coeff(&p.coeff(-k)));
                }
            }
        }
        Ok(acc.truncate(self.order))
    }
}

/// Substitute local points into some slots of a tensor; the other slots are
/// kept (and may be relabelled afterwards).
pub fn expand(f: &Pf, subs: &[(usize, &LocalPoint)]) -> Result<LocalSeries> {
    let order = subs.iter().map(|(_, p)| p.order()).min().unwrap_or(crate::series::EXACT);
    let mut grouped: BTreeMap<Key, EpsSeries> = BTreeMap::new();
    for (k, c) in f.terms() {
        let mut s = eps_gconst(c);
        let mut rest = k.clone();
        for (sl, pt) in subs {
            let (b, n) = slot(k, *sl);
            if n > 0 {
                s = s.mul(&pt.basis(b, n)?);
                rest[*sl] = (0, 0);
            }
        }
        let rest = trim(rest);
        let e = grouped.entry(rest).or_insert_with(|| EpsSeries::zero_to(order));
        *e = e.add(&s);
    }
    let mut acc = LocalSeries::zero_to(order);
    for (rest, s) in grouped {
        let term = s.map_coeffs(|c| {
            let mut p = Pf::default();
            p.add_term(rest.clone(), c.clone());
            p
        });
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Run `f` with growing local orders until the residues it extracts are
/// determined.
pub fn with_local_order<T>(start: i64, mut f: impl FnMut(i64) -> Result<T>) -> Result<T> {
    let mut order = start;
    loop {
        match f(order) {
            Err(Error::Precision(msg)) if msg.starts_with("local expansion") => {
                if order > 96 {
                    return Err(Error::Precision(msg));
                }
                order += 6;
            }
            other => return other,
        }
    }
}

/// `log(1 + u)` of an ε-series with `u(0) = 0`.
pub fn eps_log_one_plus(u: &EpsSeries) -> Result<EpsSeries> {
    EpsSeries::one().add(u).log()
}

/// Declare the first `n` ε-coefficients of `s` to vanish identically. They
/// must be zero to the available γ-precision; this records a structural zero
/// (a function vanishing at a branch point) so the series can be inverted.
pub fn vanishing(s: &EpsSeries, n: i64) -> Result<EpsSeries> {
    let mut coeffs = Vec::new();
    for k in s.start()..s.end() {
        let c = s.get(k).unwrap_or_else(GSeries::zero);
        if k < n {
            if !c.is_known_zero() {
                return Err(Error::Consistency(format!("local coefficient ε^{k} does not vanish")));
            }
            continue;
        }
        coeffs.push(c);
    }
    Ok(EpsSeries::laurent(n.max(s.start()), coeffs, s.order()))
}

/// Replace a constant term equal to 1 up to γ-precision by an exact 1.
pub fn exact_unit(s: &EpsSeries) -> Result<EpsSeries> {
    let c0 = s.get(0).ok_or_else(|| Error::Precision("constant term unknown".into()))?;
    if s.valuation() < 0 || !c0.sub(&GSeries::one()).is_known_zero() {
        return Err(Error::Consistency("local series is not a unit with constant term 1".into()));
    }
    let mut coeffs = vec![GSeries::one()];
    for k in 1..s.end() {
        coeffs.push(s.get(k).unwrap_or_else(GSeries::zero));
    }
    Ok(EpsSeries::laurent(0, coeffs, s.order()))
}
