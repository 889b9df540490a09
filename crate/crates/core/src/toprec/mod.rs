//! Topological recursion on genus-zero spectral curves: correlators
//! `W_k^(g)` as partial fractions in the uniformizing coordinate, and the
//! free energies `F^(g)`, `g ≥ 2`.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::curve::local::{
    eps_gconst, eps_inv, eps_log_one_plus, exact_unit, expand, lift, residue, vanishing, with_local_order, EpsSeries,
    GSeries, LocalPoint, LocalSeries, Pf, ZPoly,
};
use crate::curve::triple::{involution_delta, zhukovsky_points};
use crate::curve::{solve_2mm_curve, RationalFunctionZ, GammaChart, OneMatrixModel, RationalCurve2MM, Series, TwoMatrixModel, ZhukovskyCurve};
use crate::error::{Error, Result};
use crate::series::{int, rat, Rational, Ring, SeriesRecord};

/// Slots above every argument slot, used while substituting local points.
const SPARE: usize = 32;

/// Branch points `a_i` (zeros of `x'`), as γ-series, with the rule for the
/// conjugate point `z̄`.
#[derive(Clone, Debug)]
pub struct BranchPointSet {
    points: Vec<GSeries>,
    involution: Option<Vec<Rational>>,
}

impl BranchPointSet {
    /// `±1` with the global involution `z̄ = 1/z`.
    pub fn zhukovsky() -> Self {
        BranchPointSet { points: zhukovsky_points(), involution: Some(vec![int(1), int(-1)]) }
    }

    /// Branch points of a general rational curve; `z̄` is found locally.
    pub fn local(points: Vec<GSeries>) -> Self {
        BranchPointSet { points, involution: None }
    }

    pub fn points(&self) -> &[GSeries] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `z̄ = 1/z` when the involution is global.
    pub fn conjugate_global(&self, z: &Rational) -> Option<Rational> {
        if self.involution.is_some() && !Ring::is_zero(z) {
            Some(z.recip())
        } else {
            None
        }
    }

    /// `z̄ − a_i` as a series in `ε = z − a_i`, solving `x(z̄) = x(z)` with
    /// `z̄ ≠ z`, to absolute order `order`.
    pub fn conjugate_point(&self, i: usize, x: &ZPoly, order: i64) -> Result<EpsSeries> {
        if let Some(a) = &self.involution {
            return involution_delta(&a[i], order);
        }
        let pt = LocalPoint::new(i as u8, EpsSeries::var(), &self.points, order + 2);
        let xs = pt.eval(x)?;
        let x0 = xs.get(0).ok_or_else(|| Error::Precision("x at a branch point".into()))?;
        let d = vanishing(&xs.sub(&eps_gconst(&x0)), 2)?.shift(-2);
        let d0 = d.get(0).unwrap_or_else(GSeries::zero);
        let d0_inv = d0
            .inv()
            .ok_or_else(|| Error::Unsupported("higher-order branch point (x'' vanishes)".into()))?;
        let r = exact_unit(&d.mul_coeff(&d0_inv))?;
        let w = EpsSeries::var().mul(&r.log()?.scale(&rat(1, 2)).exp()?).truncate(order);
        let target = w.neg();
        let dw = w.derivative();
        let mut sigma = EpsSeries::var().neg().truncate(order);
        let mut prec = 2;
        while prec < 2 * order {
            let f = w.compose_with(&sigma, None)?.sub(&target);
            let fp = dw.compose_with(&sigma, None)?;
            sigma = sigma.sub(&f.mul(&eps_inv(&fp)?)).truncate(order);
            prec *= 2;
        }
        let pb = LocalPoint::new(i as u8, sigma.clone(), &self.points, order);
        let residual = pb.eval(x)?.sub(&xs).truncate(order);
        if residual.terms().any(|(_, c)| !c.is_known_zero()) {
            return Err(Error::Consistency("conjugate point does not satisfy x(z̄) = x(z)".into()));
        }
        Ok(sigma)
    }
}

/// A spectral curve in the form the recursion needs.
#[derive(Clone, Debug)]
pub struct TrCurve {
    x: ZPoly,
    y: ZPoly,
    dx: ZPoly,
    branch: BranchPointSet,
    chart: GammaChart,
    order: i64,
}

impl TrCurve {
    pub fn new(x: ZPoly, y: ZPoly, branch: BranchPointSet, chart: GammaChart, order: i64) -> Self {
        let dx = x.derivative();
        TrCurve { x, y, dx, branch, chart, order }
    }

    pub fn from_zhukovsky(curve: &ZhukovskyCurve) -> Self {
        Self::new(curve.x_poly(), curve.y_poly(), BranchPointSet::zhukovsky(), curve.chart().clone(), curve.order())
    }

    pub fn from_two_matrix(curve: &RationalCurve2MM) -> Result<Self> {
        let branch = BranchPointSet::local(curve.branch_points()?);
        Ok(Self::new(curve.x_poly(), curve.y_poly(), branch, curve.chart().clone(), curve.order()))
    }

    pub fn branch_points(&self) -> &BranchPointSet {
        &self.branch
    }

    fn to_t(&self, f: &GSeries) -> Result<Series> {
        let s = self.chart.to_t(f)?;
        if s.order() < self.order {
            return Err(Error::Precision(format!("known to t^{} only, below order {}", s.order(), self.order)));
        }
        Ok(s.truncate(self.order))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CorrelatorData {
    Zero,
    /// `1/(p − q)²`.
    Bergman,
    Tensor(Pf),
}

#[derive(Clone, Debug)]
pub struct Correlator {
    pub k: usize,
    pub g: u32,
    pub data: CorrelatorData,
}

#[derive(Debug, Serialize)]
pub struct CorrelatorEntry {
    /// Per argument: `[branch point index, pole order]`.
    pub poles: Vec<(u8, u32)>,
    /// Coefficient as a series in γ.
    pub coeff: SeriesRecord,
}

#[derive(Debug, Serialize)]
pub struct CorrelatorDump {
    pub k: usize,
    pub g: u32,
    pub entries: Vec<CorrelatorEntry>,
}

impl Correlator {
    pub fn eval(&self, points: &[GSeries], args: &[Rational]) -> Result<GSeries> {
        if args.len() != self.k {
            return Err(Error::Precondition(format!("W_{} takes {} arguments", self.k, self.k)));
        }
        match &self.data {
            CorrelatorData::Zero => Ok(GSeries::zero()),
            CorrelatorData::Bergman => {
                let d = &args[0] - &args[1];
                if Ring::is_zero(&d) {
                    return Err(Error::Precondition("evaluation on the diagonal".into()));
                }
                Ok(GSeries::constant(d.recip().pow(2)))
            }
            CorrelatorData::Tensor(pf) => pf.eval(points, args),
        }
    }

    /// Branch-point indices at which some argument has a pole.
    pub fn pole_points(&self) -> BTreeSet<u8> {
        match &self.data {
            CorrelatorData::Tensor(pf) => pf.terms().flat_map(|(k, _)| k.iter().filter(|e| e.1 > 0).map(|e| e.0)).collect(),
            _ => BTreeSet::new(),
        }
    }

    /// True when every term has a pole in every argument (no polynomial
    /// part, so all singularities sit at branch points).
    pub fn poles_only_at_branch_points(&self) -> bool {
        match &self.data {
            CorrelatorData::Tensor(pf) => pf.terms().all(|(key, _)| key.len() == self.k && key.iter().all(|e| e.1 > 0)),
            CorrelatorData::Zero => true,
            CorrelatorData::Bergman => false,
        }
    }

    /// Compare values at `args` and at every permutation of `args`.
    pub fn is_symmetric_at(&self, points: &[GSeries], args: &[Rational]) -> Result<bool> {
        let base = self.eval(points, args)?;
        let mut perm: Vec<usize> = (0..args.len()).collect();
        while next_permutation(&mut perm) {
            let permuted: Vec<Rational> = perm.iter().map(|&i| args[i].clone()).collect();
            if !self.eval(points, &permuted)?.sub(&base).is_known_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A one-point correlator as a rational function of its argument.
    pub fn as_rational_function(&self, points: &[GSeries]) -> Result<RationalFunctionZ> {
        if self.k != 1 {
            return Err(Error::Precondition("only one-point correlators are single-variable functions".into()));
        }
        let one = || ZPoly::constant(GSeries::one());
        let mut acc = RationalFunctionZ::laurent(ZPoly::new());
        if let CorrelatorData::Tensor(pf) = &self.data {
            for (key, c) in pf.terms() {
                let (b, n) = key.first().copied().unwrap_or((0, 0));
                let lin = ZPoly::from_terms([(1, GSeries::one()), (0, points[b as usize].neg())]);
                let den = (0..n).fold(one(), |d, _| d.mul(&lin));
                acc = acc.add(&RationalFunctionZ::new(ZPoly::constant(c.clone()), den)?);
            }
        }
        Ok(acc)
    }

    pub fn dump(&self) -> CorrelatorDump {
        let entries = match &self.data {
            CorrelatorData::Tensor(pf) => pf
                .terms()
                .map(|(key, c)| {
                    let mut poles = key.clone();
                    poles.resize(self.k, (0, 0));
                    CorrelatorEntry { poles, coeff: c.to_record() }
                })
                .collect(),
            _ => Vec::new(),
        };
        CorrelatorDump { k: self.k, g: self.g, entries }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `W(P, p_slots…)` near a branch point.
fn local_w(w: &Correlator, at: &LocalPoint, slots: &[usize]) -> Result<LocalSeries> {
    match &w.data {
        CorrelatorData::Zero => Ok(LocalSeries::zero_to(at.order())),
        CorrelatorData::Bergman => Ok(at.coupling(slots[0], 2)),
        CorrelatorData::Tensor(pf) => {
            let mut perm = vec![SPARE];
            perm.extend_from_slice(slots);
            expand(&pf.relabel(&perm), &[(SPARE, at)])
        }
    }
}

/// `W(P, P̄, p_1…p_k)` with `p_j` in slot `j`.
fn local_w_pair(w: &Correlator, p: &LocalPoint, pb: &LocalPoint) -> Result<LocalSeries> {
    match &w.data {
        CorrelatorData::Zero => Ok(LocalSeries::zero_to(p.order())),
        CorrelatorData::Bergman => {
            let d = p.delta.sub(&pb.delta);
            let i = eps_inv(&d)?;
            Ok(lift(&i.mul(&i)))
        }
        CorrelatorData::Tensor(pf) => {
            let mut perm = vec![SPARE, SPARE + 1];
            perm.extend(1..w.k - 1);
            expand(&pf.relabel(&perm), &[(SPARE, p), (SPARE + 1, pb)])
        }
    }
}

/// Memoized recursion on one curve; a Gaussian reference curve with the same
/// quadratic part normalizes the free energies.
pub struct TopologicalRecursion {
    curve: TrCurve,
    memo: HashMap<(usize, u32), Correlator>,
    reference: Option<Box<TopologicalRecursion>>,
}

impl TopologicalRecursion {
    pub fn new(curve: TrCurve, reference: Option<TrCurve>) -> Self {
        TopologicalRecursion {
            curve,
            memo: HashMap::new(),
            reference: reference.map(|c| Box::new(TopologicalRecursion::new(c, None))),
        }
    }

    pub fn zhukovsky(curve: &ZhukovskyCurve) -> Result<Self> {
        let gauss = OneMatrixModel::new(curve.model().c().clone(), Vec::new())?;
        let reference = crate::curve::solve_1mm_curve(&gauss, curve.order())?;
        Ok(Self::new(TrCurve::from_zhukovsky(curve), Some(TrCurve::from_zhukovsky(&reference))))
    }

    pub fn two_matrix(curve: &RationalCurve2MM) -> Result<Self> {
        let m = curve.model();
        let gauss = TwoMatrixModel::new(m.c11().clone(), m.c22().clone(), Vec::new(), Vec::new())?;
        let reference = solve_2mm_curve(&gauss, curve.order())?;
        Ok(Self::new(TrCurve::from_two_matrix(curve)?, Some(TrCurve::from_two_matrix(&reference)?)))
    }

    pub fn curve(&self) -> &TrCurve {
        &self.curve
    }

    /// Number of correlators computed so far.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn correlator(&mut self, k: usize, g: u32) -> Result<Correlator> {
        if k == 0 {
            return Err(Error::Precondition("correlators need at least one argument".into()));
        }
        if let Some(w) = self.memo.get(&(k, g)) {
            return Ok(w.clone());
        }
        let w = match (k, g) {
            (1, 0) => Correlator { k, g, data: CorrelatorData::Zero },
            (2, 0) => Correlator { k, g, data: CorrelatorData::Bergman },
            _ => self.recurse(k, g)?,
        };
        self.memo.insert((k, g), w.clone());
        Ok(w)
    }

    fn recurse(&mut self, n: usize, g: u32) -> Result<Correlator> {
        let k = n - 1;
        let mut deps: HashMap<(usize, u32), Correlator> = HashMap::new();
        if g >= 1 {
            deps.insert((k + 2, g - 1), self.correlator(k + 2, g - 1)?);
        }
        for h in 0..=g {
            for m in 0..=k {
                for key in [(1 + m, h), (1 + k - m, g - h)] {
                    if !deps.contains_key(&key) && key != (n, g) {
                        deps.insert(key, self.correlator(key.0, key.1)?);
                    }
                }
            }
        }
        let start = 6 + 2 * deps.values().map(max_pole).max().unwrap_or(0) as i64;
        let curve = &self.curve;
        let pf = with_local_order(start, |order| {
            let mut acc = Pf::zero();
            for i in 0..curve.branch.len() {
                let p = LocalPoint::new(i as u8, EpsSeries::var(), curve.branch.points(), order);
                let pb = LocalPoint::new(i as u8, curve.branch.conjugate_point(i, &curve.x, order)?, curve.branch.points(), order);
                let dy = vanishing(&p.eval(&curve.y)?.sub(&pb.eval(&curve.y)?), 1)?;
                let dxb = vanishing(&pb.eval(&curve.dx)?, 1)?;
                let kernel = eps_inv(&dy.mul(&dxb))?.scale(&rat(-1, 2));
                let mut bracket = LocalSeries::zero_to(order);
                if g >= 1 {
                    bracket = bracket.add(&local_w_pair(&deps[&(k + 2, g - 1)], &p, &pb)?);
                }
                for h in 0..=g {
                    for mask in 0u32..(1 << k) {
                        let inside: Vec<usize> = (1..=k).filter(|j| mask & (1 << (j - 1)) != 0).collect();
                        let outside: Vec<usize> = (1..=k).filter(|j| mask & (1 << (j - 1)) == 0).collect();
                        let a = (1 + inside.len(), h);
                        let b = (1 + outside.len(), g - h);
                        if a == (1, 0) || b == (1, 0) {
                            continue;
                        }
                        let wa = local_w(&deps[&a], &p, &inside)?;
                        let wb = local_w(&deps[&b], &pb, &outside)?;
                        bracket = bracket.add(&wa.mul(&wb));
                    }
                }
                let kp = p.coupling(0, 1).sub(&pb.coupling(0, 1));
                let integrand = lift(&kernel).mul(&kp).mul(&bracket);
                acc = acc.add(&residue(&integrand)?);
            }
            Ok(acc)
        })?;
        Ok(Correlator { k: n, g, data: CorrelatorData::Tensor(pf) })
    }

    /// `1/(2−2g) Σ_i Res_{z→a_i} Φ(z) W_1^(g)(z) dz` as a γ-series, with
    /// `Φ` a primitive of `y dx`.
    pub fn raw_free_energy(&mut self, g: u32) -> Result<GSeries> {
        if g < 2 {
            return Err(Error::Precondition("the recursion formula for F^(g) needs g ≥ 2".into()));
        }
        let w = self.correlator(1, g)?;
        let curve = &self.curve;
        let ydx = curve.y.mul(&curve.dx);
        let mut prim = ZPoly::new();
        let mut log_coeff = GSeries::zero();
        for (m, c) in ydx.terms() {
            if m == -1 {
                log_coeff = c.clone();
            } else {
                prim.add_term(m + 1, &c.scale(&rat(1, m + 1)));
            }
        }
        let start = 6 + 2 * max_pole(&w) as i64;
        let total = with_local_order(start, |order| {
            let mut acc = GSeries::zero();
            for i in 0..curve.branch.len() {
                let p = LocalPoint::new(i as u8, EpsSeries::var(), curve.branch.points(), order);
                let wl = local_w(&w, &p, &[])?;
                let r = residue(&wl)?.constant_term();
                if !r.is_known_zero() {
                    return Err(Error::Consistency(format!("W_1^({g}) has a residue at a branch point")));
                }
                let a_inv = curve.branch.points()[i]
                    .inv()
                    .ok_or_else(|| Error::Precision("branch point at the origin".into()))?;
                let log = eps_log_one_plus(&EpsSeries::var().mul_coeff(&a_inv).truncate(order))?;
                let phi = p.eval(&prim)?.add(&log.mul_coeff(&log_coeff));
                acc = acc.add(&residue(&lift(&phi).mul(&wl))?.constant_term());
            }
            Ok(acc)
        })?;
        Ok(total.scale(&rat(1, 2 - 2 * g as i64)))
    }

    /// `F^(g)`, `g ≥ 2`, normalized by the Gaussian reference and signed so
    /// that `−F^(g) = Σ_l t^{l+2−2g} F_{l,g}`.
    pub fn free_energy(&mut self, g: u32) -> Result<Series> {
        let raw = self.raw_free_energy(g)?;
        let mut value = self.curve.to_t(&raw)?;
        if let Some(r) = self.reference.as_mut() {
            let rv = r.raw_free_energy(g)?;
            value = value.sub(&r.curve.to_t(&rv)?);
        }
        Ok(value)
    }
}

fn max_pole(w: &Correlator) -> u32 {
    match &w.data {
        CorrelatorData::Tensor(pf) => pf.max_pole(),
        CorrelatorData::Bergman => 2,
        CorrelatorData::Zero => 0,
    }
}

pub fn compute_w(k: usize, g: u32, tr: &mut TopologicalRecursion) -> Result<Correlator> {
    tr.correlator(k, g)
}

pub fn compute_fg(g: u32, tr: &mut TopologicalRecursion) -> Result<Series> {
    tr.free_energy(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::solve_1mm_curve;

    fn quartic(order: i64) -> ZhukovskyCurve {
        solve_1mm_curve(&OneMatrixModel::monomial(int(1), 4, int(1)).unwrap(), order).unwrap()
    }

    #[test]
    fn global_involution() {
        let b = BranchPointSet::zhukovsky();
        assert_eq!(b.conjugate_global(&int(2)), Some(rat(1, 2)));
        assert_eq!(b.conjugate_global(&int(0)), None);
        let d = b.conjugate_point(0, &ZPoly::new(), 5).unwrap();
        for k in 1..5 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(d.get(k), Some(GSeries::constant(int(sign))));
        }
    }

    #[test]
    fn local_conjugation_on_a_zhukovsky_curve() {
        let curve = quartic(3);
        let local = BranchPointSet::local(zhukovsky_points());
        let global = BranchPointSet::zhukovsky();
        for i in 0..2 {
            let a = local.conjugate_point(i, &curve.x_poly(), 6).unwrap();
            let b = global.conjugate_point(i, &curve.x_poly(), 6).unwrap();
            assert!(a.sub(&b).is_known_zero());
        }
    }

    #[test]
    fn base_cases() {
        let mut tr = TopologicalRecursion::new(TrCurve::from_zhukovsky(&quartic(3)), None);
        assert_eq!(tr.correlator(1, 0).unwrap().data, CorrelatorData::Zero);
        let b = tr.correlator(2, 0).unwrap();
        assert_eq!(b.data, CorrelatorData::Bergman);
        let pts = zhukovsky_points();
        assert_eq!(b.eval(&pts, &[int(3), int(1)]).unwrap(), GSeries::constant(rat(1, 4)));
        assert!(b.is_symmetric_at(&pts, &[int(3), rat(1, 2)]).unwrap());
        assert!(tr.correlator(0, 1).is_err());
        assert!(tr.raw_free_energy(1).is_err());
    }

    #[test]
    fn memo_is_reused() {
        let mut tr = TopologicalRecursion::new(TrCurve::from_zhukovsky(&quartic(2)), None);
        tr.correlator(1, 1).unwrap();
        let n = tr.memo_len();
        tr.correlator(1, 1).unwrap();
        assert_eq!(tr.memo_len(), n);
        assert_eq!(n, 3);
    }

    #[test]
    fn gaussian_free_energies_vanish() {
        let curve = solve_1mm_curve(&OneMatrixModel::new(int(2), Vec::new()).unwrap(), 3).unwrap();
        let mut tr = TopologicalRecursion::zhukovsky(&curve).unwrap();
        assert!(tr.free_energy(2).unwrap().is_known_zero());
    }

    #[test]
    fn permutations_are_enumerated() {
        let mut p = vec![0, 1, 2];
        let mut n = 1;
        while next_permutation(&mut p) {
            n += 1;
        }
        assert_eq!(n, 6);
        assert_eq!(p, vec![2, 1, 0]);
    }

    #[test]
    fn correlator_dump_pads_keys() {
        let mut tr = TopologicalRecursion::new(TrCurve::from_zhukovsky(&quartic(2)), None);
        let d = tr.correlator(3, 0).unwrap().dump();
        assert!(!d.entries.is_empty());
        assert!(d.entries.iter().all(|e| e.poles.len() == 3));
    }
}
