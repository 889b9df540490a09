//! Genus-2 free energy of the one-matrix model as a triple residue at the
//! branch points `z = ±1`, innermost variable first.

use super::chart::Series;
use super::local::{
    eps_const, eps_inv, eps_log_one_plus, expand, lift, residue, with_local_order, EpsSeries, GSeries, LocalPoint,
    LocalSeries, Pf, ZPoly, vanishing,
};
use super::zhukovsky::{solve_1mm_curve, OneMatrixModel, ZhukovskyCurve};
use crate::error::Result;
use crate::series::{int, rat, Rational, Ring};

/// The branch points `+1` (index 0) and `−1` (index 1).
pub fn zhukovsky_points() -> Vec<GSeries> {
    vec![GSeries::constant(int(1)), GSeries::constant(int(-1))]
}

/// `z̄ − a = 1/(a + ε) − a` for the global involution.
pub(crate) fn involution_delta(a: &Rational, order: i64) -> Result<EpsSeries> {
    let p = eps_const(a).add(&EpsSeries::var());
    let inv = p
        .inv_to(order)
        .ok_or_else(|| crate::error::Error::Precision("no inverse of the local coordinate".into()))?;
    Ok(inv.sub(&eps_const(a)))
}

/// Local data of the curve at one branch point: `P = a + ε` and `P̄ = 1/P`.
pub(crate) struct BranchLocal<'a> {
    pub p: LocalPoint<'a>,
    pub pb: LocalPoint<'a>,
    pub y: EpsSeries,
}

impl<'a> BranchLocal<'a> {
    pub fn new(curve: &ZhukovskyCurve, points: &'a [GSeries], idx: u8, order: i64) -> Result<Self> {
        let a = if idx == 0 { int(1) } else { int(-1) };
        let p = LocalPoint::new(idx, EpsSeries::var(), points, order);
        let pb = LocalPoint::new(idx, involution_delta(&a, order)?, points, order);
        let y = vanishing(&p.eval(&curve.y_poly())?, 1)?;
        Ok(BranchLocal { p, pb, y })
    }

    /// `1/(4γ P y(P))`, the scalar part of `E(·, P)`.
    fn e_scalar(&self) -> Result<EpsSeries> {
        let four_gamma = EpsSeries::constant(GSeries::monomial(int(4), 1));
        eps_inv(&four_gamma.mul(&self.p.value()).mul(&self.y))
    }

    /// `1/(P − 1/P)²`.
    fn d2(&self) -> Result<EpsSeries> {
        let d = self.p.value().sub(&self.pb.value());
        let i = eps_inv(&d)?;
        Ok(i.mul(&i))
    }

    /// `E(w_slot, P)` as a local series in ε with the slot kept.
    fn e_kernel(&self, slot: usize) -> Result<LocalSeries> {
        Ok(lift(&self.e_scalar()?).mul(&self.p.coupling(slot, 1)).mul(&self.pb.coupling(slot, 1)))
    }
}

/// `∫_{1/z}^z y dx` near a branch point.
pub(crate) fn odd_primitive(curve: &ZhukovskyCurve, bl: &BranchLocal) -> Result<EpsSeries> {
    let ydx = curve.y_poly().mul(&curve.dx_poly());
    let mut poly = ZPoly::new();
    let mut log_coeff = GSeries::zero();
    for (m, c) in ydx.terms() {
        if m == -1 {
            log_coeff = c.clone();
            continue;
        }
        let c = c.scale(&rat(1, m + 1));
        poly.add_term(m + 1, &c);
        poly.add_term(-(m + 1), &c.neg());
    }
    let z = bl.p.value();
    let u = z.mul(&z).sub(&EpsSeries::one()).truncate(bl.p.order());
    let log = eps_log_one_plus(&u)?;
    Ok(bl.p.eval(&poly)?.add(&log.mul_coeff(&log_coeff)))
}

fn phi(curve: &ZhukovskyCurve, bl: &BranchLocal) -> Result<EpsSeries> {
    let integral = odd_primitive(curve, bl)?;
    let z = bl.p.value();
    let den = z.mul(&bl.y).mul(&z.sub(&bl.pb.value())).mul(&EpsSeries::constant(GSeries::monomial(int(-4), 1)));
    Ok(integral.mul(&eps_inv(&den)?))
}

fn sum_residues(order: i64, curve: &ZhukovskyCurve, f: impl Fn(&BranchLocal) -> Result<LocalSeries>) -> Result<Pf> {
    let points = zhukovsky_points();
    let mut acc = Pf::zero();
    for idx in 0..2u8 {
        let bl = BranchLocal::new(curve, &points, idx, order)?;
        acc = acc.add(&residue(&f(&bl)?)?);
    }
    Ok(acc)
}

/// Slots: 0 = z₁, 1 = 1/z₁, 2 = z₂, 3 = 1/z₂.
fn outer(curve: &ZhukovskyCurve, order: i64, inner: &Pf) -> Result<GSeries> {
    let r = sum_residues(order, curve, |bl| Ok(lift(&phi(curve, bl)?).mul(&expand(inner, &[(0, &bl.p), (1, &bl.pb)])?)))?;
    Ok(r.constant_term())
}

fn term1(curve: &ZhukovskyCurve, order: i64) -> Result<GSeries> {
    let r3 = sum_residues(order, curve, |bl| Ok(bl.e_kernel(1)?.mul(&lift(&bl.d2()?))))?;
    let r2 = sum_residues(order, curve, |bl| Ok(bl.e_kernel(0)?.mul(&lift(&bl.d2()?))))?;
    outer(curve, order, &r2.mul(&r3))
}

fn term2(curve: &ZhukovskyCurve, order: i64) -> Result<GSeries> {
    let r3 = sum_residues(order, curve, |bl| Ok(bl.e_kernel(2)?.mul(&lift(&bl.d2()?))))?;
    let r2 = sum_residues(order, curve, |bl| {
        Ok(expand(&r3, &[(2, &bl.p)])?.mul(&bl.e_kernel(0)?).mul(&bl.pb.coupling(1, 2)))
    })?;
    outer(curve, order, &r2)
}

fn term3(curve: &ZhukovskyCurve, order: i64) -> Result<GSeries> {
    let r3 = sum_residues(order, curve, |bl| {
        Ok(bl.e_kernel(2)?.mul(&bl.pb.coupling(1, 2)).mul(&bl.p.coupling(3, 2)))
    })?;
    let r2 = sum_residues(order, curve, |bl| Ok(expand(&r3, &[(2, &bl.p), (3, &bl.pb)])?.mul(&bl.e_kernel(0)?)))?;
    outer(curve, order, &r2)
}

impl ZhukovskyCurve {
    /// `F⁽²⁾` from the triple-residue formula, as a γ-series.
    pub(crate) fn f2_triple_gamma(&self) -> Result<GSeries> {
        with_local_order(12, |order| {
            let r1 = term1(self, order)?;
            let r2 = term2(self, order)?;
            let r3 = term3(self, order)?;
            Ok(r1.add(&r2.scale(&int(2))).add(&r3.scale(&int(2))).scale(&rat(-1, 2)))
        })
    }

    /// `F⁽²⁾` with the Gaussian curve of the same `C` subtracted, signed so
    /// that `−F⁽²⁾ = Σ_l t^{l−2} F_{l,2}`.
    pub fn f2(&self) -> Result<Series> {
        let raw = self.to_t(&self.f2_triple_gamma()?)?;
        let gauss = OneMatrixModel::new(self.model().c().clone(), Vec::new())?;
        let reference = solve_1mm_curve(&gauss, self.order())?;
        let raw_gauss = reference.to_t(&reference.f2_triple_gamma()?)?;
        Ok(raw.sub(&raw_gauss).neg())
    }
}

pub fn f2_1mm(curve: &ZhukovskyCurve) -> Result<Series> {
    curve.f2()
}
