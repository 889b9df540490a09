//! One-matrix spectral curve `x = α + γ(z + 1/z)`, `y = ½ Σ v_j (z^j − z^{-j})`
//! and its closed-form free energies.

use serde::Serialize;

use super::chart::{GammaChart, Series};
use super::local::{GSeries, ZPoly};
use crate::error::{Error, Result};
use crate::invariant::Potential;
use crate::series::{format_rational, int, newton_branch, rat, LaurentPoly, MPoly, Rational, Ring, SeriesRecord};
use crate::wick::GaussianModel;

/// Extra t-orders carried internally so that negative powers of γ met in
/// the higher-genus formulas do not eat into the requested order.
pub const CURVE_MARGIN: i64 = 8;

/// `𝒱(x) = C x²/2 − V(x)` with `V(x) = Σ v[d] x^d`, `d ≥ 3`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneMatrixModel {
    c: Rational,
    v: Vec<Rational>,
}

impl OneMatrixModel {
    pub fn new(c: Rational, v: Vec<Rational>) -> Result<Self> {
        if Ring::is_zero(&c) {
            return Err(Error::Precondition("C must be nonzero".into()));
        }
        if v.iter().take(3).any(|x| !Ring::is_zero(x)) {
            return Err(Error::Precondition("V may only contain terms of degree at least 3".into()));
        }
        let mut v = v;
        while v.last().is_some_and(Ring::is_zero) {
            v.pop();
        }
        Ok(OneMatrixModel { c, v })
    }

    pub fn from_model(model: &GaussianModel, potential: &Potential) -> Result<Self> {
        if model.p() != 1 {
            return Err(Error::Unsupported("the Zhukovsky curve needs a one-matrix model".into()));
        }
        Self::new(model.c(1, 1).clone(), potential.one_matrix_polynomial()?)
    }

    /// `V = (t_d/d) x^d`.
    pub fn monomial(c: Rational, d: usize, t_d: Rational) -> Result<Self> {
        let mut v = vec![Rational::from_integer(0.into()); d + 1];
        v[d] = t_d / int(d as i64);
        Self::new(c, v)
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn v(&self) -> &[Rational] {
        &self.v
    }

    /// Coefficients of `𝒱(x)`.
    pub fn script_v(&self) -> Vec<Rational> {
        let n = self.v.len().max(3);
        let mut out = vec![Rational::from_integer(0.into()); n];
        out[2] = &self.c / int(2);
        for (d, c) in self.v.iter().enumerate() {
            out[d] -= c;
        }
        out
    }

    /// Coefficients of `𝒱'(x)`.
    pub fn script_v_prime(&self) -> Vec<Rational> {
        derivative(&self.script_v())
    }
}

pub(crate) fn derivative(p: &[Rational]) -> Vec<Rational> {
    p.iter().enumerate().skip(1).map(|(d, c)| c * int(d as i64)).collect()
}

/// Horner evaluation of a rational polynomial on a ring element.
pub(crate) fn horner<R: Ring>(p: &[Rational], x: &R) -> R {
    let mut acc = R::zero();
    for c in p.iter().rev() {
        acc = acc.mul(x).add(&R::from_rational(c));
    }
    acc
}

pub(crate) fn res_inf(f: &ZPoly) -> GSeries {
    f.coeff(-1).neg()
}

pub(crate) fn res_zero(f: &ZPoly) -> GSeries {
    f.coeff(-1)
}

/// Data of the curve with γ as the series variable.
#[derive(Clone, Debug)]
pub(crate) struct GammaCurve {
    pub alpha: GSeries,
    pub v: Vec<GSeries>,
    pub t: GSeries,
}

#[derive(Clone, Debug)]
pub struct ZhukovskyCurve {
    model: OneMatrixModel,
    order: i64,
    /// α(t).
    pub alpha: Series,
    /// γ²(t).
    pub gamma2: Series,
    /// `v_j γ^{-j}` as series in t, `j = 0..=deg 𝒱'`.
    pub v_scaled: Vec<Series>,
    pub(crate) g: GammaCurve,
    pub(crate) chart: GammaChart,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidueIdentities {
    pub res_inf_ydx: Series,
    pub res_zero_ydx: Series,
    pub res_inf_vprime_ydx: Series,
    pub res_inf_x_vprime_ydx: Series,
}

#[derive(Debug, Serialize)]
pub struct CurveDump {
    pub kind: String,
    pub order: i64,
    pub series: Vec<(String, SeriesRecord)>,
}

/// Solve `v_0 = 0`, `v_1 = t/γ` on the branch `α(0) = γ(0) = 0`, modulo
/// `t^order`.
pub fn solve_1mm_curve(model: &OneMatrixModel, order: i64) -> Result<ZhukovskyCurve> {
    let t_order = order + CURVE_MARGIN;
    let g_order = 2 * t_order + 2;
    let alpha_v = MPoly::<Rational>::var(0);
    let gamma_v = MPoly::<Rational>::var(1);
    let x: LaurentPoly<MPoly<Rational>> =
        LaurentPoly::from_terms([(-1, gamma_v.clone()), (0, alpha_v), (1, gamma_v)]);
    let vp = horner(&model.script_v_prime(), &x);
    let d = model.script_v_prime().len() as i64 - 1;
    let v0 = vp.coeff(0).scale(&rat(1, 2));
    let alpha = newton_branch(&v0, &Rational::from_integer(0.into()), g_order)?;
    let gamma = GSeries::var();
    let lift = |c: &Rational| GSeries::constant(c.clone());
    let mut v = vec![GSeries::zero()];
    for j in 1..=d.max(1) {
        v.push(vp.coeff(j).eval(&[alpha.clone(), gamma.clone()], lift).truncate(g_order));
    }
    let t = gamma.mul(&v[1]);
    let chart = GammaChart::new(&t, t_order)?;
    let g = GammaCurve { alpha, v, t };
    let alpha_t = chart.to_t(&g.alpha)?;
    let v_scaled = g
        .v
        .iter()
        .enumerate()
        .map(|(j, vj)| chart.to_t(&vj.mul(&GSeries::monomial(int(1), -(j as i64)))))
        .collect::<Result<Vec<_>>>()?;
    let curve = ZhukovskyCurve {
        model: model.clone(),
        order,
        alpha: alpha_t.truncate(order),
        gamma2: chart.gamma2().truncate(order),
        v_scaled: v_scaled.into_iter().map(|s| s.truncate(order)).collect(),
        g,
        chart,
    };
    let ids = curve.residue_identities()?;
    let t_ser = Series::var();
    if !ids.res_inf_ydx.sub(&t_ser).truncate(order).is_known_zero()
        || !ids.res_zero_ydx.add(&t_ser).truncate(order).is_known_zero()
    {
        return Err(Error::Consistency("Res y dx at z = ∞ and z = 0 do not give ±t".into()));
    }
    Ok(curve)
}

impl ZhukovskyCurve {
    pub fn model(&self) -> &OneMatrixModel {
        &self.model
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn chart(&self) -> &GammaChart {
        &self.chart
    }

    pub(crate) fn gamma(&self) -> GSeries {
        GSeries::var()
    }

    /// `t` as an even series in γ.
    pub fn t_gamma(&self) -> &GSeries {
        &self.g.t
    }

    pub(crate) fn v_gamma(&self, j: usize) -> GSeries {
        self.g.v.get(j).cloned().unwrap_or_else(GSeries::zero)
    }

    pub fn x_poly(&self) -> ZPoly {
        let gm = self.gamma();
        ZPoly::from_terms([(-1, gm.clone()), (0, self.g.alpha.clone()), (1, gm)])
    }

    pub fn y_poly(&self) -> ZPoly {
        let mut y = ZPoly::new();
        for (j, vj) in self.g.v.iter().enumerate().skip(1) {
            let h = vj.scale(&rat(1, 2));
            y.add_term(j as i64, &h);
            y.add_term(-(j as i64), &h.neg());
        }
        y
    }

    /// `dx/dz`.
    pub fn dx_poly(&self) -> ZPoly {
        self.x_poly().derivative()
    }

    /// `𝒱'(x(z)) = Σ v_j (z^j + z^{-j})`.
    pub fn vprime_poly(&self) -> ZPoly {
        horner(&self.model.script_v_prime(), &self.x_poly())
    }

    pub fn script_v_poly(&self) -> ZPoly {
        horner(&self.model.script_v(), &self.x_poly())
    }

    /// Convert an even γ-series to t, truncated to the curve order.
    pub fn to_t(&self, f: &GSeries) -> Result<Series> {
        let s = self.chart.to_t(f)?;
        if s.order() < self.order {
            return Err(Error::Precision(format!(
                "result known to t^{} only, below the requested order {}",
                s.order(),
                self.order
            )));
        }
        Ok(s.truncate(self.order))
    }

    pub fn residue_identities(&self) -> Result<ResidueIdentities> {
        let ydx = self.y_poly().mul(&self.dx_poly());
        let vp = self.vprime_poly();
        Ok(ResidueIdentities {
            res_inf_ydx: self.to_t(&res_inf(&ydx))?,
            res_zero_ydx: self.to_t(&res_zero(&ydx))?,
            res_inf_vprime_ydx: self.to_t(&res_inf(&vp.mul(&ydx)))?,
            res_inf_x_vprime_ydx: self.to_t(&res_inf(&self.x_poly().mul(&vp).mul(&ydx)))?,
        })
    }

    /// `ln(C γ²/t)` as a γ-series.
    fn log_c_gamma2_over_t(&self) -> Result<GSeries> {
        let q = GSeries::monomial(self.model.c.clone(), 2)
            .try_div(&self.g.t)?;
        q.log().map_err(|_| Error::Consistency("C γ²/t is not a unit series".into()))
    }

    /// Genus-0 free energy from the residue formula, as a γ-series.
    fn f0_residue_gamma(&self) -> Result<GSeries> {
        let t = &self.g.t;
        let sv = self.script_v_poly();
        let ydx = self.y_poly().mul(&self.dx_poly());
        let a = res_inf(&sv.mul(&ydx));
        let b = sv.coeff(0);
        let t2 = t.mul(t);
        let total = a
            .add(&t.mul(&b))
            .sub(&t2.scale(&rat(3, 2)))
            .sub(&t2.mul(&self.log_c_gamma2_over_t()?));
        Ok(total.scale(&rat(1, 2)))
    }

    /// Genus-0 free energy from the explicit `v_j` form.
    fn f0_vj_gamma(&self) -> Result<GSeries> {
        let t = &self.g.t;
        let gm = self.gamma();
        let g2 = gm.mul(&gm);
        let d = self.g.v.len();
        let mut sum1 = GSeries::zero();
        for j in 1..=d {
            let diff = self.v_gamma(j + 1).sub(&self.v_gamma(j - 1));
            sum1 = sum1.add(&g2.mul(&diff).mul(&diff).scale(&rat(1, j as i64)));
        }
        let mut sum2 = GSeries::zero();
        for j in 1..=d {
            let diff = self.v_gamma(2 * j - 1).sub(&self.v_gamma(2 * j + 1));
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sum2 = sum2.add(&gm.mul(t).mul(&diff).scale(&rat(2 * sign, j as i64)));
        }
        let va = horner(&self.model.script_v(), &self.g.alpha);
        let t2 = t.mul(t);
        let total = sum1
            .neg()
            .sub(&sum2)
            .add(&t.mul(&va).scale(&int(2)))
            .sub(&t2.scale(&rat(3, 2)))
            .sub(&t2.mul(&self.log_c_gamma2_over_t()?));
        Ok(total.scale(&rat(1, 2)))
    }

    /// `F⁽⁰⁾(t)` from the `v_j` form.
    pub fn f0(&self) -> Result<Series> {
        self.to_t(&self.f0_vj_gamma()?)
    }

    /// `F⁽⁰⁾(t)` from the residue form.
    pub fn f0_residue(&self) -> Result<Series> {
        self.to_t(&self.f0_residue_gamma()?)
    }

    /// `y'(1)` and `y'(−1)` as γ-series.
    pub(crate) fn y_prime_at_branch_points(&self) -> (GSeries, GSeries) {
        let mut p = GSeries::zero();
        let mut m = GSeries::zero();
        for (j, vj) in self.g.v.iter().enumerate().skip(1) {
            let w = vj.scale(&int(j as i64));
            p = p.add(&w);
            m = if j % 2 == 1 { m.add(&w) } else { m.sub(&w) };
        }
        (p, m)
    }

    /// `F⁽¹⁾ = (1/24) ln(γ² y'(1) y'(−1) / t²)`, normalized so that
    /// `−F⁽¹⁾ = Σ t^l F_{l,1}`.
    pub fn f1(&self) -> Result<Series> {
        let (p, m) = self.y_prime_at_branch_points();
        let gm = self.gamma();
        let arg = gm.mul(&gm).mul(&p).mul(&m).try_div(&self.g.t.mul(&self.g.t))?;
        let l = arg.log().map_err(|_| Error::Consistency("γ² y'(1) y'(−1)/t² is not a unit series".into()))?;
        self.to_t(&l.scale(&rat(1, 24)))
    }

    pub fn dump(&self) -> CurveDump {
        let mut series = vec![
            ("alpha".to_string(), self.alpha.to_record()),
            ("gamma^2".to_string(), self.gamma2.to_record()),
        ];
        for (j, v) in self.v_scaled.iter().enumerate() {
            series.push((format!("v{j}/gamma^{j}"), v.to_record()));
        }
        CurveDump { kind: format!("zhukovsky C={}", format_rational(&self.model.c)), order: self.order, series }
    }
}

pub fn f0_1mm(curve: &ZhukovskyCurve) -> Result<Series> {
    curve.f0()
}

pub fn f1_1mm(curve: &ZhukovskyCurve) -> Result<Series> {
    curve.f1()
}

#[cfg(test)]
mod tests {
    use super::*;

    const ORDER: i64 = 8;

    /// Branch of `u − u³ = 8kt` (cubic) or `u² = 1 − 12kt` (quartic) through 1.
    fn branch(cubic: bool, k: &Rational) -> Series {
        let u = MPoly::<Rational>::var(0);
        let t = MPoly::<Rational>::var(1);
        let kt = t.mul(&MPoly::constant(k.clone()));
        let p = if cubic {
            u.sub(&u.mul(&u).mul(&u)).sub(&kt.mul(&MPoly::constant(int(8))))
        } else {
            u.mul(&u).sub(&MPoly::constant(int(1))).add(&kt.mul(&MPoly::constant(int(12))))
        };
        newton_branch(&p, &int(1), ORDER + 2).unwrap()
    }

    fn c(r: Rational) -> Series {
        Series::constant(r)
    }

    fn assert_series_eq(a: &Series, b: &Series) {
        assert!(a.sub(b).truncate(ORDER).is_known_zero(), "{a} != {b}");
    }

    #[test]
    fn gaussian_curve_is_trivial() {
        let m = OneMatrixModel::new(int(3), Vec::new()).unwrap();
        let curve = solve_1mm_curve(&m, ORDER).unwrap();
        assert!(curve.alpha.is_known_zero());
        assert_series_eq(&curve.gamma2, &Series::monomial(rat(1, 3), 1));
        assert!(curve.f0().unwrap().is_known_zero());
        assert!(curve.f1().unwrap().is_known_zero());
    }

    #[test]
    fn quartic_matches_closed_forms() {
        let (cc, t4) = (int(2), int(3));
        let curve = solve_1mm_curve(&OneMatrixModel::monomial(cc.clone(), 4, t4.clone()).unwrap(), ORDER).unwrap();
        let b = branch(false, &(&t4 / (&cc * &cc)));
        let t = Series::var();
        let one_b = c(int(1)).add(&b);
        let inv_one_b = one_b.inv().unwrap();
        assert!(curve.alpha.is_known_zero());
        let gamma2 = t.scale(&(int(2) / &cc)).mul(&inv_one_b);
        assert_series_eq(&curve.gamma2, &gamma2);
        assert!(curve.v_scaled[2].is_known_zero());
        assert_series_eq(&curve.v_scaled[3], &c(-t4));
        let r = c(int(1)).sub(&b).mul(&inv_one_b);
        let bracket = r
            .mul(&r)
            .scale(&rat(-1, 12))
            .add(&r.scale(&rat(2, 3)))
            .add(&one_b.scale(&rat(1, 2)).log().unwrap());
        assert_series_eq(&curve.f0().unwrap(), &t.mul(&t).scale(&rat(1, 2)).mul(&bracket));
        let f1 = b.scale(&int(2)).mul(&inv_one_b).log().unwrap().scale(&rat(1, 12));
        assert_series_eq(&curve.f1().unwrap(), &f1);
    }

    #[test]
    fn cubic_matches_closed_forms() {
        for (cc, t3) in [(int(1), int(1)), (int(2), int(1)), (int(1), int(-2))] {
            let curve = solve_1mm_curve(&OneMatrixModel::monomial(cc.clone(), 3, t3.clone()).unwrap(), ORDER).unwrap();
            let a = branch(true, &(&t3 * &t3 / (&cc * &cc * &cc)));
            let a_inv = a.inv().unwrap();
            let t = Series::var();
            assert_series_eq(&curve.gamma2, &t.mul(&a_inv).scale(&cc.recip()));
            assert_series_eq(&curve.alpha, &c(int(1)).sub(&a).scale(&(&cc / (int(2) * &t3))));
            assert_series_eq(&curve.v_scaled[2], &c(-t3.clone()));
            let bracket = c(rat(-1, 4))
                .sub(&a_inv.mul(&a_inv).scale(&rat(1, 12)))
                .add(&a_inv.scale(&rat(2, 3)))
                .sub(&c(int(1)).add(&a).inv().unwrap().scale(&rat(2, 3)))
                .add(&a.log().unwrap().scale(&rat(1, 2)));
            assert_series_eq(&curve.f0().unwrap(), &t.mul(&t).mul(&bracket));
            let arg = a.mul(&a).scale(&int(3)).sub(&c(int(1))).mul(&a_inv).mul(&a_inv).scale(&rat(1, 2));
            assert_series_eq(&curve.f1().unwrap(), &arg.log().unwrap().scale(&rat(1, 24)));
        }
    }

    #[test]
    fn residue_and_vj_forms_agree() {
        for m in [
            OneMatrixModel::monomial(int(1), 3, int(1)).unwrap(),
            OneMatrixModel::new(int(2), vec![int(0), int(0), int(0), rat(1, 3), rat(-1, 2)]).unwrap(),
        ] {
            let curve = solve_1mm_curve(&m, ORDER).unwrap();
            assert_series_eq(&curve.f0().unwrap(), &curve.f0_residue().unwrap());
        }
    }

    #[test]
    fn residue_identities_hold() {
        let m = OneMatrixModel::new(int(1), vec![int(0), int(0), int(0), int(1), int(2)]).unwrap();
        let curve = solve_1mm_curve(&m, ORDER).unwrap();
        let ids = curve.residue_identities().unwrap();
        let t = Series::var();
        assert_series_eq(&ids.res_inf_ydx, &t);
        assert_series_eq(&ids.res_zero_ydx, &t.neg());
        assert!(ids.res_inf_vprime_ydx.is_known_zero());
        assert_series_eq(&ids.res_inf_x_vprime_ydx, &t.mul(&t));
    }

    #[test]
    fn rejects_bad_models() {
        assert!(OneMatrixModel::new(int(0), Vec::new()).is_err());
        assert!(OneMatrixModel::new(int(1), vec![int(0), int(0), int(1)]).is_err());
    }

    #[test]
    fn dump_lists_all_series() {
        let curve = solve_1mm_curve(&OneMatrixModel::monomial(int(1), 4, int(1)).unwrap(), 4).unwrap();
        let d = curve.dump();
        assert_eq!(d.series.len(), 2 + curve.v_scaled.len());
        assert_eq!(d.order, 4);
    }
}
