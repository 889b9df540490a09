//! Two-matrix spectral curve `x = γz + Σ α_k z^{-k}`, `y = γ/z + Σ β_k z^k`
//! and its genus-0 and genus-1 free energies.

use num_bigint::BigInt;
use num_traits::Signed;

use super::chart::{GammaChart, Series};
use super::local::{GSeries, ZPoly};
use super::zhukovsky::{derivative, horner, res_inf, res_zero, CurveDump, OneMatrixModel, CURVE_MARGIN};
use crate::error::{Error, Result};
use crate::invariant::Potential;
use crate::series::{format_rational, int, newton_system, rat, Rational, Ring};
use crate::wick::GaussianModel;

/// `𝒱_i(x) = C_ii x²/2 − V_i(x)` with coupling `−M₁M₂`, i.e.
/// `C = ((C₁₁, −1), (−1, C₂₂))`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoMatrixModel {
    c11: Rational,
    c22: Rational,
    v1: Vec<Rational>,
    v2: Vec<Rational>,
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(Ring::is_zero) {
        v.pop();
    }
    v
}

impl TwoMatrixModel {
    pub fn new(c11: Rational, c22: Rational, v1: Vec<Rational>, v2: Vec<Rational>) -> Result<Self> {
        if Ring::is_zero(&(&c11 * &c22 - int(1))) {
            return Err(Error::Precondition("det C vanishes".into()));
        }
        for v in [&v1, &v2] {
            if v.iter().take(3).any(|x| !Ring::is_zero(x)) {
                return Err(Error::Precondition("V_i may only contain terms of degree at least 3".into()));
            }
        }
        Ok(TwoMatrixModel { c11, c22, v1: trim(v1), v2: trim(v2) })
    }

    /// Reads a `p = 2` model; `M₂` is rescaled so that `C₁₂ = −1`.
    pub fn from_model(model: &GaussianModel, potential: &Potential) -> Result<Self> {
        if model.p() != 2 {
            return Err(Error::Unsupported("the two-matrix curve needs p = 2".into()));
        }
        let c12 = model.c(1, 2).clone();
        if Ring::is_zero(&c12) {
            return Err(Error::Unsupported("C₁₂ = 0 decouples the two matrices".into()));
        }
        let lambda = -c12.recip();
        let mut v2 = potential.color_polynomial(2)?;
        let mut scale = int(1);
        for c in v2.iter_mut() {
            *c *= &scale;
            scale *= &lambda;
        }
        Self::new(model.c(1, 1).clone(), model.c(2, 2) * &lambda * &lambda, potential.color_polynomial(1)?, v2)
    }

    /// The one-matrix model with a second, Gaussian matrix coupled to it:
    /// `𝒱₁ = 𝒱 + x²/2`, `𝒱₂ = y²/2`.
    pub fn from_one_matrix(m: &OneMatrixModel) -> Result<Self> {
        Self::new(m.c() + int(1), int(1), m.v().to_vec(), Vec::new())
    }

    pub fn c11(&self) -> &Rational {
        &self.c11
    }

    pub fn c22(&self) -> &Rational {
        &self.c22
    }

    pub fn det_c(&self) -> Rational {
        &self.c11 * &self.c22 - int(1)
    }

    fn script(c: &Rational, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::from_integer(0.into()); v.len().max(3)];
        out[2] = c / int(2);
        for (d, x) in v.iter().enumerate() {
            out[d] -= x;
        }
        out
    }

    pub fn script_v1(&self) -> Vec<Rational> {
        Self::script(&self.c11, &self.v1)
    }

    pub fn script_v2(&self) -> Vec<Rational> {
        Self::script(&self.c22, &self.v2)
    }
}

/// Curve coefficients as γ-series: `α_0..α_{d₂}`, `β_0..β_{d₁}` and `t`.
#[derive(Clone, Debug)]
pub struct RationalCurve2MM {
    model: TwoMatrixModel,
    order: i64,
    /// γ²(t).
    pub gamma2: Series,
    /// `α_k γ^{-k}` as series in t.
    pub alpha_scaled: Vec<Series>,
    /// `β_k γ^{-k}` as series in t.
    pub beta_scaled: Vec<Series>,
    alpha: Vec<GSeries>,
    beta: Vec<GSeries>,
    t: GSeries,
    chart: GammaChart,
}

fn polys(alpha: &[GSeries], beta: &[GSeries], gamma: &GSeries) -> (ZPoly, ZPoly) {
    let mut x = ZPoly::monomial(gamma.clone(), 1);
    for (k, a) in alpha.iter().enumerate() {
        x.add_term(-(k as i64), a);
    }
    let mut y = ZPoly::monomial(gamma.clone(), -1);
    for (k, b) in beta.iter().enumerate() {
        y.add_term(k as i64, b);
    }
    (x, y)
}

fn gamma_power(k: usize) -> GSeries {
    GSeries::monomial(int(1), -(k as i64))
}

/// Match `y − 𝒱₁'(x) = −t/(γz) + O(z^{-2})` at `z → ∞` and
/// `x − 𝒱₂'(y) = O(z)` at `z → 0`, with γ as the series variable, modulo
/// `t^order`.
pub fn solve_2mm_curve(model: &TwoMatrixModel, order: i64) -> Result<RationalCurve2MM> {
    let t_order = order + CURVE_MARGIN;
    let g_order = 2 * t_order + 2;
    let sp1 = derivative(&model.script_v1());
    let sp2 = derivative(&model.script_v2());
    let d1 = sp1.len() - 1;
    let d2 = sp2.len() - 1;
    let n = d1 + d2 + 3;
    let system = |u: &[GSeries], g: &GSeries| -> Result<Vec<GSeries>> {
        let (x, y) = polys(&u[..=d2], &u[d2 + 1..=d2 + 1 + d1], g);
        let r1 = y.sub(&horner(&sp1, &x));
        let r2 = x.sub(&horner(&sp2, &y));
        let mut out: Vec<GSeries> = (0..=d1).map(|k| r1.coeff(k as i64)).collect();
        out.push(r1.coeff(-1).add(&u[n - 1]));
        out.extend((0..=d2).map(|k| r2.coeff(-(k as i64))));
        Ok(out)
    };
    let seed = vec![Rational::from_integer(0.into()); n];
    let u = newton_system(system, &seed, g_order)?;
    let gamma = GSeries::var();
    let alpha = u[..=d2].to_vec();
    let beta = u[d2 + 1..=d2 + 1 + d1].to_vec();
    let tau = u[n - 1].clone();
    let t = gamma.mul(&tau);
    let (x, y) = polys(&alpha, &beta, &gamma);
    let r2 = x.sub(&horner(&sp2, &y));
    if !r2.coeff(1).add(&tau).truncate(g_order - 1).is_known_zero() {
        return Err(Error::Consistency("x − 𝒱₂'(y) is not −tz/γ + O(z²) at z → 0".into()));
    }
    let chart = GammaChart::new(&t, t_order)?;
    let scaled = |s: &[GSeries]| -> Result<Vec<Series>> {
        s.iter()
            .enumerate()
            .map(|(k, c)| Ok(chart.to_t(&c.mul(&gamma_power(k)))?.truncate(order)))
            .collect()
    };
    let curve = RationalCurve2MM {
        model: model.clone(),
        order,
        gamma2: chart.gamma2().truncate(order),
        alpha_scaled: scaled(&alpha)?,
        beta_scaled: scaled(&beta)?,
        alpha,
        beta,
        t,
        chart,
    };
    let (r_inf, r_zero) = curve.ydx_residues()?;
    let t_ser = Series::var();
    if !r_inf.sub(&t_ser).truncate(order).is_known_zero() || !r_zero.add(&t_ser).truncate(order).is_known_zero()
    {
        return Err(Error::Consistency("Res y dx at z = ∞ and z = 0 do not give ±t".into()));
    }
    Ok(curve)
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd): (BigInt, BigInt) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rational::new(sn, sd))
}

/// Root of `Σ c_k z^k` through `z(0) = seed`, by Newton iteration.
pub fn series_root(coeffs: &[GSeries], seed: &Rational, order: i64) -> Result<GSeries> {
    let p = ZPoly::from_terms(coeffs.iter().cloned().enumerate().map(|(k, c)| (k as i64, c)));
    let dp = p.derivative();
    let eval = |q: &ZPoly, z: &GSeries| horner_series(q, z);
    let mut z = GSeries::constant(seed.clone()).truncate(order);
    let mut prec = 1;
    while prec < order {
        prec = (2 * prec).min(order);
        z = GSeries::laurent(z.start(), (z.start()..z.end()).map(|k| z.coeff(k)).collect(), prec);
        let f = eval(&p, &z).truncate(prec);
        let df = eval(&dp, &z).truncate(prec);
        let step = f
            .try_div(&df)
            .map_err(|_| Error::DegenerateBranch(format!("multiple root at z = {}", format_rational(seed))))?;
        if step.start() < 1 && !step.truncate(1).is_known_zero() {
            return Err(Error::DegenerateBranch(format!("no root through z = {}", format_rational(seed))));
        }
        z = z.sub(&step).truncate(order);
    }
    if !eval(&p, &z).truncate(order).is_known_zero() {
        return Err(Error::Consistency("branch point residual did not vanish".into()));
    }
    Ok(z)
}

type Matrix = Vec<Vec<GSeries>>;

/// `P(M)` for the companion matrix `M` of the monic `Q`, so that
/// `det P(M) = Π_{Q(a) = 0} P(a)`.
fn poly_at_companion(p: &[GSeries], q: &[GSeries]) -> Matrix {
    let m = q.len() - 1;
    let mut comp = vec![vec![GSeries::zero(); m]; m];
    for i in 0..m {
        if i + 1 < m {
            comp[i + 1][i] = GSeries::one();
        }
        comp[i][m - 1] = q[i].neg();
    }
    let mut acc = vec![vec![GSeries::zero(); m]; m];
    for c in p.iter().rev() {
        let mut next = vec![vec![GSeries::zero(); m]; m];
        for i in 0..m {
            for j in 0..m {
                let mut s = GSeries::zero();
                for k in 0..m {
                    s = s.add(&acc[i][k].mul(&comp[k][j]));
                }
                next[i][j] = s;
            }
            next[i][i] = next[i][i].add(c);
        }
        acc = next;
    }
    acc
}

/// Determinant by cofactor expansion along the first row.
fn det(a: &Matrix) -> GSeries {
    let n = a.len();
    if n == 1 {
        return a[0][0].clone();
    }
    let mut total = GSeries::zero();
    for j in 0..n {
        let minor: Matrix = a[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = a[0][j].mul(&det(&minor));
        total = if j % 2 == 0 { total.add(&term) } else { total.sub(&term) };
    }
    total
}

fn horner_series(p: &ZPoly, z: &GSeries) -> GSeries {
    let mut acc = GSeries::zero();
    let top = p.max_power().unwrap_or(0);
    for k in (0..=top).rev() {
        acc = acc.mul(z).add(&p.coeff(k));
    }
    acc
}

impl RationalCurve2MM {
    pub fn model(&self) -> &TwoMatrixModel {
        &self.model
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn chart(&self) -> &GammaChart {
        &self.chart
    }

    pub fn t_gamma(&self) -> &GSeries {
        &self.t
    }

    pub fn x_poly(&self) -> ZPoly {
        polys(&self.alpha, &self.beta, &GSeries::var()).0
    }

    pub fn y_poly(&self) -> ZPoly {
        polys(&self.alpha, &self.beta, &GSeries::var()).1
    }

    pub fn dx_poly(&self) -> ZPoly {
        self.x_poly().derivative()
    }

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

    /// `(Res_{z→∞} y dx, Res_{z→0} y dx)`.
    pub fn ydx_residues(&self) -> Result<(Series, Series)> {
        let ydx = self.y_poly().mul(&self.dx_poly());
        Ok((self.to_t(&res_inf(&ydx))?, self.to_t(&res_zero(&ydx))?))
    }

    fn f0_gamma(&self) -> Result<GSeries> {
        let (x, y) = (self.x_poly(), self.y_poly());
        let ydx = y.mul(&self.dx_poly());
        let v1 = horner(&self.model.script_v1(), &x);
        let w = x.mul(&y).sub(&horner(&self.model.script_v2(), &y));
        let t = &self.t;
        let t2 = t.mul(t);
        let q = GSeries::monomial(self.model.det_c(), 2).try_div(t)?;
        let log = q.log().map_err(|_| Error::Consistency("γ² det C/t is not a unit series".into()))?;
        let total = res_inf(&v1.mul(&ydx))
            .add(&res_zero(&w.mul(&ydx)))
            .add(&t.mul(&v1.coeff(0)))
            .sub(&t.mul(&w.coeff(0)))
            .sub(&t2.scale(&int(2)))
            .sub(&t2.mul(&log));
        Ok(total.scale(&rat(1, 2)))
    }

    pub fn f0(&self) -> Result<Series> {
        self.to_t(&self.f0_gamma()?)
    }

    /// Coefficients of the monic `Q(z) = z^{d₂+1} x'(z)/γ`, whose roots are
    /// the branch points.
    fn branch_polynomial(&self) -> Vec<GSeries> {
        let d2 = self.alpha.len() - 1;
        let inv_g = GSeries::monomial(int(1), -1);
        let mut coeffs = vec![GSeries::zero(); d2 + 2];
        coeffs[d2 + 1] = GSeries::one();
        for k in 1..=d2 {
            coeffs[d2 - k] = self.alpha[k].mul(&inv_g).scale(&int(-(k as i64)));
        }
        coeffs
    }

    /// Roots of `x'(z) = 0` as γ-series, seeded from their positions at
    /// `t = 0`: `±√C₂₂` and, for a cubic `V₂`, `0`.
    pub fn branch_points(&self) -> Result<Vec<GSeries>> {
        let d2 = self.alpha.len() - 1;
        if d2 > 2 {
            return Err(Error::Unsupported("branch points collide at t = 0 when deg V₂ > 3".into()));
        }
        let s = rational_sqrt(&self.model.c22)
            .ok_or_else(|| Error::Unsupported(format!("√C₂₂ is irrational (C₂₂ = {})", format_rational(&self.model.c22))))?;
        let mut seeds = vec![s.clone(), -s];
        if d2 == 2 {
            seeds.push(int(0));
        }
        let g_order = self.alpha[0].order();
        let coeffs = self.branch_polynomial();
        seeds.iter().map(|a| series_root(&coeffs, a, g_order - 2)).collect()
    }

    /// `F⁽¹⁾ = (1/24) ln(t̃² Π_i γ y'(a_i)/t²)` with `t̃` the leading
    /// coefficient of `𝒱₂'`, normalized to vanish at `t = 0`.
    pub fn f1(&self) -> Result<Series> {
        let sp2 = derivative(&self.model.script_v2());
        let lead = sp2.last().cloned().unwrap_or_else(|| int(1));
        let q = self.branch_polynomial();
        let m = q.len() - 1;
        let z2_dy = self.y_poly().derivative().shift(2);
        let p: Vec<GSeries> = (0..=z2_dy.max_power().unwrap_or(0)).map(|k| z2_dy.coeff(k)).collect();
        let prod_p = det(&poly_at_companion(&p, &q));
        let prod_a = if m.is_multiple_of(2) { q[0].clone() } else { q[0].neg() };
        let arg = GSeries::constant(&lead * &lead)
            .mul(&GSeries::monomial(int(1), m as i64))
            .mul(&prod_p)
            .try_div(&self.t.mul(&self.t).mul(&prod_a).mul(&prod_a))?;
        let c0 = arg
            .get(0)
            .filter(|c| !Ring::is_zero(c) && arg.valuation() == 0)
            .ok_or_else(|| Error::Consistency("F⁽¹⁾ argument is not a unit series".into()))?;
        let l = arg.scale(&c0.recip()).log()?;
        self.to_t(&l.scale(&rat(1, 24)))
    }

    pub fn dump(&self) -> CurveDump {
        let mut series = vec![("gamma^2".to_string(), self.gamma2.to_record())];
        for (k, a) in self.alpha_scaled.iter().enumerate() {
            series.push((format!("alpha{k}/gamma^{k}"), a.to_record()));
        }
        for (k, b) in self.beta_scaled.iter().enumerate() {
            series.push((format!("beta{k}/gamma^{k}"), b.to_record()));
        }
        CurveDump {
            kind: format!(
                "two-matrix C11={} C22={}",
                format_rational(&self.model.c11),
                format_rational(&self.model.c22)
            ),
            order: self.order,
            series,
        }
    }
}

pub fn f0_2mm(curve: &RationalCurve2MM) -> Result<Series> {
    curve.f0()
}

pub fn f1_2mm(curve: &RationalCurve2MM) -> Result<Series> {
    curve.f1()
}
