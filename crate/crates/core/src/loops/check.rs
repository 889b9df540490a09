//! Order-by-order verification of the loop equations
//! `(N/t) <Tr(Σ_j C_kj M_j G)> − (N²/t) <Tr(D_k V · G)> = <K_k(G)>`
//! with un-normalized traces throughout; `D_k V` carries the potential's
//! `1/N` per trace, so the second term is `(N/t) N <Tr(D_k V G)>`.

use serde::Serialize;

use super::expr::{Letter, NCExpression, NCTerm};
use super::rules::{apply_k, nc_derivative};
use crate::error::{Error, Result};
use crate::invariant::CouplingPoly;
use crate::series::{format_rational, LaurentPolyN, Ring};
use crate::wick::{NSeries, WickEngine};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    pub t_power: i64,
    pub n_power: i64,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoopReport {
    pub color: u8,
    pub word: Vec<u8>,
    pub order: i64,
    pub passed: bool,
    pub mismatches: Vec<Mismatch>,
}

/// Both sides of one loop equation as invariant expressions.
#[derive(Clone, Debug)]
pub struct LoopEquation {
    pub color: Letter,
    pub word: Vec<Letter>,
    /// Without the overall `N/t`.
    pub lhs: NCExpression,
    pub rhs: NCExpression,
}

impl LoopEquation {
    pub fn build(engine: &WickEngine, k: Letter, g: &[Letter]) -> Result<Self> {
        let p = engine.model().p();
        if k == 0 || k as usize > p || g.iter().any(|&c| c == 0 || c as usize > p) {
            return Err(Error::Precondition(format!("colors must lie in 1..={p}")));
        }
        let mut lhs = NCExpression::new();
        for j in 1..=p as u8 {
            let c = engine.model().c(k, j);
            if c.is_zero() {
                continue;
            }
            let mut w = vec![j];
            w.extend_from_slice(g);
            lhs.add(NCTerm::scalar(0, vec![w]), &CouplingPoly::constant(c.clone()));
        }
        for (term, c) in nc_derivative(engine.potential(), k).terms() {
            let mut w = term.open.clone().unwrap_or_default();
            w.extend_from_slice(g);
            let mut traces = term.traces.clone();
            traces.push(w);
            lhs.add(NCTerm::scalar(term.n_power + 1, traces), &c.neg());
        }
        let rhs = apply_k(k, g)?;
        Ok(LoopEquation { color: k, word: g.to_vec(), lhs, rhs })
    }
}

/// `<expr>` for a closed expression, through `t^{order-1}`.
pub fn expectation(engine: &mut WickEngine, expr: &NCExpression, order: i64) -> Result<NSeries> {
    if !expr.is_closed() {
        return Err(Error::Precondition("expectation of an expression with an open word".into()));
    }
    let mut acc = NSeries::zero_to(order);
    for (term, c) in expr.terms() {
        let e = engine.expectation_raw(&term.traces, order)?;
        let scaled = e.map_coeffs(|x| x.shift(term.n_power).map(|y| y.mul(c)));
        acc = acc.add(&scaled);
    }
    Ok(acc)
}

/// Compare both sides coefficient by coefficient for `t^0 .. t^order`.
pub fn check_loop_equation(engine: &mut WickEngine, k: Letter, g: &[Letter], order: i64) -> Result<LoopReport> {
    let eq = LoopEquation::build(engine, k, g)?;
    let lhs = expectation(engine, &eq.lhs, order + 2)?
        .map_coeffs(|x| x.shift(1))
        .shift(-1)
        .truncate(order + 1);
    let rhs = expectation(engine, &eq.rhs, order + 1)?;
    let names = engine.potential().symbols();
    let mut mismatches = Vec::new();
    for tp in 0..=order {
        let (a, b) = (lhs.coeff(tp), rhs.coeff(tp));
        let diff = a.sub(&b);
        for (np, _) in diff.terms() {
            mismatches.push(Mismatch {
                t_power: tp,
                n_power: np,
                lhs: a.coeff(np).fmt_with(&names, format_rational),
                rhs: b.coeff(np).fmt_with(&names, format_rational),
            });
        }
    }
    Ok(LoopReport { color: k, word: g.to_vec(), order, passed: mismatches.is_empty(), mismatches })
}

/// Both sides of the equation, evaluated (for reports and tests).
pub fn loop_sides(engine: &mut WickEngine, k: Letter, g: &[Letter], order: i64) -> Result<(Vec<LaurentPolyN<CouplingPoly>>, Vec<LaurentPolyN<CouplingPoly>>)> {
    let eq = LoopEquation::build(engine, k, g)?;
    let lhs = expectation(engine, &eq.lhs, order + 2)?.map_coeffs(|x| x.shift(1)).shift(-1);
    let rhs = expectation(engine, &eq.rhs, order + 1)?;
    Ok(((0..=order).map(|i| lhs.coeff(i)).collect(), (0..=order).map(|i| rhs.coeff(i)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant::Potential;
    use crate::series::{int, rat};
    use crate::wick::GaussianModel;

    #[test]
    fn gaussian_two_point_equation() {
        let model = GaussianModel::new(vec![vec![int(3), rat(1, 2)], vec![rat(1, 2), int(2)]]).unwrap();
        let mut e = WickEngine::new(model, Potential::empty(2)).unwrap();
        for k in 1..=2 {
            let (lhs, rhs) = loop_sides(&mut e, k, &[k], 3).unwrap();
            let n2 = LaurentPolyN::monomial(CouplingPoly::one(), 2);
            assert_eq!(lhs[0], n2);
            assert_eq!(rhs[0], n2);
            assert!(lhs[1..].iter().all(|c| c.is_zero()));
            assert!(check_loop_equation(&mut e, k, &[k], 3).unwrap().passed);
        }
    }

    #[test]
    fn bad_colors_rejected() {
        let mut e = WickEngine::new(GaussianModel::scalar(int(1)).unwrap(), Potential::empty(1)).unwrap();
        assert!(check_loop_equation(&mut e, 2, &[1], 2).is_err());
        assert!(check_loop_equation(&mut e, 1, &[0], 2).is_err());
    }
}
