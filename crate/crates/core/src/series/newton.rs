//! Power-series solutions of algebraic equations: branches of `P(u, t) = 0`,
//! series reversion and square systems.

use super::mpoly::MPoly;
use super::rational::{format_rational, Rational};
use super::ring::Ring;
use super::truncated::TruncatedSeries;
use crate::error::{Error, Result};

type Series = TruncatedSeries<Rational>;

fn padded(u: &Series, order: i64) -> Series {
    Series::laurent(u.start(), (u.start()..u.end()).map(|k| u.coeff(k)).collect(), order)
}

/// Branch `u(t)` of `P(u, t) = 0` (variable 0 is `u`, variable 1 is `t`)
/// through `u(0) = seed`, computed modulo `t^order` by Newton iteration with
/// doubling precision.
pub fn newton_branch(p: &MPoly<Rational>, seed: &Rational, order: i64) -> Result<Series> {
    if p.num_vars() > 2 {
        return Err(Error::Precondition("branch equation must involve only u and t".into()));
    }
    let at0 = |q: &MPoly<Rational>| q.eval(&[seed.clone(), Rational::zero()], |c| c.clone());
    if !at0(p).is_zero() {
        return Err(Error::Precondition(format!(
            "seed {} is not a root of the equation at t = 0",
            format_rational(seed)
        )));
    }
    let dp = p.partial(0);
    if at0(&dp).is_zero() {
        return Err(Error::DegenerateBranch(format!(
            "derivative vanishes at u = {}, t = 0",
            format_rational(seed)
        )));
    }
    let t = Series::var();
    let mut u = Series::new(vec![seed.clone()], order.min(1));
    let mut prec = 1;
    while prec < order {
        prec = (2 * prec).min(order);
        let uu = padded(&u, prec);
        let vals = [uu.clone(), t.clone()];
        let f = p.eval(&vals, |c| Series::constant(c.clone())).truncate(prec);
        let df = dp.eval(&vals, |c| Series::constant(c.clone())).truncate(prec);
        u = uu.sub(&f.try_div(&df)?);
    }
    let check = p.eval(&[u.clone(), t], |c| Series::constant(c.clone()));
    if !check.truncate(order).is_known_zero() {
        return Err(Error::Consistency("Newton branch residual did not vanish".into()));
    }
    Ok(u)
}

/// Compositional inverse of `f = c₁ s + c₂ s² + …` (c₁ ≠ 0): returns `g` with
/// `f(g(t)) = t` modulo `t^order`.
pub fn revert(f: &Series, order: i64) -> Result<Series> {
    if f.get(0) != Some(Rational::zero()) || f.get(1).is_none_or(|c| c.is_zero()) {
        return Err(Error::DegenerateBranch("reversion needs a series with simple zero at the origin".into()));
    }
    if f.order() < order {
        return Err(Error::Precision(format!("reversion to order {order} needs input to that order")));
    }
    let df = f.derivative();
    let t = Series::var();
    let mut g = Series::new(vec![Rational::zero(), f.coeff(1).recip()], order.min(2));
    let mut prec = 2;
    while prec < order {
        prec = (2 * prec).min(order);
        let gg = padded(&g, prec);
        let r = f.truncate(prec).compose_with(&gg, None)?.sub(&t).truncate(prec);
        let d = df.truncate(prec).compose_with(&gg, None)?.truncate(prec);
        g = gg.sub(&r.try_div(&d)?);
    }
    Ok(g.truncate(order))
}

/// Solve a square system `F(x; s) = 0` for power series `x_i(s)` with
/// `x_i(0) = x0[i]`. `F` receives the unknowns and the series variable `s`
/// (passed as an argument so the Jacobian at `s = 0` can be probed). The
/// Jacobian at the origin must be invertible; each pass fixes one more
/// coefficient.
pub fn newton_system<F>(f: F, x0: &[Rational], order: i64) -> Result<Vec<Series>>
where
    F: Fn(&[Series], &Series) -> Result<Vec<Series>>,
{
    let n = x0.len();
    let zero_s = Series::zero();
    let base: Vec<Series> = x0.iter().map(|c| Series::constant(c.clone())).collect();
    let f0 = f(&base, &zero_s)?;
    if f0.len() != n {
        return Err(Error::Precondition("system must be square".into()));
    }
    for v in &f0 {
        if !v.truncate(1).is_known_zero() {
            return Err(Error::Precondition("seed does not solve the system at the origin".into()));
        }
    }
    let probe = Series::new(vec![Rational::zero(), Rational::from_integer(1.into())], 2);
    let mut jac = vec![vec![Rational::zero(); n]; n];
    for j in 0..n {
        let mut x = base.clone();
        x[j] = x[j].add(&probe);
        let fj = f(&x, &zero_s)?;
        for i in 0..n {
            jac[i][j] = fj[i].coeff(1);
        }
    }
    let jinv = invert_matrix(&jac).ok_or_else(|| Error::DegenerateBranch("singular Jacobian at the origin".into()))?;
    let mut x = base;
    let s = Series::var();
    for k in 1..order {
        let xs: Vec<Series> = x.iter().map(|xi| padded(xi, k + 1)).collect();
        let r = f(&xs, &s.truncate(k + 1))?;
        let rk: Vec<Rational> = r.iter().map(|ri| ri.get(k).unwrap_or_default()).collect();
        for (i, xi) in x.iter_mut().enumerate() {
            let mut delta = Rational::zero();
            for j in 0..n {
                delta += &jinv[i][j] * &rk[j];
            }
            *xi = padded(xi, k + 1).sub(&Series::monomial(delta, k));
        }
    }
    let xs: Vec<Series> = x.iter().map(|xi| padded(xi, order)).collect();
    let r = f(&xs, &s.truncate(order))?;
    if r.iter().any(|ri| !ri.truncate(order).is_known_zero()) {
        return Err(Error::Consistency("system residual did not vanish".into()));
    }
    Ok(xs)
}

/// Inverse of a square rational matrix by Gauss–Jordan elimination.
pub fn invert_matrix(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let one = Rational::from_integer(1.into());
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { one.clone() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..2 * n {
                    let sub = &factor * &a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rational::int;

    fn ut() -> (MPoly<Rational>, MPoly<Rational>) {
        (MPoly::var(0), MPoly::var(1))
    }

    #[test]
    fn cubic_branch_through_one() {
        let (a, t) = ut();
        let p = a.sub(&a.pow(3)).sub(&t.scale(&int(4)));
        let s = newton_branch(&p, &int(1), 8).unwrap();
        assert_eq!(s.coeff(0), int(1));
        assert_eq!(s.coeff(1), int(-2));
        let r = s.sub(&s.pow(3)).sub(&Series::var().scale(&int(4)));
        assert!(r.is_known_zero());
    }

    #[test]
    fn square_root_branch() {
        let (b, t) = ut();
        let p = b.pow(2).sub(&Ring::one()).add(&t.scale(&int(12)));
        let s = newton_branch(&p, &int(1), 6).unwrap();
        assert!(s.pow(2).add(&Series::var().scale(&int(12))).sub(&Series::one()).is_known_zero());
        assert_eq!(s.coeff(2), int(-18));
    }

    #[test]
    fn linear_branch() {
        let (u, t) = ut();
        let s = newton_branch(&u.sub(&t), &int(0), 5).unwrap();
        assert_eq!(s, Series::var().truncate(5));
    }

    #[test]
    fn degenerate_branch_is_reported() {
        let (u, t) = ut();
        let p = u.pow(2).sub(&t);
        assert!(matches!(newton_branch(&p, &int(0), 4), Err(Error::DegenerateBranch(_))));
        assert!(matches!(newton_branch(&p, &int(1), 4), Err(Error::Precondition(_))));
    }

    #[test]
    fn reversion_of_geometric() {
        // f = s/(1-s) has inverse t/(1+t)
        let f = Series::new(vec![int(0), int(1), int(1), int(1), int(1), int(1), int(1)], 7);
        let g = revert(&f, 7).unwrap();
        assert_eq!(g, Series::new(vec![int(0), int(1), int(-1), int(1), int(-1), int(1), int(-1)], 7));
    }

    #[test]
    fn coupled_system() {
        // x = s + y², y = 2s + x y
        let sol = newton_system(
            |x, s| {
                Ok(vec![
                    x[0].sub(s).sub(&x[1].mul(&x[1])),
                    x[1].sub(&s.scale(&int(2))).sub(&x[0].mul(&x[1])),
                ])
            },
            &[int(0), int(0)],
            6,
        )
        .unwrap();
        assert_eq!(sol[0].coeff(1), int(1));
        assert_eq!(sol[0].coeff(2), int(4));
        assert_eq!(sol[1].coeff(2), int(2));
    }
}
