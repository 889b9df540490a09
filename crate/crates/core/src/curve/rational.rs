//! Rational functions of the uniformizing coordinate and their residues.

use super::local::{eps_inv, EpsSeries, GSeries, LocalPoint, ZPoly};
use crate::error::{Error, Result};
use crate::series::{Ring, EXACT};

/// `num(z)/den(z)` with Laurent polynomials in z over γ-series.
#[derive(Clone, Debug)]
pub struct RationalFunctionZ {
    num: ZPoly,
    den: ZPoly,
}

/// Where a residue is taken.
#[derive(Clone, Debug)]
pub enum ZPoint {
    Infinity,
    Zero,
    At(GSeries),
}

impl RationalFunctionZ {
    pub fn new(num: ZPoly, den: ZPoly) -> Result<Self> {
        if den.is_empty() {
            return Err(Error::Precondition("denominator vanishes identically".into()));
        }
        Ok(RationalFunctionZ { num, den })
    }

    pub fn laurent(p: ZPoly) -> Self {
        RationalFunctionZ { num: p, den: ZPoly::constant(GSeries::one()) }
    }

    pub fn num(&self) -> &ZPoly {
        &self.num
    }

    pub fn den(&self) -> &ZPoly {
        &self.den
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalFunctionZ { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalFunctionZ {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    /// Relative expansion order that reaches the residue coefficient at any
    /// of the points.
    fn span(&self) -> i64 {
        let w = |p: &ZPoly| p.max_power().unwrap_or(0) - p.min_power().unwrap_or(0);
        w(&self.num) + w(&self.den) + self.num.max_power().unwrap_or(0).abs() + self.num.min_power().unwrap_or(0).abs()
    }
}

fn exact(p: &ZPoly) -> EpsSeries {
    let Some(lo) = p.min_power() else {
        return EpsSeries::zero();
    };
    let hi = p.max_power().unwrap_or(lo);
    EpsSeries::laurent(lo, (lo..=hi).map(|k| p.coeff(k)).collect(), EXACT)
}

/// Residue of the form `f(z) dz`.
pub fn residue_at(f: &RationalFunctionZ, point: &ZPoint) -> Result<GSeries> {
    let order = f.span() + 4;
    let (num, den, flip) = match point {
        ZPoint::Zero => (exact(&f.num), exact(&f.den), false),
        ZPoint::Infinity => (exact(&f.num.invert_var()), exact(&f.den.invert_var()), true),
        ZPoint::At(a) => {
            let points = [a.clone()];
            let p = LocalPoint::new(0, EpsSeries::var(), &points, order);
            (p.eval(&f.num)?, p.eval(&f.den)?, false)
        }
    };
    let ratio = num.mul(&eps_inv(&den.truncate(den.start() + order + 2))?);
    if flip {
        ratio
            .get(1)
            .map(|c| c.neg())
            .ok_or_else(|| Error::Precision("expansion at ∞ too short".into()))
    } else {
        ratio.get(-1).ok_or_else(|| Error::Precision("local expansion too short".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::int;

    fn z(k: i64) -> ZPoly {
        ZPoly::monomial(GSeries::one(), k)
    }

    #[test]
    fn inverse_z_at_zero_and_infinity() {
        let f = RationalFunctionZ::laurent(z(-1));
        assert_eq!(residue_at(&f, &ZPoint::Zero).unwrap(), GSeries::one());
        assert_eq!(residue_at(&f, &ZPoint::Infinity).unwrap(), GSeries::one().neg());
    }

    #[test]
    fn simple_pole_at_a_point() {
        let one = ZPoly::constant(GSeries::one());
        let den = z(1).sub(&ZPoly::constant(GSeries::constant(int(2))));
        let f = RationalFunctionZ::new(one, den).unwrap();
        let a = GSeries::constant(int(2));
        assert_eq!(residue_at(&f, &ZPoint::At(a)).unwrap(), GSeries::one());
        assert!(residue_at(&f, &ZPoint::Zero).unwrap().is_known_zero());
    }

    #[test]
    fn double_pole_with_numerator() {
        let num = z(2);
        let d = z(1).sub(&ZPoly::constant(GSeries::constant(int(1))));
        let f = RationalFunctionZ::new(num, d.mul(&d)).unwrap();
        let r = residue_at(&f, &ZPoint::At(GSeries::one())).unwrap();
        assert_eq!(r, GSeries::constant(int(2)));
    }

    #[test]
    fn residues_sum_to_zero() {
        let num = z(3).add(&ZPoly::constant(GSeries::constant(int(5))));
        let den = z(2).mul(&z(1).sub(&ZPoly::constant(GSeries::constant(int(3)))));
        let f = RationalFunctionZ::new(num, den).unwrap();
        let total = residue_at(&f, &ZPoint::Zero)
            .unwrap()
            .add(&residue_at(&f, &ZPoint::At(GSeries::constant(int(3)))).unwrap())
            .add(&residue_at(&f, &ZPoint::Infinity).unwrap());
        assert!(total.is_known_zero());
    }
}
