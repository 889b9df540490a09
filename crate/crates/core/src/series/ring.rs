use std::fmt::Debug;

use num_traits::{One, Zero};

use super::rational::Rational;

/// Commutative ring with a Q-algebra structure (`scale`), the coefficient
/// contract for every series and polynomial type in the crate.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, r: &Rational) -> Self;

    fn add_assign(&mut self, other: &Self) {
        *self = self.add(other);
    }

    fn from_rational(r: &Rational) -> Self {
        Self::one().scale(r)
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Rings in which (some) elements can be inverted.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}
