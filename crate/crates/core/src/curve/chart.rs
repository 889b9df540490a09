//! Change of variable from the uniformizing parameter γ back to t.

use super::local::GSeries;
use crate::error::{Error, Result};
use crate::series::{revert, Rational, Ring, TruncatedSeries, EXACT};

pub type Series = TruncatedSeries<Rational>;

/// `t(γ)` is even in γ; `s(t) = γ²` is its reversion. Quantities even in γ
/// are carried over to t through `s`.
#[derive(Clone, Debug)]
pub struct GammaChart {
    s_of_t: Series,
    s_inv: Series,
    order: i64,
}

/// Coefficients of `f(γ) = h(γ²)`, or an error if `f` has an odd part.
pub fn even_part(f: &GSeries) -> Result<Series> {
    let mut coeffs = Vec::new();
    let lo = f.start().div_euclid(2);
    let end = f.end();
    let mut k = 2 * lo;
    while k < end {
        coeffs.push(f.get(k).unwrap_or_default());
        if let Some(c) = f.get(k + 1) {
            if !Ring::is_zero(&c) {
                return Err(Error::Consistency(format!("series in γ has an odd coefficient at γ^{}", k + 1)));
            }
        }
        k += 2;
    }
    let order = if f.is_exact() { EXACT } else { (f.order() + 1).div_euclid(2) };
    Ok(Series::laurent(lo, coeffs, order))
}

impl GammaChart {
    pub fn new(t_of_gamma: &GSeries, order: i64) -> Result<Self> {
        let tau = even_part(t_of_gamma)?;
        let s_of_t = revert(&tau, order)?;
        let s_inv = s_of_t
            .inv()
            .ok_or_else(|| Error::DegenerateBranch("γ² vanishes identically".into()))?;
        Ok(GammaChart { s_of_t, s_inv, order })
    }

    /// γ² as a series in t.
    pub fn gamma2(&self) -> &Series {
        &self.s_of_t
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Rewrite an even series in γ as a series in t, truncated to the chart
    /// order.
    pub fn to_t(&self, f: &GSeries) -> Result<Series> {
        let h = even_part(f)?;
        let out = h.compose_with(&self.s_of_t, Some(&self.s_inv))?;
        Ok(out.truncate(self.order))
    }
}
