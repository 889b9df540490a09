use std::collections::BTreeMap;

use serde::Serialize;

use super::engine::NSeries;
use crate::error::{Error, Result};
use crate::invariant::CouplingPoly;
use crate::series::{format_rational, Rational, Ring, TruncatedSeries};

/// `F_l = Σ_g N^{2−2g} F_{l,g}` for `1 ≤ l ≤ max_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeEnergyTable {
    max_l: usize,
    entries: BTreeMap<(usize, usize), CouplingPoly>,
    symbols: Vec<String>,
}

#[derive(Serialize)]
pub struct TableEntry {
    pub l: usize,
    pub g: usize,
    pub value: String,
}

#[derive(Serialize)]
pub struct TableRecord {
    pub max_l: usize,
    pub entries: Vec<TableEntry>,
}

impl FreeEnergyTable {
    /// Split a free-energy series by genus, rejecting any `N` power that is
    /// not `2 − 2g` with `0 ≤ g ≤ l + 1`.
    pub fn from_series(f: &NSeries, max_l: usize, symbols: Vec<String>) -> Result<Self> {
        if !f.coeff(0).is_zero() {
            return Err(Error::Consistency("free energy has a constant term".into()));
        }
        let mut entries = BTreeMap::new();
        for l in 1..=max_l {
            for (power, c) in f.coeff(l as i64).terms() {
                if power > 2 || power % 2 != 0 || power < -2 * l as i64 {
                    return Err(Error::Consistency(format!("F_{l} has a term N^{power}, not of the form N^(2-2g) with g <= {}", l + 1)));
                }
                entries.insert((l, ((2 - power) / 2) as usize), c.clone());
            }
        }
        Ok(FreeEnergyTable { max_l, entries, symbols })
    }

    pub fn max_l(&self) -> usize {
        self.max_l
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn get(&self, l: usize, g: usize) -> CouplingPoly {
        self.entries.get(&(l, g)).cloned().unwrap_or_else(CouplingPoly::zero)
    }

    /// Value of `F_{l,g}` when the couplings are numeric.
    pub fn numeric(&self, l: usize, g: usize) -> Option<Rational> {
        let v = self.get(l, g);
        v.is_constant().then(|| v.constant_term())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &CouplingPoly)> {
        self.entries.iter()
    }

    /// `Σ_l t^{l+2−2g} F_{l,g}` (equal to `−F^(g)`), exact through
    /// `t^{max_l+2−2g}`. Needs numeric couplings.
    pub fn genus_series(&self, g: usize) -> Result<TruncatedSeries> {
        let shift = 2 - 2 * g as i64;
        let mut coeffs = Vec::new();
        for l in 0..=self.max_l {
            let v = self.get(l, g);
            if !v.is_constant() {
                return Err(Error::Unsupported("genus series of a table with symbolic couplings".into()));
            }
            coeffs.push(v.constant_term());
        }
        Ok(TruncatedSeries::laurent(shift, coeffs, self.max_l as i64 + 1 + shift))
    }

    pub fn to_record(&self) -> TableRecord {
        TableRecord {
            max_l: self.max_l,
            entries: self
                .entries
                .iter()
                .map(|(&(l, g), v)| TableEntry { l, g, value: v.fmt_with(&self.symbols, format_rational) })
                .collect(),
        }
    }
}
