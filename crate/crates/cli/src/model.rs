//! Model files: a versioned TOML document describing `C`, the potential,
//! truncation orders and budgets.
//!
//! ```toml
//! format = "formap-model/1"
//! p = 2
//! C = [["4", "-1"], ["-1", "4"]]
//!
//! [[term]]
//! monomial = "tr(1,1,1)"
//! coupling = "t3"
//! value = "1"
//!
//! [orders]
//! max_l = 3
//!
//! [budgets]
//! pairings = 5000000
//! ```

use std::path::Path;

use serde::Deserialize;

use formap::invariant::{parse_monomial, Coupling, Potential, PotentialTerm};
use formap::series::{parse_rational, Rational};
use formap::wick::GaussianModel;

use crate::error::CliError;

pub const FORMAT: &str = "formap-model/1";

#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn to_rational(&self) -> Result<Rational, formap::Error> {
        match self {
            Number::Int(n) => Ok(Rational::from_integer((*n).into())),
            Number::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    monomial: String,
    coupling: Option<String>,
    value: Option<Number>,
}

#[derive(Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
pub struct Orders {
    /// Largest `l` for the Wick route.
    pub max_l: Option<usize>,
    /// Truncation order of closed-form series.
    pub curve: Option<i64>,
    /// Truncation order of the recursion route.
    pub toprec: Option<i64>,
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct Budgets {
    #[serde(default = "default_pairings")]
    pub pairings: u64,
    #[serde(default = "default_max_order")]
    pub max_order: i64,
}

fn default_pairings() -> u64 {
    5_000_000
}

fn default_max_order() -> i64 {
    16
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { pairings: default_pairings(), max_order: default_max_order() }
    }
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawModel {
    format: String,
    p: usize,
    #[serde(rename = "C")]
    c: Vec<Vec<Number>>,
    #[serde(default, rename = "term")]
    terms: Vec<RawTerm>,
    #[serde(default)]
    orders: Orders,
    #[serde(default)]
    budgets: Budgets,
}

#[derive(Clone, Debug)]
pub struct ModelFile {
    pub gaussian: GaussianModel,
    pub potential: Potential,
    pub orders: Orders,
    pub budgets: Budgets,
}

impl ModelFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawModel = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if raw.format != FORMAT {
            return Err(CliError::Parse(format!("unsupported format `{}`, expected `{FORMAT}`", raw.format)));
        }
        if raw.p == 0 || raw.c.len() != raw.p || raw.c.iter().any(|r| r.len() != raw.p) {
            return Err(CliError::Parse(format!("C must be a {0}x{0} matrix", raw.p)));
        }
        let mut c = Vec::with_capacity(raw.p);
        for (i, row) in raw.c.iter().enumerate() {
            let mut out = Vec::with_capacity(raw.p);
            for (j, x) in row.iter().enumerate() {
                out.push(x.to_rational().map_err(|e| CliError::Parse(format!("C[{}][{}]: {e}", i + 1, j + 1)))?);
            }
            c.push(out);
        }
        for i in 0..raw.p {
            for j in 0..i {
                if c[i][j] != c[j][i] {
                    return Err(CliError::Parse(format!("C is not symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        let gaussian = GaussianModel::new(c).map_err(|e| CliError::Parse(format!("C: {e}")))?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for (i, t) in raw.terms.iter().enumerate() {
            let monomial = parse_monomial(&t.monomial, raw.p).map_err(|e| CliError::Parse(format!("term {} `{}`: {e}", i + 1, t.monomial)))?;
            let value = t
                .value
                .as_ref()
                .map(Number::to_rational)
                .transpose()
                .map_err(|e| CliError::Parse(format!("term {} value: {e}", i + 1)))?;
            let name = t.coupling.clone().unwrap_or_else(|| format!("g{}", i + 1));
            terms.push(PotentialTerm { monomial, coupling: Coupling { name, value } });
        }
        let potential = Potential::new(raw.p, terms).map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(ModelFile { gaussian, potential, orders: raw.orders, budgets: raw.budgets })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ISING: &str = r#"
format = "formap-model/1"
p = 2
C = [[4, -1], [-1, 4]]

[[term]]
monomial = "tr(1,1,1)"
value = 1

[[term]]
monomial = "tr(2,2,2)"
value = "1"
"#;

    #[test]
    fn parses_ising() {
        let m = ModelFile::parse(ISING).unwrap();
        assert_eq!(m.gaussian.p(), 2);
        assert_eq!(m.potential.terms().len(), 2);
        assert_eq!(m.budgets.pairings, 5_000_000);
        assert!(m.orders.max_l.is_none());
    }

    #[test]
    fn rejects_asymmetric_covariance() {
        let text = ISING.replace("[[4, -1], [-1, 4]]", "[[4, -1], [2, 4]]");
        assert!(matches!(ModelFile::parse(&text), Err(CliError::Parse(m)) if m.contains("symmetric")));
    }

    #[test]
    fn monomial_errors_carry_location() {
        let text = ISING.replace("tr(2,2,2)", "tr(2,,2)");
        match ModelFile::parse(&text) {
            Err(CliError::Parse(m)) => assert!(m.contains("term 2") && m.contains("at 5"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_other_versions() {
        let text = ISING.replace("formap-model/1", "formap-model/9");
        assert!(matches!(ModelFile::parse(&text), Err(CliError::Parse(_))));
    }

    #[test]
    fn symbolic_couplings_are_kept() {
        let text = ISING.replace("value = 1\n", "coupling = \"a\"\n");
        let m = ModelFile::parse(&text).unwrap();
        assert!(!m.potential.is_numeric());
    }
}
