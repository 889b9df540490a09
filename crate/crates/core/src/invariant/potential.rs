use std::collections::BTreeSet;

use num_bigint::BigInt;
use super::monomial::InvariantMonomial;
use crate::error::{Error, Result};
use crate::series::{format_rational, MPoly, Rational, Ring};

/// Polynomial in the symbolic couplings of a potential.
pub type CouplingPoly = MPoly<Rational>;

#[derive(Clone, Debug, PartialEq)]
pub struct Coupling {
    pub name: String,
    /// `None` keeps the coupling symbolic.
    pub value: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialTerm {
    pub monomial: InvariantMonomial,
    pub coupling: Coupling,
}

/// `V = Σ (t_Q / s_Q) Q` with each trace normalized by `1/N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    p: usize,
    terms: Vec<PotentialTerm>,
}

impl Potential {
    pub fn empty(p: usize) -> Self {
        Potential { p, terms: Vec::new() }
    }

    pub fn new(p: usize, terms: Vec<PotentialTerm>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for t in &terms {
            if t.monomial.degree() < 3 {
                return Err(Error::Precondition(format!("monomial {} has degree below 3", t.monomial)));
            }
            if t.monomial.max_color() as usize > p {
                return Err(Error::Precondition(format!("monomial {} uses a color above {p}", t.monomial)));
            }
            if !seen.insert(&t.monomial) {
                return Err(Error::Precondition(format!("monomial {} listed twice", t.monomial)));
            }
        }
        Ok(Potential { p, terms })
    }

    /// Shorthand for numeric couplings.
    pub fn numeric(p: usize, terms: Vec<(InvariantMonomial, &str, Rational)>) -> Result<Self> {
        Self::new(
            p,
            terms
                .into_iter()
                .map(|(monomial, name, v)| PotentialTerm { monomial, coupling: Coupling { name: name.into(), value: Some(v) } })
                .collect(),
        )
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn terms(&self) -> &[PotentialTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        self.terms.iter().map(|t| t.monomial.degree()).max().unwrap_or(0)
    }

    /// Names of the symbolic couplings, in order of first appearance. These
    /// index the variables of [`CouplingPoly`].
    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for t in &self.terms {
            if t.coupling.value.is_none() && !out.contains(&t.coupling.name) {
                out.push(t.coupling.name.clone());
            }
        }
        out
    }

    pub fn is_numeric(&self) -> bool {
        self.terms.iter().all(|t| t.coupling.value.is_some())
    }

    /// `t_Q` of term `i` as a coupling polynomial.
    pub fn coupling_poly(&self, i: usize) -> CouplingPoly {
        let c = &self.terms[i].coupling;
        match &c.value {
            Some(v) => CouplingPoly::constant(v.clone()),
            None => {
                let idx = self.symbols().iter().position(|s| *s == c.name).expect("symbol registered");
                CouplingPoly::var(idx)
            }
        }
    }

    /// `t_Q / s_Q` of term `i`.
    pub fn weight(&self, i: usize) -> CouplingPoly {
        let s = BigInt::from(self.terms[i].monomial.symmetry_factor());
        self.coupling_poly(i).scale(&Rational::new(1.into(), s))
    }

    /// For a single-matrix potential made of single traces, the coefficients
    /// `c_d` of `V(x) = Σ c_d x^d` (index = degree).
    pub fn one_matrix_polynomial(&self) -> Result<Vec<Rational>> {
        if self.p != 1 {
            return Err(Error::Unsupported("one-matrix polynomial of a multi-matrix potential".into()));
        }
        self.color_polynomial(1)
    }

    /// Coefficients of `V_c(x)` for a potential that is a sum of single traces
    /// of powers of individual colors; errors on mixed words or multi-traces.
    pub fn color_polynomial(&self, color: u8) -> Result<Vec<Rational>> {
        let mut coeffs = vec![Rational::zero(); self.max_degree() + 1];
        for t in &self.terms {
            let words = t.monomial.words();
            if words.len() != 1 {
                return Err(Error::Unsupported(format!("multi-trace term {}", t.monomial)));
            }
            let letters = words[0].letters();
            let first = letters[0];
            if letters.iter().any(|&c| c != first) {
                return Err(Error::Unsupported(format!("mixed word {} in a curve model", t.monomial)));
            }
            if first != color {
                continue;
            }
            let value = t
                .coupling
                .value
                .clone()
                .ok_or_else(|| Error::Unsupported(format!("symbolic coupling {} in a curve model", t.coupling.name)))?;
            coeffs[letters.len()] += value / Rational::from_integer(BigInt::from(t.monomial.symmetry_factor()));
        }
        Ok(coeffs)
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| match &t.coupling.value {
                Some(v) => format!("({}={})*{}", t.coupling.name, format_rational(v), t.monomial),
                None => format!("{}*{}", t.coupling.name, t.monomial),
            })
            .collect();
        parts.join(" + ")
    }
}
