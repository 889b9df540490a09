//! Gaussian moments, the coefficients `A_k`, the partition function `Z`, the
//! free energy `F = log Z` and formal expectation values.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::contract::Contractor;
use super::model::GaussianModel;
use super::pairing::{sweep, HalfEdgeLayout, PairingDiagram};
use super::table::FreeEnergyTable;
use crate::error::{Error, Result};
use crate::invariant::{CouplingPoly, InvariantMonomial, Potential};
use crate::series::{rational::factorial, LaurentPolyN, Rational, Ring, TruncatedSeries};

/// Series in `t` whose coefficients are Laurent polynomials in `N` over the
/// coupling polynomials.
pub type NSeries = TruncatedSeries<LaurentPolyN<CouplingPoly>>;

/// How Gaussian moments are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Memoized recursive contraction of trace products.
    Contract,
    /// Explicit sum over perfect matchings (budgeted), checking the Euler
    /// characteristic of every matching.
    Sweep,
    /// Sweep small products, contract the rest.
    Auto,
}

/// Products at or below this many matchings are swept under [`Method::Auto`].
pub const AUTO_SWEEP_LIMIT: u64 = 10_395;

/// `<Π (1/N)Tr(w)>` for a Gaussian model: a Laurent polynomial in `N`
/// multiplying `t^edges`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianMoment {
    pub edges: usize,
    pub value: LaurentPolyN,
}

pub struct WickEngine {
    model: GaussianModel,
    potential: Potential,
    method: Method,
    budget: Option<u64>,
    contractor: Contractor,
    pairings_swept: u64,
    z_cache: Option<NSeries>,
}

/// A multiset of potential terms: `counts[i]` copies of term `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermProduct {
    pub counts: Vec<usize>,
}

impl TermProduct {
    pub fn size(&self) -> usize {
        self.counts.iter().sum()
    }
}

impl WickEngine {
    pub fn new(model: GaussianModel, potential: Potential) -> Result<Self> {
        if potential.p() != model.p() {
            return Err(Error::Precondition(format!(
                "potential uses {} colors but the Gaussian model has {}",
                potential.p(),
                model.p()
            )));
        }
        let contractor = Contractor::new(&model);
        Ok(WickEngine { model, potential, method: Method::Auto, budget: None, contractor, pairings_swept: 0, z_cache: None })
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    /// Maximum number of matchings a single swept product may have.
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn model(&self) -> &GaussianModel {
        &self.model
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn pairings_swept(&self) -> u64 {
        self.pairings_swept
    }

    /// Gaussian moment of a product of normalized traces.
    pub fn gaussian_moment(&mut self, traces: &[Vec<u8>]) -> Result<GaussianMoment> {
        let letters: usize = traces.iter().map(Vec::len).sum();
        let layout = HalfEdgeLayout::from_traces(traces);
        let raw = self.raw_moment(traces, &layout)?;
        Ok(GaussianMoment { edges: letters / 2, value: raw.shift(-(traces.len() as i64)) })
    }

    /// Un-normalized `<Π Tr(w)>` (implicit `t^E`), by the configured method.
    fn raw_moment(&mut self, traces: &[Vec<u8>], layout: &HalfEdgeLayout) -> Result<LaurentPolyN> {
        let letters = layout.num_half_edges();
        if letters % 2 == 1 {
            return Ok(LaurentPolyN::zero());
        }
        let count = layout.pairing_count();
        let use_sweep = match self.method {
            Method::Contract => false,
            Method::Sweep => true,
            Method::Auto => count <= BigUint::from(AUTO_SWEEP_LIMIT.min(self.budget.unwrap_or(u64::MAX))),
        };
        if use_sweep {
            self.check_budget(&count)?;
            self.pairings_swept += count.to_u64().unwrap_or(u64::MAX);
            sweep_moment(&self.model, layout)
        } else {
            Ok(self.contractor.moment(traces))
        }
    }

    fn check_budget(&self, count: &BigUint) -> Result<()> {
        if let Some(b) = self.budget {
            if *count > BigUint::from(b) {
                return Err(Error::BudgetExceeded { required: count.to_string(), budget: b });
            }
        }
        Ok(())
    }

    /// All products of `k` potential terms, visited with their total degree.
    pub fn products(&self, k: usize) -> Vec<TermProduct> {
        let n = self.potential.terms().len();
        let mut out = Vec::new();
        let mut counts = vec![0; n];
        fn rec(i: usize, left: usize, counts: &mut Vec<usize>, out: &mut Vec<TermProduct>) {
            if i == counts.len() {
                if left == 0 {
                    out.push(TermProduct { counts: counts.clone() });
                }
                return;
            }
            for c in (0..=left).rev() {
                counts[i] = c;
                rec(i + 1, left - c, counts, out);
            }
            counts[i] = 0;
        }
        if n == 0 {
            if k == 0 {
                out.push(TermProduct { counts });
            }
            return out;
        }
        rec(0, k, &mut counts, &mut out);
        out
    }

    pub fn product_degree(&self, prod: &TermProduct) -> usize {
        prod.counts.iter().zip(self.potential.terms()).map(|(c, t)| c * t.monomial.degree()).sum()
    }

    /// `Π (t_Q/s_Q)^{m_Q} / m_Q!`.
    pub fn product_weight(&self, prod: &TermProduct) -> CouplingPoly {
        let mut w = CouplingPoly::one();
        for (i, &m) in prod.counts.iter().enumerate() {
            if m > 0 {
                let f = Rational::from_integer(factorial(m as u64));
                w = w.mul(&self.potential.weight(i).pow(m as u32)).scale(&f.recip());
            }
        }
        w
    }

    pub fn product_instances(&self, prod: &TermProduct) -> Vec<&InvariantMonomial> {
        let mut out = Vec::new();
        for (i, &m) in prod.counts.iter().enumerate() {
            for _ in 0..m {
                out.push(&self.potential.terms()[i].monomial);
            }
        }
        out
    }

    /// `N^{2k} t^{-k}/k! <(extra) V^k>` restricted to powers `t^l`, `l < order`,
    /// where `extra` is a product of un-normalized traces (implicitly its own
    /// instances). Returns `(l, N-polynomial)` contributions.
    fn accumulate(&mut self, extra: &[Vec<u8>], k: usize, order: i64, out: &mut BTreeMap<i64, LaurentPolyN<CouplingPoly>>) -> Result<()> {
        let extra_letters: usize = extra.iter().map(Vec::len).sum();
        for prod in self.products(k) {
            let letters = extra_letters + self.product_degree(&prod);
            if letters % 2 == 1 {
                continue;
            }
            let l = (letters / 2) as i64 - k as i64;
            if l >= order {
                continue;
            }
            let instances = self.product_instances(&prod);
            let mut traces: Vec<Vec<u8>> = extra.to_vec();
            let mut r_total = 0i64;
            let mut layout_inst: Vec<InvariantMonomial> = Vec::new();
            for q in &instances {
                r_total += q.num_traces() as i64;
                for w in q.words() {
                    traces.push(w.letters().to_vec());
                }
                layout_inst.push((*q).clone());
            }
            let layout = if extra.is_empty() {
                HalfEdgeLayout::from_instances(&instances)
            } else {
                let mut with_extra: Vec<InvariantMonomial> = Vec::new();
                for w in extra {
                    if w.is_empty() {
                        continue;
                    }
                    with_extra.push(InvariantMonomial::canonicalize(std::slice::from_ref(w), self.model.p())?);
                }
                with_extra.extend(layout_inst);
                let refs: Vec<&InvariantMonomial> = with_extra.iter().collect();
                HalfEdgeLayout::from_instances(&refs)
            };
            // empty extra traces are Tr 1 = N
            let empties = extra.iter().filter(|w| w.is_empty()).count() as i64;
            let nonempty: Vec<Vec<u8>> = traces.into_iter().filter(|w| !w.is_empty()).collect();
            let raw = self.raw_moment(&nonempty, &layout)?.shift(empties + 2 * k as i64 - r_total);
            let weight = self.product_weight(&prod);
            let term = raw.map(|r| weight.scale(r));
            out.entry(l).or_insert_with(LaurentPolyN::zero).add_assign(&term);
        }
        Ok(())
    }

    /// `A_k` as a series in `t`, to the given order.
    pub fn compute_a_k(&mut self, k: usize, order: i64) -> Result<NSeries> {
        let mut acc = BTreeMap::new();
        self.accumulate(&[], k, order, &mut acc)?;
        Ok(series_from_map(acc, order))
    }

    /// `Z = Σ_j Z_j t^j` through `t^{order-1}`.
    pub fn compute_z(&mut self, order: i64) -> Result<NSeries> {
        if let Some(z) = &self.z_cache {
            if z.order() >= order {
                return Ok(z.truncate(order));
            }
        }
        let mut acc = BTreeMap::new();
        let kmax = if self.potential.is_empty() { 0 } else { 2 * (order.max(1) - 1) as usize };
        for k in 0..=kmax {
            self.accumulate(&[], k, order, &mut acc)?;
        }
        let z = series_from_map(acc, order);
        self.z_cache = Some(z.clone());
        Ok(z)
    }

    /// `F = log Z` through `t^{max_l}`, split by genus.
    pub fn compute_f(&mut self, max_l: usize) -> Result<FreeEnergyTable> {
        let z = self.compute_z(max_l as i64 + 1)?;
        let f = z.log()?;
        FreeEnergyTable::from_series(&f, max_l, self.potential.symbols())
    }

    /// Un-normalized expectation `<Π Tr(w)>` through `t^{order-1}`.
    pub fn expectation_raw(&mut self, traces: &[Vec<u8>], order: i64) -> Result<NSeries> {
        let mut acc = BTreeMap::new();
        let letters: usize = traces.iter().map(Vec::len).sum();
        let kmax = if self.potential.is_empty() { 0 } else { (2 * order - letters as i64).max(0) as usize };
        for k in 0..=kmax {
            self.accumulate(traces, k, order, &mut acc)?;
        }
        let num = series_from_map(acc, order);
        let z = self.compute_z(order)?;
        Ok(num.mul(&z.inv_unit()?))
    }

    /// Formal expectation of a normalized invariant monomial.
    pub fn formal_expectation(&mut self, q: &InvariantMonomial, order: i64) -> Result<NSeries> {
        let traces: Vec<Vec<u8>> = q.words().iter().map(|w| w.letters().to_vec()).collect();
        let raw = self.expectation_raw(&traces, order)?;
        Ok(raw.map_coeffs(|c| c.shift(-(q.num_traces() as i64))))
    }
}

fn series_from_map(acc: BTreeMap<i64, LaurentPolyN<CouplingPoly>>, order: i64) -> NSeries {
    let mut coeffs = vec![LaurentPolyN::zero(); order.max(0) as usize];
    for (l, v) in acc {
        if l >= 0 && l < order {
            coeffs[l as usize] = v;
        }
    }
    NSeries::new(coeffs, order)
}

/// Moment by explicit sweep, asserting for every matching that the `N`
/// power of the contraction matches the Euler characteristic of the glued
/// surface.
pub fn sweep_moment(model: &GaussianModel, layout: &HalfEdgeLayout) -> Result<LaurentPolyN> {
    let p = model.p();
    let c_inv = model.c_inv_matrix();
    let allowed = |a: usize, b: usize| !c_inv[layout.color(a) as usize - 1][layout.color(b) as usize - 1].is_zero();
    type Acc = (HashMap<(usize, Vec<u32>), u64>, u64);
    let (hist, violations): Acc = sweep(
        layout,
        &allowed,
        || (HashMap::new(), 0),
        |acc: &mut Acc, partner| {
            let d = PairingDiagram::new(layout, partner);
            let loops = d.index_loops();
            let exponent = loops as i64 - d.num_edges() as i64 - layout.num_words() as i64;
            if exponent + 2 * layout.num_instances() as i64 != d.euler_characteristic() {
                acc.1 += 1;
            }
            let mut key = vec![0u32; p * p];
            for (h, &q) in partner.iter().enumerate() {
                if h < q {
                    let (a, b) = (layout.color(h) as usize - 1, layout.color(q) as usize - 1);
                    key[a.min(b) * p + a.max(b)] += 1;
                }
            }
            *acc.0.entry((loops, key)).or_default() += 1;
        },
        |mut a, b| {
            for (k, v) in b.0 {
                *a.0.entry(k).or_default() += v;
            }
            (a.0, a.1 + b.1)
        },
    );
    if violations > 0 {
        return Err(Error::Consistency(format!("{violations} matchings violate the Euler characteristic bookkeeping")));
    }
    let edges = (layout.num_half_edges() / 2) as i64;
    let mut out = LaurentPolyN::zero();
    for ((loops, key), count) in hist {
        let mut w = Rational::from_integer(count.into());
        for (idx, &e) in key.iter().enumerate() {
            if e > 0 {
                w *= num_traits::pow(c_inv[idx / p][idx % p].clone(), e as usize);
            }
        }
        out.add_term(loops as i64 - edges, &w);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant::{parse_monomial, Coupling, PotentialTerm};
    use crate::series::{int, rat};

    fn n_poly(terms: &[(i64, Rational)]) -> LaurentPolyN {
        LaurentPolyN::from_terms(terms.iter().cloned())
    }

    fn symbolic(p: usize, terms: &[(&str, &str)]) -> Potential {
        Potential::new(
            p,
            terms
                .iter()
                .map(|(m, name)| PotentialTerm {
                    monomial: parse_monomial(m, p).unwrap(),
                    coupling: Coupling { name: name.to_string(), value: None },
                })
                .collect(),
        )
        .unwrap()
    }

    fn unit_engine(v: Potential) -> WickEngine {
        WickEngine::new(GaussianModel::scalar(int(1)).unwrap(), v).unwrap()
    }

    #[test]
    fn small_moments() {
        for method in [Method::Contract, Method::Sweep] {
            let mut e = WickEngine::new(GaussianModel::scalar(int(5)).unwrap(), Potential::empty(1)).unwrap().with_method(method);
            assert!(e.gaussian_moment(&[vec![1; 3]]).unwrap().value.is_zero());
            let two = e.gaussian_moment(&[vec![1, 1]]).unwrap();
            assert_eq!(two, GaussianMoment { edges: 1, value: n_poly(&[(0, rat(1, 5))]) });
            let mut e = unit_engine(Potential::empty(1)).with_method(method);
            let four = e.gaussian_moment(&[vec![1; 4]]).unwrap();
            assert_eq!(four, GaussianMoment { edges: 2, value: n_poly(&[(0, int(2)), (-2, int(1))]) });
        }
    }

    #[test]
    fn first_coefficients_of_quartic() {
        let mut e = unit_engine(symbolic(1, &[("tr(1,1,1,1)", "t4")]));
        let t4 = CouplingPoly::var(0);
        let a0 = e.compute_a_k(0, 3).unwrap();
        assert_eq!(a0.coeff(0), LaurentPolyN::one());
        let a1 = e.compute_a_k(1, 3).unwrap();
        let expected = LaurentPolyN::from_terms([(2, t4.scale(&rat(1, 2))), (0, t4.scale(&rat(1, 4)))]);
        assert_eq!(a1.coeff(1), expected);
        assert!(a1.coeff(0).is_zero() && a1.coeff(2).is_zero());
        let z = e.compute_z(3).unwrap();
        assert_eq!(z.coeff(0), LaurentPolyN::one());
        assert_eq!(z.coeff(1), expected);
        let f = e.compute_f(2).unwrap();
        assert_eq!(f.get(1, 0), t4.scale(&rat(1, 2)));
        assert_eq!(f.get(1, 1), t4.scale(&rat(1, 4)));
    }

    #[test]
    fn cubic_first_free_energy_has_two_genera() {
        let mut e = unit_engine(symbolic(1, &[("tr(1,1,1)", "t3")]));
        let f = e.compute_f(1).unwrap();
        let t3sq = CouplingPoly::var(0).pow(2);
        assert_eq!(f.get(1, 0), t3sq.scale(&rat(2, 3)));
        assert_eq!(f.get(1, 1), t3sq.scale(&rat(1, 6)));
        assert!(f.get(1, 2).is_zero());
    }

    #[test]
    fn empty_potential_has_trivial_partition_function() {
        let mut e = unit_engine(Potential::empty(1));
        let z = e.compute_z(4).unwrap();
        assert_eq!(z.coeff(0), LaurentPolyN::one());
        for j in 1..4 {
            assert!(z.coeff(j).is_zero());
        }
        let f = e.compute_f(3).unwrap();
        assert_eq!(f.entries().count(), 0);
    }

    #[test]
    fn expectations() {
        let mut e = unit_engine(Potential::empty(1));
        let one = e.expectation_raw(&[], 3).unwrap();
        assert_eq!(one.coeff(0), LaurentPolyN::one());
        let q = parse_monomial("tr(1,1)", 1).unwrap();
        let two = e.formal_expectation(&q, 3).unwrap();
        assert!(two.coeff(0).is_zero());
        assert_eq!(two.coeff(1), LaurentPolyN::one());
        let mut e = unit_engine(symbolic(1, &[("tr(1,1,1,1)", "t4")]));
        let q4 = parse_monomial("tr(1,1,1,1)", 1).unwrap();
        let four = e.formal_expectation(&q4, 4).unwrap();
        assert!(four.coeff(0).is_zero());
        assert!(!four.coeff(2).is_zero());
    }

    #[test]
    fn sweep_budget_is_enforced() {
        let mut e = unit_engine(Potential::empty(1)).with_method(Method::Sweep).with_budget(105);
        assert!(e.gaussian_moment(&[vec![1; 8]]).is_ok());
        match e.gaussian_moment(&[vec![1; 10]]) {
            Err(Error::BudgetExceeded { required, budget }) => {
                assert_eq!(required, "945");
                assert_eq!(budget, 105);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mismatched_color_counts_rejected() {
        let v = symbolic(2, &[("tr(1,2,2)", "a")]);
        assert!(WickEngine::new(GaussianModel::scalar(int(1)).unwrap(), v).is_err());
    }
}
