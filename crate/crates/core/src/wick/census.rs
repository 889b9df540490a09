//! Isomorphism classes of glued surfaces, with automorphism counts from
//! orbit–stabilizer under relabelings of the polygon collection.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::engine::{TermProduct, WickEngine};
use super::pairing::{for_each_pairing, rank, HalfEdgeLayout, PairingDiagram};
use crate::error::{Error, Result};
use crate::invariant::{CouplingPoly, InvariantMonomial};
use crate::series::{format_rational, LaurentPolyN, Rational, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct CensusClass {
    pub product: TermProduct,
    /// Smallest-rank matching of the class.
    pub representative: Vec<usize>,
    pub rank: u64,
    pub automorphisms: u64,
    pub euler_characteristic: i64,
    pub connected: bool,
    /// Edge counts per unordered color pair.
    pub edge_colors: BTreeMap<(u8, u8), usize>,
    /// Power of `t`: edges minus polygons-with-centers.
    pub l: usize,
}

impl CensusClass {
    /// `N^χ Π t_Q^{m_Q} Π (C⁻¹)_{ij}^{E_ij}` written out, with coupling names.
    pub fn weight_monomial(&self, engine: &WickEngine) -> String {
        let mut parts = vec![format!("N^{}", self.euler_characteristic)];
        for (i, &m) in self.product.counts.iter().enumerate() {
            if m > 0 {
                let name = &engine.potential().terms()[i].coupling.name;
                parts.push(if m == 1 { name.clone() } else { format!("{name}^{m}") });
            }
        }
        for (&(a, b), &e) in &self.edge_colors {
            parts.push(format!("Cinv[{a},{b}]^{e}"));
        }
        parts.join(" * ")
    }

    /// `N^χ Π t_Q^{m_Q} Π (C⁻¹)^{E} / #Aut` as a Laurent polynomial in `N`
    /// over the couplings.
    pub fn contribution(&self, engine: &WickEngine) -> LaurentPolyN<CouplingPoly> {
        let mut w = CouplingPoly::one();
        for (i, &m) in self.product.counts.iter().enumerate() {
            if m > 0 {
                w = w.mul(&engine.potential().coupling_poly(i).pow(m as u32));
            }
        }
        let mut r = Rational::from_integer(1.into()) / Rational::from_integer(self.automorphisms.into());
        for (&(a, b), &e) in &self.edge_colors {
            r *= num_traits::pow(engine.model().c_inv(a, b).clone(), e);
        }
        LaurentPolyN::monomial(w.scale(&r), self.euler_characteristic)
    }
}

/// Relabeling group of a product of monomial instances, as permutations of
/// half-edges: equal instances are permuted and each instance is mapped by
/// its own symmetries (permuting equal words, rotating periodic words).
pub fn relabeling_group(instances: &[&InvariantMonomial]) -> Vec<Vec<usize>> {
    let mut offsets = Vec::with_capacity(instances.len());
    let mut n = 0;
    for q in instances {
        offsets.push(n);
        n += q.degree();
    }
    let mut group: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut i = 0;
    while i < instances.len() {
        let mut j = i;
        while j < instances.len() && instances[j] == instances[i] {
            j += 1;
        }
        let local = monomial_symmetries(instances[i]);
        let members: Vec<usize> = (i..j).collect();
        let mut factor: Vec<Vec<usize>> = Vec::new();
        for perm in permutations(members.len()) {
            let mut choice = vec![0usize; members.len()];
            loop {
                let mut g: Vec<usize> = (0..n).collect();
                for (slot, &inst) in members.iter().enumerate() {
                    let target = members[perm[slot]];
                    let a = &local[choice[slot]];
                    for (x, &y) in a.iter().enumerate() {
                        g[offsets[inst] + x] = offsets[target] + y;
                    }
                }
                factor.push(g);
                let mut pos = 0;
                loop {
                    if pos == choice.len() {
                        break;
                    }
                    choice[pos] += 1;
                    if choice[pos] < local.len() {
                        break;
                    }
                    choice[pos] = 0;
                    pos += 1;
                }
                if pos == choice.len() {
                    break;
                }
            }
        }
        let mut next = Vec::with_capacity(group.len() * factor.len());
        for g in &group {
            for f in &factor {
                next.push(g.iter().map(|&x| f[x]).collect());
            }
        }
        group = next;
        i = j;
    }
    group
}

/// Symmetries of one monomial as permutations of its letter positions.
fn monomial_symmetries(q: &InvariantMonomial) -> Vec<Vec<usize>> {
    let words = q.words();
    let mut starts = Vec::new();
    let mut n = 0;
    for w in words {
        starts.push(n);
        n += w.len();
    }
    let mut out = Vec::new();
    for perm in permutations(words.len()) {
        if (0..words.len()).any(|r| words[perm[r]] != words[r]) {
            continue;
        }
        let shifts: Vec<Vec<usize>> = words
            .iter()
            .map(|w| {
                let l = w.letters();
                (0..l.len()).filter(|&s| (0..l.len()).all(|i| l[(i + s) % l.len()] == l[i])).collect()
            })
            .collect();
        let mut choice = vec![0usize; words.len()];
        loop {
            let mut g = vec![0; n];
            for r in 0..words.len() {
                let len = words[r].len();
                let s = shifts[r][choice[r]];
                for i in 0..len {
                    g[starts[r] + i] = starts[perm[r]] + (i + s) % len;
                }
            }
            out.push(g);
            let mut pos = 0;
            while pos < choice.len() {
                choice[pos] += 1;
                if choice[pos] < shifts[pos].len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == choice.len() {
                break;
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

fn conjugate(g: &[usize], partner: &[usize]) -> Vec<usize> {
    let mut out = vec![0; partner.len()];
    for (x, &y) in partner.iter().enumerate() {
        out[g[x]] = g[y];
    }
    out
}

/// All isomorphism classes of surfaces with `t`-power `l` (connected ones
/// only when `connected_only`). Each product of monomials is swept in full,
/// so the budget applies to its number of matchings.
pub fn map_census(engine: &WickEngine, l: usize, connected_only: bool, budget: u64) -> Result<Vec<CensusClass>> {
    let mut classes = Vec::new();
    if engine.potential().is_empty() {
        return Ok(classes);
    }
    let c_inv = engine.model().c_inv_matrix();
    for k in 1..=2 * l {
        for prod in engine.products(k) {
            let deg = engine.product_degree(&prod);
            if deg % 2 == 1 || deg / 2 != l + k {
                continue;
            }
            let instances = engine.product_instances(&prod);
            let layout = HalfEdgeLayout::from_instances(&instances);
            let count = layout.pairing_count();
            if count > BigUint::from(budget) {
                return Err(Error::BudgetExceeded { required: count.to_string(), budget });
            }
            let total = count.to_u64().expect("within budget");
            let group = relabeling_group(&instances);
            let order = group.len() as u64;
            let allowed = |a: usize, b: usize| !c_inv[layout.color(a) as usize - 1][layout.color(b) as usize - 1].is_zero();
            let mut visited = vec![false; total as usize];
            for_each_pairing(&layout, &allowed, |partner| {
                let r = rank(partner);
                if visited[r as usize] {
                    return;
                }
                let mut orbit = HashSet::new();
                for g in &group {
                    let image = rank(&conjugate(g, partner));
                    if orbit.insert(image) {
                        visited[image as usize] = true;
                    }
                }
                let d = PairingDiagram::new(&layout, partner);
                let connected = d.is_connected();
                if connected_only && !connected {
                    return;
                }
                classes.push(CensusClass {
                    product: prod.clone(),
                    rank: r,
                    automorphisms: order / orbit.len() as u64,
                    euler_characteristic: d.euler_characteristic(),
                    connected,
                    edge_colors: d.edge_colors(),
                    l,
                    representative: partner.to_vec(),
                });
            });
        }
    }
    Ok(classes)
}

/// Target structure for a single gluing.
#[derive(Clone, Debug)]
pub struct GluingSpec {
    pub product: TermProduct,
    pub euler_characteristic: i64,
    /// Required edge counts for the listed color pairs.
    pub edge_colors: BTreeMap<(u8, u8), usize>,
    pub connected: bool,
    /// Require a trivial automorphism group.
    pub rigid: bool,
}

/// Search for one gluing of a product of monomials with the requested
/// structure, by seeded random matchings improved with pair exchanges.
/// Returns the class of the first hit.
pub fn find_gluing(engine: &WickEngine, spec: &GluingSpec, seed: u64, max_tries: u64) -> Result<Option<CensusClass>> {
    let instances = engine.product_instances(&spec.product);
    let layout = HalfEdgeLayout::from_instances(&instances);
    let n = layout.num_half_edges();
    if n % 2 == 1 {
        return Ok(None);
    }
    let k = instances.len();
    let l = n / 2 - k;
    let group = relabeling_group(&instances);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<usize> = (0..n).collect();
    let colors_ok = |d: &PairingDiagram| {
        let ec = d.edge_colors();
        spec.edge_colors.iter().all(|(key, want)| ec.get(key).copied().unwrap_or(0) == *want)
    };
    for _ in 0..max_tries {
        ids.shuffle(&mut rng);
        let mut partner = vec![0; n];
        for pair in ids.chunks(2) {
            partner[pair[0]] = pair[1];
            partner[pair[1]] = pair[0];
        }
        // local search on the number of vertices
        let target_vertices = spec.euler_characteristic + (n / 2) as i64 - layout.num_words() as i64 + 2 * layout.crossings() as i64;
        for _ in 0..4 * n {
            let d = PairingDiagram::new(&layout, &partner);
            let v = d.vertices() as i64;
            if v == target_vertices && colors_ok(&d) && (!spec.connected || d.is_connected()) {
                break;
            }
            let a = ids[rand::Rng::gen_range(&mut rng, 0..n)];
            let b = ids[rand::Rng::gen_range(&mut rng, 0..n)];
            let (pa, pb) = (partner[a], partner[b]);
            if a == b || pa == b {
                continue;
            }
            let mut trial = partner.clone();
            trial[a] = b;
            trial[b] = a;
            trial[pa] = pb;
            trial[pb] = pa;
            let td = PairingDiagram::new(&layout, &trial);
            let tv = td.vertices() as i64;
            if (tv - target_vertices).abs() <= (v - target_vertices).abs() {
                partner = trial;
            }
        }
        let d = PairingDiagram::new(&layout, &partner);
        if d.euler_characteristic() != spec.euler_characteristic || !colors_ok(&d) || (spec.connected && !d.is_connected()) {
            continue;
        }
        let stabilizer = group.iter().filter(|g| conjugate(g, &partner) == partner).count() as u64;
        if spec.rigid && stabilizer != 1 {
            continue;
        }
        return Ok(Some(CensusClass {
            product: spec.product.clone(),
            rank: rank(&partner),
            automorphisms: stabilizer,
            euler_characteristic: d.euler_characteristic(),
            connected: d.is_connected(),
            edge_colors: d.edge_colors(),
            l,
            representative: partner,
        }));
    }
    Ok(None)
}

/// Text form of a class for reports.
pub fn describe_class(engine: &WickEngine, c: &CensusClass) -> String {
    let inv: Rational = Rational::from_integer(1.into()) / Rational::from_integer(c.automorphisms.into());
    format!("{} / {} (1/#Aut = {})", c.weight_monomial(engine), c.automorphisms, format_rational(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant::{parse_monomial, Potential};
    use crate::series::{int, rat};
    use crate::wick::GaussianModel;

    fn quartic() -> WickEngine {
        let v = Potential::numeric(1, vec![(parse_monomial("tr(1,1,1,1)", 1).unwrap(), "t4", int(1))]).unwrap();
        WickEngine::new(GaussianModel::scalar(int(1)).unwrap(), v).unwrap()
    }

    #[test]
    fn one_square() {
        let e = quartic();
        let classes = map_census(&e, 1, true, 1000).unwrap();
        let mut by_genus: BTreeMap<i64, Rational> = BTreeMap::new();
        for c in &classes {
            *by_genus.entry(c.euler_characteristic).or_insert_with(Rational::zero) += rat(1, c.automorphisms as i64);
        }
        assert_eq!(by_genus[&2], rat(1, 2));
        assert_eq!(by_genus[&0], rat(1, 4));
        assert_eq!(classes.len(), 2);
    }

    #[test]
    fn empty_potential_has_no_surfaces() {
        let e = WickEngine::new(GaussianModel::scalar(int(1)).unwrap(), Potential::empty(1)).unwrap();
        assert!(map_census(&e, 2, false, 1000).unwrap().is_empty());
    }

    #[test]
    fn group_orders() {
        let sq = parse_monomial("tr(1,1,1,1)", 1).unwrap();
        let pair = parse_monomial("tr(1,1,1,1)*tr(1,1,1,1)", 1).unwrap();
        assert_eq!(relabeling_group(&[&sq, &sq]).len(), 32);
        assert_eq!(relabeling_group(&[&pair]).len(), 32);
        let fig1 = parse_monomial("tr(1,1,2)*tr(3,3,3)*tr(2,2,4,1,1)", 4).unwrap();
        assert_eq!(relabeling_group(&[&fig1]).len(), 3);
    }

    fn assert_resums(e: &mut WickEngine, max_l: usize) {
        let table = e.compute_f(max_l).unwrap();
        for l in 1..=max_l {
            let mut total = LaurentPolyN::<CouplingPoly>::zero();
            for c in map_census(e, l, true, 200_000).unwrap() {
                assert!(c.connected);
                total.add_assign(&c.contribution(e));
            }
            for g in 0..=l + 1 {
                assert_eq!(total.coeff(2 - 2 * g as i64), table.get(l, g), "l={l} g={g}");
            }
        }
    }

    #[test]
    fn census_resums_to_free_energy() {
        let mut e = quartic();
        assert_resums(&mut e, 2);
        let cubic = Potential::numeric(1, vec![(parse_monomial("tr(1,1,1)", 1).unwrap(), "t3", int(1))]).unwrap();
        let mut e = WickEngine::new(GaussianModel::scalar(int(2)).unwrap(), cubic).unwrap();
        assert_resums(&mut e, 2);
        let terms = vec![
            (parse_monomial("tr(1,2,1,2)", 2).unwrap(), "a", int(1)),
            (parse_monomial("tr(1,1)*tr(2,2)", 2).unwrap(), "b", int(1)),
            (parse_monomial("tr(1,1,1)", 2).unwrap(), "c", int(1)),
        ];
        let gm = GaussianModel::new(vec![vec![int(2), int(-1)], vec![int(-1), int(3)]]).unwrap();
        let mut e = WickEngine::new(gm, Potential::numeric(2, terms).unwrap()).unwrap();
        assert_resums(&mut e, 2);
    }

    #[test]
    fn census_budget_refusal() {
        let e = quartic();
        match map_census(&e, 3, true, 1000) {
            Err(Error::BudgetExceeded { required, .. }) => assert_eq!(required, "10395"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
