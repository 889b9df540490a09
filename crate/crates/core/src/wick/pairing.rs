//! Explicit perfect matchings on the half-edges of a product of monomials.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::invariant::InvariantMonomial;

const UNSET: usize = usize::MAX;

/// Half-edges of a product of monomial instances. Half-edge `h` is one
/// letter; `next[h]` is the following letter of the same trace.
#[derive(Clone, Debug)]
pub struct HalfEdgeLayout {
    colors: Vec<u8>,
    next: Vec<usize>,
    word_of: Vec<usize>,
    instance_of: Vec<usize>,
    num_words: usize,
    num_instances: usize,
}

impl HalfEdgeLayout {
    pub fn from_instances(instances: &[&InvariantMonomial]) -> Self {
        let mut layout = HalfEdgeLayout {
            colors: Vec::new(),
            next: Vec::new(),
            word_of: Vec::new(),
            instance_of: Vec::new(),
            num_words: 0,
            num_instances: instances.len(),
        };
        for (inst, q) in instances.iter().enumerate() {
            for w in q.words() {
                layout.push_word(w.letters(), inst);
            }
        }
        layout
    }

    /// Each trace is its own instance.
    pub fn from_traces(traces: &[Vec<u8>]) -> Self {
        let mut layout = HalfEdgeLayout {
            colors: Vec::new(),
            next: Vec::new(),
            word_of: Vec::new(),
            instance_of: Vec::new(),
            num_words: 0,
            num_instances: traces.len(),
        };
        for (inst, w) in traces.iter().enumerate() {
            layout.push_word(w, inst);
        }
        layout
    }

    fn push_word(&mut self, letters: &[u8], instance: usize) {
        let base = self.colors.len();
        let n = letters.len();
        for (i, &c) in letters.iter().enumerate() {
            self.colors.push(c);
            self.next.push(base + (i + 1) % n);
            self.word_of.push(self.num_words);
            self.instance_of.push(instance);
        }
        self.num_words += 1;
    }

    pub fn num_half_edges(&self) -> usize {
        self.colors.len()
    }

    pub fn num_words(&self) -> usize {
        self.num_words
    }

    pub fn num_instances(&self) -> usize {
        self.num_instances
    }

    pub fn color(&self, h: usize) -> u8 {
        self.colors[h]
    }

    pub fn next(&self, h: usize) -> usize {
        self.next[h]
    }

    pub fn instance_of(&self, h: usize) -> usize {
        self.instance_of[h]
    }

    /// Σ over instances of (traces − 1).
    pub fn crossings(&self) -> usize {
        self.num_words - self.num_instances
    }

    /// `(2E − 1)!!`, the number of perfect matchings (0 for an odd count).
    pub fn pairing_count(&self) -> BigUint {
        let n = self.colors.len();
        if n % 2 == 1 {
            return BigUint::from(0u32);
        }
        let mut acc = BigUint::from(1u32);
        let mut k = n as u64;
        while k > 1 {
            acc *= k - 1;
            k -= 2;
        }
        acc
    }
}

/// A perfect matching of a layout; `partner[h]` is the half-edge glued to `h`.
#[derive(Clone, Debug)]
pub struct PairingDiagram<'a> {
    pub layout: &'a HalfEdgeLayout,
    pub partner: &'a [usize],
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
    fn classes(&mut self) -> usize {
        (0..self.0.len()).filter(|&i| self.find(i) == i).count()
    }
}

impl<'a> PairingDiagram<'a> {
    pub fn new(layout: &'a HalfEdgeLayout, partner: &'a [usize]) -> Self {
        debug_assert!(partner.iter().enumerate().all(|(h, &p)| partner[p] == h && p != h));
        PairingDiagram { layout, partner }
    }

    pub fn num_edges(&self) -> usize {
        self.partner.len() / 2
    }

    /// Cycles of `next ∘ partner`: the index loops of the contraction.
    pub fn index_loops(&self) -> usize {
        count_cycles(&self.layout.next, self.partner)
    }

    /// Vertices of the glued surface, found by identifying the two index
    /// slots of every half-edge through word succession and gluing.
    pub fn vertices(&self) -> usize {
        let n = self.partner.len();
        let mut uf = UnionFind::new(2 * n);
        for h in 0..n {
            uf.union(2 * h + 1, 2 * self.layout.next[h]);
            let p = self.partner[h];
            uf.union(2 * h, 2 * p + 1);
            uf.union(2 * h + 1, 2 * p);
        }
        uf.classes()
    }

    /// vertices − edges + polygons − 2·crossings.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices() as i64 - self.num_edges() as i64 + self.layout.num_words as i64
            - 2 * self.layout.crossings() as i64
    }

    /// Power of `N` carried by this matching in `<Π (1/N)Tr>`:
    /// one `N` per index loop, `1/N` per edge and per trace.
    pub fn moment_n_power(&self) -> i64 {
        self.index_loops() as i64 - self.num_edges() as i64 - self.layout.num_words as i64
    }

    /// Number of edges joining colors `(i, j)`, `i ≤ j`.
    pub fn edge_colors(&self) -> BTreeMap<(u8, u8), usize> {
        let mut out = BTreeMap::new();
        for (h, &p) in self.partner.iter().enumerate() {
            if h < p {
                let (a, b) = (self.layout.colors[h], self.layout.colors[p]);
                *out.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        out
    }

    /// Connected through gluings and through traces sharing an instance.
    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.layout.num_instances);
        for (h, &p) in self.partner.iter().enumerate() {
            uf.union(self.layout.instance_of[h], self.layout.instance_of[p]);
        }
        uf.classes() <= 1
    }

    pub fn rank(&self) -> u64 {
        rank(self.partner)
    }
}

pub(crate) fn count_cycles(next: &[usize], partner: &[usize]) -> usize {
    let n = partner.len();
    let mut seen = vec![false; n];
    let mut cycles = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        cycles += 1;
        let mut h = s;
        while !seen[h] {
            seen[h] = true;
            h = next[partner[h]];
        }
    }
    cycles
}

/// Mixed-radix index of a matching in the canonical enumeration order
/// (smallest free half-edge paired with the d-th free half-edge after it).
pub fn rank(partner: &[usize]) -> u64 {
    let n = partner.len();
    let mut used = vec![false; n];
    let mut r: u64 = 0;
    let mut free = n;
    for i in 0..n {
        if used[i] {
            continue;
        }
        let j = partner[i];
        let d = (i + 1..j).filter(|&x| !used[x]).count() as u64;
        r = r * (free as u64 - 1) + d;
        used[i] = true;
        used[j] = true;
        free -= 2;
    }
    r
}

fn recurse<T>(partner: &mut [usize], allowed: &dyn Fn(usize, usize) -> bool, acc: &mut T, visit: &(dyn Fn(&mut T, &[usize]) + Sync)) {
    let Some(i) = partner.iter().position(|&p| p == UNSET) else {
        visit(acc, partner);
        return;
    };
    for j in i + 1..partner.len() {
        if partner[j] != UNSET || !allowed(i, j) {
            continue;
        }
        partner[i] = j;
        partner[j] = i;
        recurse(partner, allowed, acc, visit);
        partner[i] = UNSET;
        partner[j] = UNSET;
    }
}

/// Visit matchings sequentially in increasing [`rank`] order.
pub fn for_each_pairing(layout: &HalfEdgeLayout, allowed: &dyn Fn(usize, usize) -> bool, mut visit: impl FnMut(&[usize])) {
    let n = layout.num_half_edges();
    if n % 2 == 1 {
        return;
    }
    fn rec(partner: &mut [usize], allowed: &dyn Fn(usize, usize) -> bool, visit: &mut dyn FnMut(&[usize])) {
        let Some(i) = partner.iter().position(|&p| p == UNSET) else {
            visit(partner);
            return;
        };
        for j in i + 1..partner.len() {
            if partner[j] != UNSET || !allowed(i, j) {
                continue;
            }
            partner[i] = j;
            partner[j] = i;
            rec(partner, allowed, visit);
            partner[i] = UNSET;
            partner[j] = UNSET;
        }
    }
    let mut partner = vec![UNSET; n];
    rec(&mut partner, allowed, &mut visit);
}

/// Visit every perfect matching whose glued pairs satisfy `allowed`,
/// partitioned over the partners of the first two free half-edges and run
/// in parallel. Per-partition accumulators are combined with `merge`.
pub fn sweep<T, I, V, M>(layout: &HalfEdgeLayout, allowed: &(dyn Fn(usize, usize) -> bool + Sync), init: I, visit: V, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    V: Fn(&mut T, &[usize]) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    let n = layout.num_half_edges();
    if n % 2 == 1 {
        return init();
    }
    if n < 4 {
        let mut acc = init();
        let mut partner = vec![UNSET; n];
        recurse(&mut partner, allowed, &mut acc, &visit);
        return acc;
    }
    let mut prefixes = Vec::new();
    for j in 1..n {
        if !allowed(0, j) {
            continue;
        }
        let i2 = if j == 1 { 2 } else { 1 };
        for k in i2 + 1..n {
            if k != j && allowed(i2, k) {
                prefixes.push((j, i2, k));
            }
        }
    }
    prefixes
        .into_par_iter()
        .map(|(j, i2, k)| {
            let mut partner = vec![UNSET; n];
            partner[0] = j;
            partner[j] = 0;
            partner[i2] = k;
            partner[k] = i2;
            let mut acc = init();
            recurse(&mut partner, allowed, &mut acc, &visit);
            acc
        })
        .reduce(&init, &merge)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_gluings() {
        let layout = HalfEdgeLayout::from_traces(&[vec![1; 4]]);
        // adjacent sides glued: sphere; opposite sides: torus
        let planar = PairingDiagram::new(&layout, &[1, 0, 3, 2]);
        assert_eq!(planar.euler_characteristic(), 2);
        assert_eq!(planar.index_loops(), 3);
        let torus = PairingDiagram::new(&layout, &[2, 3, 0, 1]);
        assert_eq!(torus.euler_characteristic(), 0);
        assert_eq!(torus.index_loops(), 1);
    }

    #[test]
    fn sweep_counts_all_matchings() {
        let layout = HalfEdgeLayout::from_traces(&[vec![1; 4], vec![1; 4]]);
        let total = sweep(&layout, &|_, _| true, || 0u64, |a, _| *a += 1, |a, b| a + b);
        assert_eq!(BigUint::from(total), layout.pairing_count());
        assert_eq!(total, 105);
    }

    #[test]
    fn ranks_are_a_bijection() {
        let layout = HalfEdgeLayout::from_traces(&[vec![1; 6]]);
        let mut ranks = sweep(&layout, &|_, _| true, Vec::new, |a: &mut Vec<u64>, p| a.push(rank(p)), |mut a, b| {
            a.extend(b);
            a
        });
        ranks.sort();
        assert_eq!(ranks, (0..15).collect::<Vec<_>>());
    }
}
