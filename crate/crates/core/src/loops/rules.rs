//! The loop-insertion operator `K_k` and the cyclic derivative `D_k`.

use super::expr::{Letter, NCExpression, NCTerm, FROZEN};
use crate::error::{Error, Result};
use crate::invariant::{CouplingPoly, InvariantMonomial, Potential};
use crate::series::Ring;

/// Cyclic derivative of one monomial `Π Tr(W_r)` (un-normalized traces) with
/// respect to color `k`: every occurrence of `k` is removed and its trace
/// reopened into the open word starting right after it.
pub fn nc_derivative_monomial(q: &InvariantMonomial, k: Letter) -> NCExpression {
    let words: Vec<&[Letter]> = q.words().iter().map(|w| w.letters()).collect();
    let mut out = NCExpression::new();
    for (r, w) in words.iter().enumerate() {
        for (i, &l) in w.iter().enumerate() {
            if l != k {
                continue;
            }
            let mut open = w[i + 1..].to_vec();
            open.extend_from_slice(&w[..i]);
            let traces = words.iter().enumerate().filter(|(s, _)| *s != r).map(|(_, x)| x.to_vec()).collect();
            out.add(NCTerm { n_power: 0, traces, open: Some(open) }, &CouplingPoly::one());
        }
    }
    out
}

/// `D_k V` with the potential's weights `t_Q/s_Q` and its `1/N` per trace.
pub fn nc_derivative(v: &Potential, k: Letter) -> NCExpression {
    let mut out = NCExpression::new();
    for (i, t) in v.terms().iter().enumerate() {
        let w = v.weight(i);
        let r = t.monomial.num_traces() as i64;
        for (term, c) in nc_derivative_monomial(&t.monomial, k).terms() {
            let mut term = term.clone();
            term.n_power -= r;
            out.add(term, &c.mul(&w));
        }
    }
    out
}

/// Leibniz rule: one term per occurrence of `k`, that occurrence left
/// active and every other one frozen.
fn leibniz(term: &NCTerm, k: Letter) -> Vec<NCTerm> {
    let mut out = Vec::new();
    let freeze = |w: &[Letter], keep: Option<usize>| -> Vec<Letter> {
        w.iter().enumerate().map(|(i, &l)| if l == k && Some(i) != keep { FROZEN } else { l }).collect()
    };
    if let Some(open) = &term.open {
        for (i, &l) in open.iter().enumerate() {
            if l == k {
                let traces = term.traces.iter().map(|t| freeze(t, None)).collect();
                out.push(NCTerm { n_power: term.n_power, traces, open: Some(freeze(open, Some(i))) });
            }
        }
    }
    for (r, tr) in term.traces.iter().enumerate() {
        for (i, &l) in tr.iter().enumerate() {
            if l == k {
                let traces = term
                    .traces
                    .iter()
                    .enumerate()
                    .map(|(s, t)| if s == r { freeze(t, Some(i)) } else { freeze(t, None) })
                    .collect();
                out.push(NCTerm { n_power: term.n_power, traces, open: term.open.as_ref().map(|o| freeze(o, None)) });
            }
        }
    }
    out
}

/// Split rule on the open word `A M_k B -> Tr(A) Tr(B)`, or merge rule on a
/// trace `Tr(M_k A) · B -> Tr(A B)`, consuming the single active `k`.
fn split_or_merge(term: &NCTerm, k: Letter) -> Result<NCTerm> {
    if let Some(open) = &term.open {
        if let Some(i) = open.iter().position(|&l| l == k) {
            let mut traces = term.traces.clone();
            traces.push(open[..i].to_vec());
            traces.push(open[i + 1..].to_vec());
            return Ok(NCTerm { n_power: term.n_power, traces, open: None });
        }
    }
    for (r, tr) in term.traces.iter().enumerate() {
        if let Some(i) = tr.iter().position(|&l| l == k) {
            let mut merged = tr[i + 1..].to_vec();
            merged.extend_from_slice(&tr[..i]);
            merged.extend_from_slice(term.open.as_deref().unwrap_or(&[]));
            let mut traces: Vec<Vec<Letter>> = term.traces.iter().enumerate().filter(|(s, _)| *s != r).map(|(_, t)| t.clone()).collect();
            traces.push(merged);
            return Ok(NCTerm { n_power: term.n_power, traces, open: None });
        }
    }
    Err(Error::Consistency("no active occurrence to rewrite".into()))
}

fn unfreeze(w: &mut [Letter], k: Letter) {
    for l in w.iter_mut() {
        if *l == FROZEN {
            *l = k;
        }
    }
}

/// `K_k` applied to an expression whose terms carry at most one open word.
/// The result is a combination of products of closed traces.
pub fn apply_k_expr(expr: &NCExpression, k: Letter) -> Result<NCExpression> {
    let mut out = NCExpression::new();
    for (term, c) in expr.terms() {
        if term.has_frozen() {
            return Err(Error::Precondition("input already contains frozen letters".into()));
        }
        let before = term.count(k);
        // no-M_k rule: terms without an active occurrence vanish
        for active in leibniz(term, k) {
            let mut reduced = split_or_merge(&active, k)?;
            if reduced.count(k) != 0 || reduced.count(FROZEN) + 1 != before {
                return Err(Error::Consistency("rewrite did not lower the degree in the active color".into()));
            }
            for t in reduced.traces.iter_mut() {
                unfreeze(t, k);
            }
            out.add(reduced, c);
        }
    }
    Ok(out)
}

/// `K_k(G)` for an open word `G`.
pub fn apply_k(k: Letter, g: &[Letter]) -> Result<NCExpression> {
    apply_k_expr(&NCExpression::word(g.to_vec()), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant::parse_monomial;

    fn closed(n_power: i64, traces: Vec<Vec<Letter>>) -> NCTerm {
        NCTerm::scalar(n_power, traces)
    }

    #[test]
    fn insertion_on_short_words() {
        let e = apply_k(1, &[1]).unwrap();
        assert_eq!(e, NCExpression::single(closed(2, vec![]), CouplingPoly::one()));
        assert!(apply_k(1, &[2]).unwrap().is_empty());
        let e = apply_k(1, &[1, 1]).unwrap();
        assert_eq!(e, NCExpression::single(closed(1, vec![vec![1]]), CouplingPoly::constant(crate::series::int(2))));
        assert!(apply_k(1, &[]).unwrap().is_empty());
    }

    #[test]
    fn insertion_with_mixed_colors() {
        // K_1(M1 M2 M1) = Tr(1)Tr(M2 M1) + Tr(M1 M2)Tr(1)
        let e = apply_k(1, &[1, 2, 1]).unwrap();
        assert_eq!(e, NCExpression::single(closed(1, vec![vec![1, 2]]), CouplingPoly::constant(crate::series::int(2))));
        assert!(e.is_closed());
    }

    #[test]
    fn merge_on_trace_factors() {
        // K_1(Tr(M1 M2) · M2) = Tr(M2 M2), plus nothing from the open word
        let mut g = NCExpression::new();
        g.add(NCTerm { n_power: 0, traces: vec![vec![1, 2]], open: Some(vec![2]) }, &CouplingPoly::one());
        let e = apply_k_expr(&g, 1).unwrap();
        assert_eq!(e, NCExpression::single(closed(0, vec![vec![2, 2]]), CouplingPoly::one()));
    }

    #[test]
    fn cyclic_derivatives() {
        let cube = parse_monomial("tr(1,1,1)", 1).unwrap();
        let d = nc_derivative_monomial(&cube, 1);
        assert_eq!(d, NCExpression::single(NCTerm::word(vec![1, 1]), CouplingPoly::constant(crate::series::int(3))));
        let q = parse_monomial("tr(1,1,2)", 2).unwrap();
        assert_eq!(nc_derivative_monomial(&q, 2), NCExpression::word(vec![1, 1]));
        let mut expected = NCExpression::word(vec![1, 2]);
        expected.add(NCTerm::word(vec![2, 1]), &CouplingPoly::one());
        assert_eq!(nc_derivative_monomial(&q, 1), expected);
    }
}
