//! Partial and functional derivatives in position space.

use super::factor::{Factor, Head};
use super::index::{intern_label, IName, Idx};
use super::mono::{Expr, Mono};
use super::num::qi;

/// Product-rule partial derivative. The index is appended to one
/// differentiable factor per output term; terms without differentiable
/// content drop out. The result is raw (callers canonicalize).
pub fn apply_partial(e: &Expr, idx: Idx) -> Expr {
    let mut terms = Vec::new();
    for m in &e.terms {
        for (fi, f) in m.facs.iter().enumerate() {
            if !f.head.differentiable() {
                continue;
            }
            let mut m2 = m.clone();
            m2.facs[fi].ders.push(idx);
            terms.push(m2);
        }
    }
    Expr::from_monos(terms)
}

/// Total derivative with respect to the free index `label`, which must
/// appear exactly once in every monomial: `W^a -> d_a W^a` summed over the
/// product rule. Used to build integration-by-parts generators and the
/// invariance tests of the functional derivative.
pub fn total_derivative(e: &Expr, label: &str) -> Expr {
    let id = intern_label(label);
    let mut terms = Vec::new();
    for m in &e.terms {
        let positions: Vec<(usize, bool, usize)> = m
            .facs
            .iter()
            .enumerate()
            .flat_map(|(fi, f)| {
                let slot = f
                    .slots
                    .iter()
                    .enumerate()
                    .filter(|(_, i)| i.name == IName::Free(id))
                    .map(move |(si, _)| (fi, true, si));
                let der = f
                    .ders
                    .iter()
                    .enumerate()
                    .filter(|(_, i)| i.name == IName::Free(id))
                    .map(move |(di, _)| (fi, false, di));
                slot.chain(der).collect::<Vec<_>>()
            })
            .collect();
        assert_eq!(positions.len(), 1, "total derivative needs exactly one `{label}` per term");
        let (fi, is_slot, pi) = positions[0];
        let bond = m.max_bond_id().map(|b| b + 1).unwrap_or(0);
        for (gi, g) in m.facs.iter().enumerate() {
            if !g.head.differentiable() {
                continue;
            }
            let mut m2 = m.clone();
            let old = if is_slot { m2.facs[fi].slots[pi] } else { m2.facs[fi].ders[pi] };
            let new_end = Idx::bond(bond, old.up);
            if is_slot {
                m2.facs[fi].slots[pi] = new_end;
            } else {
                m2.facs[fi].ders[pi] = new_end;
            }
            m2.facs[gi].ders.push(Idx::bond(bond, !old.up));
            terms.push(m2);
        }
    }
    Expr::from_monos(terms)
}

/// Euler-Lagrange (variational) derivative of a position-space Lagrangian
/// density with respect to `field`, producing the free indices `out` (their
/// variance names the component of the field being varied; the result
/// carries the opposite variance, as in dL/dA_mu having an upper mu).
///
/// Each occurrence of the field contributes `(-1)^n d^n [rest]` with its
/// derivative chain moved onto the rest of the monomial by parts.
pub fn functional_derivative(lagr: &Expr, field: Head, out: &[Idx]) -> Expr {
    assert!(field.is_field(), "can only vary quantum fields");
    assert_eq!(out.len(), field.arity(), "output index count must match the field arity");
    let mut acc = Expr::zero();
    for m in &lagr.terms {
        for pos in 0..m.facs.len() {
            if m.facs[pos].head != field {
                continue;
            }
            acc = acc.add(&vary_occurrence(m, pos, out));
        }
    }
    acc.canon()
}

fn vary_occurrence(m: &Mono, pos: usize, out: &[Idx]) -> Expr {
    let mut facs = m.facs.clone();
    let removed = facs.remove(pos);
    let sign = if removed.ders.len() % 2 == 1 { -1i128 } else { 1 };
    let mut etas: Vec<Factor> = Vec::new();
    // The derivative chain is applied to the rest afterwards; bonds from the
    // occurrence's slots into its own chain rename the chain index directly.
    let mut chain: Vec<Idx> = removed.ders.to_vec();

    let mut done = vec![false; removed.slots.len()];
    for j in 0..removed.slots.len() {
        if done[j] {
            continue;
        }
        let s = removed.slots[j];
        let free_out = Idx { name: out[j].name, up: !out[j].up };
        match s.name {
            IName::Free(_) => {
                etas.push(Factor::new(Head::Eta, &[s, free_out]));
            }
            IName::Bond(b) => {
                // self-contraction among the occurrence's own slots
                if let Some(j2) =
                    (j + 1..removed.slots.len()).find(|&j2| removed.slots[j2].name == s.name)
                {
                    done[j2] = true;
                    let free_out2 = Idx { name: out[j2].name, up: !out[j2].up };
                    etas.push(Factor::new(Head::Eta, &[free_out, free_out2]));
                    continue;
                }
                // bond into the occurrence's own derivative chain
                if let Some(ci) = chain.iter().position(|c| c.name == s.name) {
                    chain[ci] = free_out;
                    continue;
                }
                // bond into the rest of the monomial
                let mut found = false;
                for f in facs.iter_mut() {
                    for i in f.indices_mut() {
                        if i.name == IName::Bond(b) {
                            *i = free_out;
                            found = true;
                            break;
                        }
                    }
                    if found {
                        break;
                    }
                }
                assert!(found, "dangling bond while varying an occurrence");
            }
        }
    }
    facs.extend(etas);
    let mut expr = Expr::mono(Mono::new(m.coef * qi(sign), m.scal.clone(), facs));
    for d in chain {
        expr = apply_partial(&expr, d);
    }
    expr
}
