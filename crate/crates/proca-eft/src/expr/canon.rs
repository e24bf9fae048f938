//! Canonical forms for tensor expressions.
//!
//! The normal form is computed per monomial:
//!
//! 1. field strengths are expanded into derivative-of-field differences;
//! 2. products of two Levi-Civita symbols are replaced by the signed
//!    4x4 metric determinant expansion (mostly-minus signature);
//! 3. metric factors are absorbed into their contraction partners and
//!    full traces become the symbolic dimension `d`;
//! 4. dummies are renumbered by first occurrence after a deterministic
//!    factor ordering found by partition refinement plus a bounded search
//!    over tied factors and over equivalent slot and derivative
//!    arrangements; symmetric slots are sorted, antisymmetric slots sorted
//!    with sign tracking;
//! 5. a monomial whose canonical form collides with its own negation is
//!    zero and is dropped.
//!
//! Equal tensors compare bit-identical after this pass, which is what every
//! golden comparison in the crate rests on.

use super::factor::{Factor, Head, Sym2};
use super::index::{IName, Idx};
use super::mono::{Expr, Mono};
use super::num::{qi, Q};
use super::sym::{ScalMono, Sym};
use super::ExprError;
use itertools::Itertools;
use num_traits::Zero;
use smallvec::smallvec;
use std::collections::{BTreeMap, HashMap};

/// Bound on the labeling search (tied-factor orders times equivalent slot
/// and derivative arrangements). Pipeline monomials stay far below it; an
/// overflow aborts rather than risk an unstable normal form.
const MAX_CANDS: usize = 20_000;

pub(crate) fn canon_expr(e: Expr) -> Result<Expr, ExprError> {
    let mut acc: BTreeMap<(Vec<Factor>, ScalMono), Q> = BTreeMap::new();
    let mut free_ref: Option<Vec<Idx>> = None;
    for m in e.terms {
        validate(&m)?;
        for m1 in expand_fda(m) {
            for m2 in reduce_eps_pairs(m1) {
                let mut m2 = m2;
                if !absorb_metrics(&mut m2) {
                    continue;
                }
                let Some(mc) = canon_label(m2) else { continue };
                let frees = mc.free_indices();
                match &free_ref {
                    None => free_ref = Some(frees),
                    Some(r) => {
                        if *r != frees {
                            let show = |v: &[Idx]| {
                                v.iter().map(|&i| super::io::fmt_idx(i)).join(" ")
                            };
                            return Err(ExprError::FreeMismatch(format!(
                                "free indices differ across monomials: [{}] vs [{}]",
                                show(r),
                                show(&frees)
                            )));
                        }
                    }
                }
                let entry = acc.entry((mc.facs, mc.scal)).or_insert_with(Q::zero);
                *entry += mc.coef;
            }
        }
    }
    let terms = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((facs, scal), coef)| Mono { coef, scal, facs })
        .collect();
    Ok(Expr { terms })
}

fn validate(m: &Mono) -> Result<(), ExprError> {
    for f in &m.facs {
        if !f.well_formed() {
            return Err(ExprError::Malformed(format!(
                "factor {} has wrong slot count or an illegal derivative chain",
                f.head.name()
            )));
        }
    }
    // Each dummy occurs exactly twice, once upper and once lower.
    let mut ends: HashMap<u32, Vec<bool>> = HashMap::new();
    for f in &m.facs {
        for i in f.indices() {
            if let IName::Bond(b) = i.name {
                ends.entry(b).or_default().push(i.up);
            }
        }
    }
    for (b, ups) in ends {
        if ups.len() > 2 {
            return Err(ExprError::TripleIndex(format!("${b}")));
        }
        if ups.len() != 2 {
            return Err(ExprError::Malformed(format!(
                "dummy ${b} occurs {} times, expected exactly two",
                ups.len()
            )));
        }
        if ups[0] == ups[1] {
            return Err(ExprError::Malformed(format!(
                "dummy ${b} must occur once upper and once lower"
            )));
        }
    }
    Ok(())
}

/// F^{ab} -> d^a A^b - d^b A^a, recursively over every field-strength factor.
/// Existing derivative chains distribute onto both pieces.
fn expand_fda(m: Mono) -> Vec<Mono> {
    let Some(pos) = m.facs.iter().position(|f| f.head == Head::FdA) else {
        return vec![m];
    };
    let f = m.facs[pos].clone();
    let (a, b) = (f.slots[0], f.slots[1]);
    let mut out = Vec::new();
    for (sign, slot, der) in [(1i128, b, a), (-1i128, a, b)] {
        let mut facs = m.facs.clone();
        let mut ders = f.ders.clone();
        ders.push(der);
        facs[pos] = Factor { head: Head::DA, slots: smallvec![slot], ders };
        out.extend(expand_fda(Mono {
            coef: m.coef * qi(sign),
            scal: m.scal.clone(),
            facs,
        }));
    }
    out
}

fn perm_sign(p: &[usize]) -> i128 {
    let mut s = 1i128;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

/// eps(a1..a4) eps(b1..b4) = -sum_sigma sgn(sigma) prod_i eta(a_i, b_sigma(i)).
/// The overall minus is fixed by the mostly-minus signature; the numeric
/// oracle in the tests pins it down.
///
/// Metric chains formed among the generated factors are composed right here,
/// and a closed chain counts the literal four dimensions: the alternating
/// symbol is a strictly four-dimensional object, so its self-contractions
/// are pure numbers (the fully contracted pair is -24). Only traces that
/// involve metrics from elsewhere in the monomial stay symbolic in `d`.
fn reduce_eps_pairs(m: Mono) -> Vec<Mono> {
    let lcs: Vec<usize> = m
        .facs
        .iter()
        .enumerate()
        .filter(|(_, f)| f.head == Head::Lc)
        .map(|(i, _)| i)
        .collect();
    if lcs.len() < 2 {
        return vec![m];
    }
    let (i, j) = (lcs[0], lcs[1]);
    let a: Vec<Idx> = m.facs[i].slots.to_vec();
    let b: Vec<Idx> = m.facs[j].slots.to_vec();
    let rest: Vec<Factor> = m
        .facs
        .iter()
        .enumerate()
        .filter(|(t, _)| *t != i && *t != j)
        .map(|(_, f)| f.clone())
        .collect();
    let mut out = Vec::new();
    for perm in (0..4usize).permutations(4) {
        let sgn = perm_sign(&perm);
        let mut coef = m.coef * qi(-sgn);
        let mut work: Vec<(Idx, Idx)> = (0..4).map(|t| (a[t], b[perm[t]])).collect();
        loop {
            if let Some(p) = work.iter().position(|(x, y)| x.is_bond() && x.name == y.name) {
                work.remove(p);
                coef *= qi(4);
                continue;
            }
            let mut hit = None;
            'outer: for p in 0..work.len() {
                for r in p + 1..work.len() {
                    for (sp, vp) in [work[p].0, work[p].1].into_iter().enumerate() {
                        for vr in [work[r].0, work[r].1] {
                            if vp.is_bond() && vp.name == vr.name {
                                hit = Some((p, r, sp, vr));
                                break 'outer;
                            }
                        }
                    }
                }
            }
            let Some((p, r, sp, shared)) = hit else { break };
            let keep_p = if sp == 0 { work[p].1 } else { work[p].0 };
            let keep_r = if work[r].0.name == shared.name { work[r].1 } else { work[r].0 };
            work.remove(r);
            work[p] = (keep_p, keep_r);
        }
        let mut facs = rest.clone();
        for (x, y) in work {
            facs.push(Factor::new(Head::Eta, &[x, y]));
        }
        out.extend(reduce_eps_pairs(Mono { coef, scal: m.scal.clone(), facs }));
    }
    out
}

/// Slot reference inside a monomial: factor position plus slot or
/// derivative position.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum SlotRef {
    Slot(usize, usize),
    Der(usize, usize),
}

fn bond_ends(facs: &[Factor]) -> HashMap<u32, Vec<SlotRef>> {
    let mut map: HashMap<u32, Vec<SlotRef>> = HashMap::new();
    for (fi, f) in facs.iter().enumerate() {
        for (si, s) in f.slots.iter().enumerate() {
            if let IName::Bond(b) = s.name {
                map.entry(b).or_default().push(SlotRef::Slot(fi, si));
            }
        }
        for (di, d) in f.ders.iter().enumerate() {
            if let IName::Bond(b) = d.name {
                map.entry(b).or_default().push(SlotRef::Der(fi, di));
            }
        }
    }
    map
}

fn set_idx(facs: &mut [Factor], r: SlotRef, v: Idx) {
    match r {
        SlotRef::Slot(f, s) => facs[f].slots[s] = v,
        SlotRef::Der(f, d) => facs[f].ders[d] = v,
    }
}

/// Absorbs metric factors into their contraction partners; full traces
/// become the symbolic dimension. Returns false when the monomial is zero
/// (a bond closing two slots of one antisymmetric factor).
fn absorb_metrics(m: &mut Mono) -> bool {
    loop {
        // Antisymmetric self-contraction vanishes identically.
        for f in &m.facs {
            if f.head.sym2() == Sym2::Anti {
                for i in 0..f.slots.len() {
                    for j in i + 1..f.slots.len() {
                        if f.slots[i].name == f.slots[j].name && f.slots[i].is_bond() {
                            return false;
                        }
                    }
                }
            }
        }
        let mut changed = false;
        'scan: for ei in 0..m.facs.len() {
            if m.facs[ei].head != Head::Eta {
                continue;
            }
            let x = m.facs[ei].slots[0];
            let y = m.facs[ei].slots[1];
            // Full trace of the metric.
            if x.is_bond() && x.name == y.name {
                m.scal.mul_sym(Sym::Dp(0), num_rational::Ratio::from_integer(1));
                m.facs.remove(ei);
                changed = true;
                break 'scan;
            }
            for (own, other) in [(x, y), (y, x)] {
                if let IName::Bond(b) = own.name {
                    let ends = bond_ends(&m.facs);
                    let partner = ends[&b]
                        .iter()
                        .copied()
                        .find(|r| {
                            // the end that is not on this metric factor
                            !matches!(*r, SlotRef::Slot(f, _) if f == ei)
                        })
                        .expect("bond pairing validated");
                    set_idx(&mut m.facs, partner, other);
                    m.facs.remove(ei);
                    changed = true;
                    break 'scan;
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

/// Deterministic byte encoding of the factor list; the canonical candidate
/// with the smallest encoding wins.
fn encode(facs: &[Factor]) -> Vec<u8> {
    let mut out = Vec::with_capacity(facs.len() * 16);
    for f in facs {
        let (tag, param): (u8, u16) = match f.head {
            Head::Eta => (0, 0),
            Head::Lc => (1, 0),
            Head::H => (2, 0),
            Head::DA => (3, 0),
            Head::Phi => (4, 0),
            Head::FdA => (5, 0),
            Head::ABar => (6, 0),
            Head::Mom(n) => (7, n as u16),
            Head::LoopK => (8, 0),
            Head::Pol(n) => (9, n as u16),
            Head::PolH(n) => (10, n as u16),
            Head::Mark(n) => (11, n),
        };
        out.push(tag);
        out.extend_from_slice(&param.to_le_bytes());
        for group in [&f.slots[..], &f.ders[..]] {
            out.push(b'(');
            for i in group {
                match i.name {
                    IName::Free(l) => {
                        out.push(b'F');
                        out.extend_from_slice(&l.to_le_bytes());
                    }
                    IName::Bond(b) => {
                        out.push(b'B');
                        out.extend_from_slice(&b.to_le_bytes());
                    }
                }
                out.push(i.up as u8);
            }
            out.push(b')');
        }
    }
    out
}

/// One normalization pass: renumber bonds by first occurrence (first end
/// upper, second lower), sort derivative chains, sort symmetric slots, sort
/// antisymmetric slots with sign tracking.
fn normalize_pass(facs: &mut [Factor], sign: &mut i128) {
    let mut next = 0u32;
    let mut map: HashMap<u32, u32> = HashMap::new();
    let mut seen_once: HashMap<u32, bool> = HashMap::new();
    for f in facs.iter_mut() {
        for i in f.indices_mut() {
            if let IName::Bond(b) = i.name {
                let nb = *map.entry(b).or_insert_with(|| {
                    let v = next;
                    next += 1;
                    v
                });
                let first = !seen_once.contains_key(&nb);
                seen_once.insert(nb, true);
                i.name = IName::Bond(nb);
                i.up = first;
            }
        }
    }
    for f in facs.iter_mut() {
        f.ders.sort();
        match f.head.sym2() {
            Sym2::Symmetric => {
                if f.slots.len() == 2 && f.slots[1] < f.slots[0] {
                    f.slots.swap(0, 1);
                }
            }
            Sym2::Anti => {
                // insertion sort with parity tracking
                for i in 1..f.slots.len() {
                    let mut j = i;
                    while j > 0 && f.slots[j] < f.slots[j - 1] {
                        f.slots.swap(j, j - 1);
                        *sign = -*sign;
                        j -= 1;
                    }
                }
            }
            Sym2::None => {}
        }
    }
}

/// Iterated partition refinement over the factor graph; returns a rank per
/// factor. Equal ranks are candidate automorphisms.
fn refine(facs: &[Factor]) -> Vec<u32> {
    let enc_local = |f: &Factor| -> Vec<u8> {
        let mut k = Vec::new();
        let (tag, param): (u8, u16) = match f.head {
            Head::Eta => (0, 0),
            Head::Lc => (1, 0),
            Head::H => (2, 0),
            Head::DA => (3, 0),
            Head::Phi => (4, 0),
            Head::FdA => (5, 0),
            Head::ABar => (6, 0),
            Head::Mom(n) => (7, n as u16),
            Head::LoopK => (8, 0),
            Head::Pol(n) => (9, n as u16),
            Head::PolH(n) => (10, n as u16),
            Head::Mark(n) => (11, n),
        };
        k.push(tag);
        k.extend_from_slice(&param.to_le_bytes());
        k.push(f.slots.len() as u8);
        k.push(f.ders.len() as u8);
        for i in f.indices() {
            match i.name {
                IName::Free(l) => {
                    k.push(b'F');
                    k.extend_from_slice(&l.to_le_bytes());
                    k.push(i.up as u8);
                }
                IName::Bond(_) => k.push(b'B'),
            }
        }
        k
    };
    let rank_of = |keys: &[Vec<u8>]| -> Vec<u32> {
        let mut sorted: Vec<&Vec<u8>> = keys.iter().collect();
        sorted.sort();
        sorted.dedup();
        keys.iter()
            .map(|k| sorted.binary_search(&k).unwrap() as u32)
            .collect()
    };
    let keys0: Vec<Vec<u8>> = facs.iter().map(enc_local).collect();
    let mut ranks = rank_of(&keys0);

    // Slot class inside its factor: position for asymmetric heads, a fixed
    // marker for (anti)symmetric slots, another for derivative positions.
    let slot_class = |facs: &[Factor], r: SlotRef| -> u8 {
        match r {
            SlotRef::Slot(f, s) => match facs[f].head.sym2() {
                Sym2::None => s as u8,
                _ => 0xFE,
            },
            SlotRef::Der(_, _) => 0xFD,
        }
    };
    for _ in 0..facs.len() {
        let ends = bond_ends(facs);
        let mut keys: Vec<Vec<u8>> = Vec::with_capacity(facs.len());
        for (fi, f) in facs.iter().enumerate() {
            let mut ext: Vec<(u8, u32, u8)> = Vec::new();
            let mut push_end = |own: SlotRef, b: u32| {
                let pair = &ends[&b];
                let other = if pair[0] == own { pair[1] } else { pair[0] };
                let (of, _) = match other {
                    SlotRef::Slot(f, s) => (f, s),
                    SlotRef::Der(f, d) => (f, d),
                };
                ext.push((slot_class(facs, own), ranks[of], slot_class(facs, other)));
            };
            for (si, s) in f.slots.iter().enumerate() {
                if let IName::Bond(b) = s.name {
                    push_end(SlotRef::Slot(fi, si), b);
                }
            }
            for (di, d) in f.ders.iter().enumerate() {
                if let IName::Bond(b) = d.name {
                    push_end(SlotRef::Der(fi, di), b);
                }
            }
            ext.sort();
            let mut k = ranks[fi].to_le_bytes().to_vec();
            for (a, b, c) in ext {
                k.push(a);
                k.extend_from_slice(&b.to_le_bytes());
                k.push(c);
            }
            keys.push(k);
        }
        let new_ranks = rank_of(&keys);
        if new_ranks == ranks {
            break;
        }
        ranks = new_ranks;
    }
    ranks
}

/// Arrangements of one factor that present the same tensor but seed a
/// different bond labeling: permutations of bond-valued slots on
/// (anti)symmetric heads and of bond-valued derivative labels. The returned
/// sign is the slot-permutation parity on antisymmetric heads.
fn factor_seeds(f: &Factor) -> Vec<(Factor, i128)> {
    let slot_pos: Vec<usize> = if f.head.sym2() == Sym2::None {
        Vec::new()
    } else {
        (0..f.slots.len()).filter(|&i| f.slots[i].is_bond()).collect()
    };
    let der_pos: Vec<usize> = (0..f.ders.len()).filter(|&i| f.ders[i].is_bond()).collect();
    let mut out = Vec::new();
    for sp in slot_pos.iter().copied().permutations(slot_pos.len()) {
        let ssign = match f.head.sym2() {
            Sym2::Anti => perm_sign(&sp),
            _ => 1,
        };
        for dp in der_pos.iter().copied().permutations(der_pos.len()) {
            let mut g = f.clone();
            for (k, &src) in sp.iter().enumerate() {
                g.slots[slot_pos[k]] = f.slots[src];
            }
            for (k, &src) in dp.iter().enumerate() {
                g.ders[der_pos[k]] = f.ders[src];
            }
            out.push((g, ssign));
        }
    }
    out
}

fn normalize_fixpoint(mut facs: Vec<Factor>, seed_sign: i128) -> Vec<(Vec<u8>, i128, Vec<Factor>)> {
    let mut sign = seed_sign;
    let mut states: Vec<(Vec<u8>, i128, Vec<Factor>)> = Vec::new();
    for _ in 0..16 {
        normalize_pass(&mut facs, &mut sign);
        let bytes = encode(&facs);
        if let Some(prev) = states.iter().find(|(b, _, _)| *b == bytes) {
            if prev.1 != sign {
                // the monomial equals its own negation
                return vec![(bytes, 0, facs)];
            }
            break;
        }
        states.push((bytes, sign, facs.clone()));
    }
    states
}

/// Canonical labeling of one monomial. Returns None when the monomial is
/// identically zero by symmetry.
fn canon_label(mut m: Mono) -> Option<Mono> {
    if m.coef.is_zero() {
        return None;
    }
    if m.facs.is_empty() {
        normalize_phase(&mut m);
        return if m.coef.is_zero() { None } else { Some(m) };
    }
    let ranks = refine(&m.facs);
    let mut order: Vec<usize> = (0..m.facs.len()).collect();
    order.sort_by_key(|&i| (ranks[i], i));
    // tie groups are runs of equal rank in `order`
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last_mut() {
            Some(g) if ranks[g[0]] == ranks[i] => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    let seeds: Vec<Vec<(Factor, i128)>> = m.facs.iter().map(factor_seeds).collect();
    let n_cands: usize = groups
        .iter()
        .map(|g| (1..=g.len()).try_fold(1usize, |a, b| a.checked_mul(b)).unwrap_or(usize::MAX))
        .chain(seeds.iter().map(|s| s.len()))
        .try_fold(1usize, |a, b| a.checked_mul(b))
        .unwrap_or(usize::MAX);
    assert!(
        n_cands <= MAX_CANDS,
        "canonical labeling search space has {n_cands} candidates; \
         the monomial is too degenerate for the bounded search"
    );

    let orders: Vec<Vec<usize>> = groups
        .iter()
        .map(|g| g.iter().copied().permutations(g.len()))
        .multi_cartesian_product()
        .map(|parts| parts.into_iter().flatten().collect())
        .collect();

    let mut seen: HashMap<Vec<u8>, i128> = HashMap::new();
    let mut best: Option<(Vec<u8>, i128, Vec<Factor>)> = None;
    for ord in orders {
        let choice_iter = ord
            .iter()
            .map(|&i| seeds[i].iter())
            .multi_cartesian_product();
        for choice in choice_iter {
            let mut seed_sign = 1i128;
            let mut permuted = Vec::with_capacity(choice.len());
            for (f, s) in choice {
                seed_sign *= s;
                permuted.push(f.clone());
            }
            for (bytes, sign, facs) in normalize_fixpoint(permuted, seed_sign) {
                if sign == 0 {
                    return None;
                }
                match seen.get(&bytes) {
                    Some(&s) if s != sign => return None,
                    Some(_) => {}
                    None => {
                        seen.insert(bytes.clone(), sign);
                    }
                }
                if best.as_ref().map(|(b, _, _)| bytes < *b).unwrap_or(true) {
                    best = Some((bytes, sign, facs));
                }
            }
        }
    }
    let (_, sign, facs) = best.expect("at least one candidate");
    m.coef *= qi(sign);
    m.facs = facs;
    normalize_phase(&mut m);
    if m.coef.is_zero() {
        None
    } else {
        Some(m)
    }
}

/// Folds powers of the imaginary unit: exponent reduced mod 4 into {0, 1}
/// with the sign absorbed into the coefficient.
fn normalize_phase(m: &mut Mono) {
    let e = m.scal.take_sym(Sym::ImagI);
    if e.is_zero() {
        return;
    }
    assert!(e.denom() == &1, "fractional power of the imaginary unit");
    let r = e.numer().rem_euclid(4);
    match r {
        0 => {}
        1 => m.scal.mul_sym(Sym::ImagI, num_rational::Ratio::from_integer(1)),
        2 => m.coef = -m.coef,
        3 => {
            m.coef = -m.coef;
            m.scal.mul_sym(Sym::ImagI, num_rational::Ratio::from_integer(1));
        }
        _ => unreachable!(),
    }
}
