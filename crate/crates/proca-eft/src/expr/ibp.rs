//! Integration-by-parts normal form for Lagrangian densities.
//!
//! Within a content class (field-head multiset plus total derivative count)
//! the space of fully contracted monomials is finite. Total derivatives of
//! one-free-index monomials with one derivative less span the subspace that
//! integration by parts can remove. The normal form is the exact linear
//! projection along that subspace, so equal-modulo-total-derivative inputs
//! reduce to bit-identical outputs, and the reduction is a projection by
//! construction.
//!
//! The field priority list orders the basis so that elimination prefers to
//! remove monomials whose derivatives sit on high-priority fields.

use super::deriv::total_derivative;
use super::factor::{Factor, Head};
use super::index::{intern_label, Idx};
use super::mono::{Expr, Mono};
use super::num::Q;
use super::sym::ScalMono;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use smallvec::SmallVec;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

/// Default variable-priority order used by the Lagrangian comparisons.
pub const DEFAULT_PRIORITY: [Head; 3] = [Head::Phi, Head::DA, Head::H];

type ClassKey = (Vec<Head>, u32, Vec<Head>);

struct ClassTable {
    basis: Vec<Vec<Factor>>,
    index: HashMap<Vec<Factor>, usize>,
    /// Gauss-Jordan pivot rows keyed by leading column.
    pivots: BTreeMap<usize, Vec<Q>>,
}

static TABLES: Lazy<Mutex<HashMap<ClassKey, Arc<ClassTable>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Canonical representative modulo total derivatives. The input must be a
/// fully contracted position-space density (no free indices, fields only).
pub fn ibp_normal_form(e: &Expr, priority: &[Head]) -> Expr {
    let e = e.clone().canon();
    let mut groups: BTreeMap<(Vec<Head>, u32, ScalMono), Vec<Mono>> = BTreeMap::new();
    for m in e.terms {
        assert!(
            m.free_indices().is_empty(),
            "integration by parts applies to fully contracted densities"
        );
        for f in &m.facs {
            assert!(
                f.head.is_field() || f.head == Head::Lc,
                "unexpected factor `{}` in a position-space density",
                f.head.name()
            );
        }
        let mut heads: Vec<Head> = m.facs.iter().map(|f| f.head).collect();
        heads.sort();
        let d: u32 = m.facs.iter().map(|f| f.ders.len() as u32).sum();
        groups.entry((heads, d, m.scal.clone())).or_default().push(m);
    }
    let mut out_terms = Vec::new();
    for ((heads, d, scal), monos) in groups {
        let table = class_table(&heads, d, priority);
        let mut coords = vec![Q::zero(); table.basis.len()];
        for m in &monos {
            let idx = *table
                .index
                .get(&m.facs)
                .expect("canonical monomial must lie in the enumerated class basis");
            coords[idx] += m.coef;
        }
        reduce_in_place(&mut coords, &table.pivots);
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                out_terms.push(Mono::new(*c, scal.clone(), table.basis[i].clone()));
            }
        }
    }
    Expr::from_monos(out_terms).canon()
}

/// Equality modulo total derivatives.
pub fn equal_mod_ibp(a: &Expr, b: &Expr, priority: &[Head]) -> bool {
    ibp_normal_form(&a.sub(b), priority).is_zero()
}

fn reduce_in_place(v: &mut [Q], pivots: &BTreeMap<usize, Vec<Q>>) {
    for (&col, row) in pivots {
        if !v[col].is_zero() {
            let k = v[col];
            for (x, r) in v.iter_mut().zip(row.iter()) {
                *x -= k * *r;
            }
        }
    }
}

fn class_table(heads: &[Head], d: u32, priority: &[Head]) -> Arc<ClassTable> {
    let key: ClassKey = (heads.to_vec(), d, priority.to_vec());
    if let Some(t) = TABLES.lock().unwrap().get(&key) {
        return Arc::clone(t);
    }
    let t = Arc::new(build_class_table(heads, d, priority));
    TABLES.lock().unwrap().insert(key, Arc::clone(&t));
    t
}

fn build_class_table(heads: &[Head], d: u32, priority: &[Head]) -> ClassTable {
    // Basis: every canonical fully contracted monomial of this content.
    let mut basis_set: BTreeSet<Vec<Factor>> = BTreeSet::new();
    for facs in enumerate_protos(heads, d, None) {
        basis_set.insert(facs);
    }
    let mut basis: Vec<Vec<Factor>> = basis_set.into_iter().collect();
    // Pivot preference: eliminate monomials whose derivatives load the
    // high-priority fields first.
    let badness = |facs: &Vec<Factor>| -> Vec<i64> {
        priority
            .iter()
            .map(|h| {
                -(facs
                    .iter()
                    .filter(|f| f.head == *h)
                    .map(|f| f.ders.len() as i64)
                    .sum::<i64>())
            })
            .collect()
    };
    basis.sort_by(|a, b| (badness(a), a).cmp(&(badness(b), b)));
    let index: HashMap<Vec<Factor>, usize> =
        basis.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();

    // Generators: total derivatives of one-free-index monomials with one
    // derivative less.
    let mut pivots: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
    if d > 0 {
        let free = Idx::free(intern_label("_ibp"), true);
        let mut w_set: BTreeSet<Vec<Factor>> = BTreeSet::new();
        for facs in enumerate_protos(heads, d - 1, Some(free)) {
            w_set.insert(facs);
        }
        for w in w_set {
            let gen = total_derivative(
                &Expr::mono(Mono::new(Q::one(), ScalMono::one(), w)),
                "_ibp",
            )
            .canon();
            if gen.is_zero() {
                continue;
            }
            let mut row = vec![Q::zero(); basis.len()];
            for m in &gen.terms {
                assert!(m.scal.is_one(), "generator must stay scalar-free");
                let idx = *index.get(&m.facs).expect("generator lands inside the class basis");
                row[idx] += m.coef;
            }
            insert_row(&mut pivots, row);
        }
    }
    ClassTable { basis, index, pivots }
}

fn insert_row(pivots: &mut BTreeMap<usize, Vec<Q>>, mut row: Vec<Q>) {
    reduce_in_place(&mut row, pivots);
    let Some(lead) = row.iter().position(|c| !c.is_zero()) else {
        return;
    };
    let k = row[lead];
    for c in row.iter_mut() {
        *c /= k;
    }
    // keep existing pivots clean (Gauss-Jordan)
    for (_, prow) in pivots.iter_mut() {
        if !prow[lead].is_zero() {
            let k = prow[lead];
            for (x, r) in prow.iter_mut().zip(row.iter()) {
                *x -= k * *r;
            }
        }
    }
    pivots.insert(lead, row);
}

/// Enumerates canonical monomials of the given head multiset with `d`
/// derivative indices distributed over differentiable factors, fully
/// contracted except for an optional single free index.
fn enumerate_protos(heads: &[Head], d: u32, free: Option<Idx>) -> Vec<Vec<Factor>> {
    let diff_pos: Vec<usize> =
        (0..heads.len()).filter(|&i| heads[i].differentiable()).collect();
    let mut out = Vec::new();
    for comp in compositions(d, diff_pos.len()) {
        let mut ders_per_factor = vec![0u32; heads.len()];
        for (k, &p) in diff_pos.iter().enumerate() {
            ders_per_factor[p] = comp[k];
        }
        // index positions: (factor, slot?, position)
        let mut positions: Vec<(usize, bool, usize)> = Vec::new();
        for (fi, h) in heads.iter().enumerate() {
            for s in 0..h.arity() {
                positions.push((fi, true, s));
            }
            for dd in 0..ders_per_factor[fi] as usize {
                positions.push((fi, false, dd));
            }
        }
        let build = |pairs: &[((usize, bool, usize), (usize, bool, usize))],
                     free_at: Option<(usize, bool, usize)>|
         -> Option<Vec<Factor>> {
            let mut facs: Vec<Factor> = heads
                .iter()
                .enumerate()
                .map(|(fi, h)| Factor {
                    head: *h,
                    slots: SmallVec::from_elem(Idx::bond(u32::MAX, true), h.arity()),
                    ders: SmallVec::from_elem(
                        Idx::bond(u32::MAX, true),
                        ders_per_factor[fi] as usize,
                    ),
                })
                .collect();
            let mut set = |p: (usize, bool, usize), v: Idx| {
                if p.1 {
                    facs[p.0].slots[p.2] = v;
                } else {
                    facs[p.0].ders[p.2] = v;
                }
            };
            for (b, (p1, p2)) in pairs.iter().enumerate() {
                set(*p1, Idx::bond(b as u32, true));
                set(*p2, Idx::bond(b as u32, false));
            }
            if let Some(p) = free_at {
                set(p, free.expect("free index provided"));
            }
            let e = Expr::mono(Mono::new(Q::one(), ScalMono::one(), facs)).canon();
            match e.terms.len() {
                0 => None,
                1 => Some(e.terms[0].facs.clone()),
                _ => unreachable!("single proto canonicalizes to at most one monomial"),
            }
        };
        match free {
            None => {
                if positions.len() % 2 != 0 {
                    continue;
                }
                for pairs in matchings(&positions) {
                    if let Some(f) = build(&pairs, None) {
                        out.push(f);
                    }
                }
            }
            Some(_) => {
                if positions.len() % 2 != 1 {
                    continue;
                }
                for (i, &p) in positions.iter().enumerate() {
                    let rest: Vec<_> =
                        positions.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &q)| q).collect();
                    for pairs in matchings(&rest) {
                        if let Some(f) = build(&pairs, Some(p)) {
                            out.push(f);
                        }
                    }
                }
            }
        }
    }
    out
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

type Pos = (usize, bool, usize);

fn matchings(positions: &[Pos]) -> Vec<Vec<(Pos, Pos)>> {
    if positions.is_empty() {
        return vec![vec![]];
    }
    let first = positions[0];
    let mut out = Vec::new();
    for i in 1..positions.len() {
        let partner = positions[i];
        let rest: Vec<Pos> = positions[1..]
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i - 1)
            .map(|(_, &p)| p)
            .collect();
        for mut sub in matchings(&rest) {
            let mut v = vec![(first, partner)];
            v.append(&mut sub);
            out.push(v);
        }
    }
    out
}
