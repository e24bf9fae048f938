//! Metric perturbation series around flat space.
//!
//! The metric is `g = eta + h` with the lower-index graviton as the
//! fundamental variable. Everything built from the metric (its inverse, the
//! volume factor, connection coefficients, the curvature scalar) is expanded
//! as a power series in `h` and truncated at a fixed total field order.
//! Indices on `h` are raised with the flat metric, so a mixed-variance `h`
//! factor always stands for an eta contraction that has been absorbed.

use crate::expr::factor::{Factor, Head};
use crate::expr::index::{bdn, bup, dn, up, Idx};
use crate::expr::num::{q, Q};
use crate::expr::{apply_partial, fac, fac_d, Expr, Mono, ScalMono};

fn mono(coef: Q, facs: Vec<Factor>) -> Mono {
    Mono::new(coef, ScalMono::one(), facs)
}

/// Chain (h^k)^{ab} with the outer indices supplied by the caller.
/// `k = 0` gives the flat metric.
fn h_chain(k: u32, a: Idx, b: Idx) -> Mono {
    if k == 0 {
        return mono(q(1, 1), vec![fac(Head::Eta, &[a, b])]);
    }
    let mut facs = Vec::new();
    let mut left = a;
    for step in 0..k {
        let right = if step + 1 == k { b } else { bup(step) };
        facs.push(fac(Head::H, &[left, right]));
        left = bdn(step);
    }
    mono(q(1, 1), facs)
}

/// Trace of the chain, tr(h^k) for `k >= 1`.
fn h_trace(k: u32) -> Mono {
    assert!(k >= 1);
    h_chain(k, bup(100), bdn(100))
}

/// Inverse metric `g^{ab}` as a series, `eta - h + h^2 - ...` with indices
/// raised by eta, truncated at `order` powers of the graviton.
pub fn inv_metric(order: u32, a: Idx, b: Idx) -> Expr {
    let mut terms = Vec::new();
    for k in 0..=order {
        let mut m = h_chain(k, a, b);
        if k % 2 == 1 {
            m.coef = -m.coef;
        }
        terms.push(m);
    }
    Expr::from_monos(terms).canon()
}

/// Lower metric `g_{ab} = eta_{ab} + h_{ab}`, exact.
pub fn metric_lower(a: Idx, b: Idx) -> Expr {
    Expr::from_monos(vec![
        mono(q(1, 1), vec![fac(Head::Eta, &[a, b])]),
        mono(q(1, 1), vec![fac(Head::H, &[a, b])]),
    ])
}

/// log sqrt(-g) = (1/2) tr log(1 + h), truncated at `order` gravitons.
pub fn log_sqrt_det(order: u32) -> Expr {
    let mut terms = Vec::new();
    for k in 1..=order {
        let mut m = h_trace(k);
        let sign = if k % 2 == 1 { q(1, 2) } else { q(-1, 2) };
        m.coef *= sign / Q::from(k as i128);
        terms.push(m);
    }
    Expr::from_monos(terms).canon()
}

/// Volume factor sqrt(-g) = exp(log sqrt(-g)), truncated at `order`
/// gravitons. The constant term is one.
pub fn sqrt_det(order: u32) -> Expr {
    let a = log_sqrt_det(order);
    let mut sum = Expr::scalar(q(1, 1));
    let mut pow = Expr::scalar(q(1, 1));
    let mut fact = Q::from(1);
    for k in 1..=order {
        pow = pow.mul(&a).truncate_fields(order).canon();
        fact *= Q::from(k as i128);
        sum = sum.add(&pow.scale(Q::from(1) / fact));
    }
    sum.truncate_fields(order).canon()
}

/// Connection coefficient with the first index up:
/// (1/2) g^{rs} (d_m h_{sn} + d_n h_{sm} - d_s h_{mn}),
/// truncated at `order` total gravitons including the differentiated one.
pub fn christoffel(order: u32, r: Idx, m_dn: Idx, n_dn: Idx) -> Expr {
    assert!(order >= 1);
    let ginv = inv_metric(order - 1, r, up("cgs"));
    let s = dn("cgs2");
    let dh = |der: Idx, i1: Idx, i2: Idx| -> Expr {
        Expr::mono(mono(q(1, 1), vec![fac_d(Head::H, &[i1, i2], &[der])]))
    };
    let sym = dh(m_dn, s, n_dn).add(&dh(n_dn, s, m_dn)).sub(&dh(s, m_dn, n_dn)).scale(q(1, 2));
    ginv.mul(&sym).bond_label_pair("cgs", "cgs2").truncate_fields(order).canon()
}

/// Curvature scalar as a graviton series truncated at `order` fields:
/// R = g^{mn} (d_r Gamma^r_{mn} - d_n Gamma^r_{rm}
///             + Gamma^r_{rl} Gamma^l_{mn} - Gamma^r_{nl} Gamma^l_{rm}).
pub fn ricci_scalar(order: u32) -> Expr {
    assert!(order >= 1);

    // d_r Gamma^r_{mn}
    let dr_g = {
        let g = christoffel(order, up("rr"), dn("rm1"), dn("rm2"));
        apply_partial(&g, dn("rd")).bond_label_pair("rr", "rd")
    };
    // d_n Gamma^r_{rm}: trace Gamma over (upper r, first lower r).
    let dn_g = {
        let g = christoffel(order, up("rr"), dn("rr2"), dn("rm1")).bond_label_pair("rr", "rr2");
        apply_partial(&g, dn("rm2"))
    };
    // Gamma^r_{rl} Gamma^l_{mn}
    let gg1 = {
        let ga = christoffel(order, up("rr"), dn("rr2"), dn("rl")).bond_label_pair("rr", "rr2");
        let gb = christoffel(order, up("rl2"), dn("rm1"), dn("rm2"));
        ga.mul(&gb).bond_label_pair("rl", "rl2")
    };
    // Gamma^r_{nl} Gamma^l_{rm}
    let gg2 = {
        let gc = christoffel(order, up("rr"), dn("rm2"), dn("rl"));
        let gd = christoffel(order, up("rl2"), dn("rr3"), dn("rm1"));
        gc.mul(&gd).bond_label_pair("rl", "rl2").bond_label_pair("rr", "rr3")
    };

    let ricci = dr_g.sub(&dn_g).add(&gg1).sub(&gg2).truncate_fields(order).canon();

    let ginv = inv_metric(order - 1, up("rm1b"), up("rm2b"));
    ginv.mul(&ricci)
        .bond_label_pair("rm1b", "rm1")
        .bond_label_pair("rm2b", "rm2")
        .truncate_fields(order)
        .canon()
}
