//! Canonical normalization of the kinetic terms.
//!
//! The normalization constants are read off the quadratic pieces
//! themselves: the vector piece must be a multiple of the Maxwell form and
//! the graviton piece a multiple of the linearized curvature-squared form.
//! Rescaling each field by the inverse square root of its multiple makes
//! both kinetic operators unit-normalized.

use num_traits::Zero;

use crate::expr::{
    ibp_normal_form, parse_expr, q, qe, qei, Expr, ScalMono, DEFAULT_PRIORITY, Q,
};

use super::graded::{Content, GradedLagrangian};
use super::PerturbError;

/// Square root of a nonnegative rational, exact or nothing.
pub fn q_sqrt(v: &Q) -> Option<Q> {
    if v.is_zero() {
        return Some(Q::zero());
    }
    if *v.numer() < 0 {
        return None;
    }
    let root = |n: i128| -> Option<i128> {
        let mut r = (n as f64).sqrt().round() as i128;
        while r * r > n {
            r -= 1;
        }
        while (r + 1) * (r + 1) <= n {
            r += 1;
        }
        (r * r == n).then_some(r)
    };
    Some(Q::new(root(*v.numer())?, root(*v.denom())?))
}

/// Field rescalings applied by [`canonical_normalize`], together with the
/// effective squared mass read off the normalized quadratic piece.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Normalization {
    /// Multiplier absorbed into every vector factor.
    pub da_factor: (Q, ScalMono),
    /// Multiplier absorbed into every graviton factor.
    pub h_factor: (Q, ScalMono),
    /// Coefficient of the canonical mass form `dA^2/2`, if a mass term is
    /// present.
    pub mass2: Option<(Q, ScalMono)>,
}

fn parse_density(lines: &[&str]) -> Expr {
    let mut acc = Expr::zero();
    for l in lines {
        acc = acc.add(&parse_expr(l).expect("builtin density parses"));
    }
    ibp_normal_form(&acc.canon(), &DEFAULT_PRIORITY)
}

/// Maxwell kinetic density `-F^2/4` written out in gradient form.
pub fn vector_kinetic_form() -> Expr {
    parse_density(&[
        "(* (coef -1 2) (scal) (fac dA up.a der up.b) (fac dA dn.a der dn.b))",
        "(* (coef 1 2) (scal) (fac dA up.a der up.b) (fac dA dn.b der dn.a))",
    ])
}

/// Canonical vector mass form `dA^2/2`.
pub fn vector_mass_form() -> Expr {
    parse_density(&["(* (coef 1 2) (scal) (fac dA up.a) (fac dA dn.a))"])
}

/// Quadratic piece of `sqrt(-g) R` around flat space, at unit coupling.
pub fn graviton_kinetic_form() -> Expr {
    parse_density(&[
        "(* (coef -1 2) (scal) (fac h up.m up.n) (fac h dn.m dn.r der dn.n up.r))",
        "(* (coef 1 2) (scal) (fac h up.t dn.t) (fac h dn.n dn.r der up.n up.r))",
        "(* (coef 1 4) (scal) (fac h up.m up.n) (fac h dn.m dn.n der up.s dn.s))",
        "(* (coef -1 4) (scal) (fac h up.t dn.t) (fac h up.u dn.u der up.s dn.s))",
    ])
}

fn der_split(e: &Expr, ders: usize) -> (Expr, Expr) {
    let mut matching = Vec::new();
    let mut rest = Vec::new();
    for m in &e.terms {
        let n: usize = m.facs.iter().map(|f| f.ders.len()).sum();
        if n == ders {
            matching.push(m.clone());
        } else {
            rest.push(m.clone());
        }
    }
    (Expr::from_monos(matching), Expr::from_monos(rest))
}

fn inverse_sqrt(v: &(Q, ScalMono), what: &str) -> Result<(Q, ScalMono), PerturbError> {
    let root = q_sqrt(&v.0).ok_or_else(|| {
        PerturbError::IrrationalNormalization(format!("{what} coefficient {} has no exact square root", v.0))
    })?;
    if root.is_zero() {
        return Err(PerturbError::VanishingNormalization(what.to_string()));
    }
    Ok((root.recip(), v.1.pow(qe(-1, 2))))
}

/// Rescales the vector and graviton fields so their kinetic operators carry
/// unit normalization, returning the rescaled action and the factors used.
///
/// Sectors absent from the input are left untouched; a present sector whose
/// quadratic piece is missing or not proportional to the reference kinetic
/// form is an error.
pub fn canonical_normalize(
    l: &GradedLagrangian,
) -> Result<(GradedLagrangian, Normalization), PerturbError> {
    let has_da = l.pieces.keys().any(|c| c.da > 0);
    let has_h = l.pieces.keys().any(|c| c.h > 0);

    let mut da_factor = (Q::new(1, 1), ScalMono::one());
    if has_da {
        let quad = l.piece(Content::new(0, 2, 0));
        let (kin, rest) = der_split(&quad, 2);
        let (_mass, extra) = der_split(&rest, 0);
        if !extra.is_zero() {
            return Err(PerturbError::KineticMismatch(
                "quadratic vector piece carries derivative structures beyond the Maxwell form"
                    .into(),
            ));
        }
        let lam = kin.proportionality(&vector_kinetic_form()).ok_or_else(|| {
            PerturbError::KineticMismatch(
                "quadratic vector piece is not a multiple of the Maxwell form".into(),
            )
        })?;
        da_factor = inverse_sqrt(&lam, "vector kinetic")?;
    }

    let mut h_factor = (Q::new(1, 1), ScalMono::one());
    if has_h {
        let quad = l.piece(Content::new(2, 0, 0));
        let mu = quad.proportionality(&graviton_kinetic_form()).ok_or_else(|| {
            PerturbError::KineticMismatch(
                "quadratic graviton piece is not a multiple of the linearized curvature form"
                    .into(),
            )
        })?;
        // h = sqrt(2/mu) h_can turns mu * (form) into 2 * (form).
        let half_mu = (mu.0 / q(2, 1), mu.1.clone());
        h_factor = inverse_sqrt(&half_mu, "graviton kinetic")?;
    }

    let mut pieces = std::collections::BTreeMap::new();
    for (c, e) in &l.pieces {
        let k = da_factor.0.pow(c.da as i32) * h_factor.0.pow(c.h as i32);
        let s = da_factor
            .1
            .pow(qei(c.da as i32))
            .mul(&h_factor.1.pow(qei(c.h as i32)));
        pieces.insert(*c, e.scale(k).scale_scal(&s).canon());
    }
    let out = GradedLagrangian { pieces };

    let mass2 = if has_da {
        let (mass, _) = der_split(&out.piece(Content::new(0, 2, 0)), 0);
        if mass.is_zero() {
            None
        } else {
            Some(mass.proportionality(&vector_mass_form()).ok_or_else(|| {
                PerturbError::KineticMismatch(
                    "quadratic vector mass term is not a multiple of dA^2".into(),
                )
            })?)
        }
    } else {
        None
    };

    Ok((out, Normalization { da_factor, h_factor, mass2 }))
}
