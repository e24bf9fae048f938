//! Gauge-fixing densities for the quadratic action.

use crate::expr::{parse_expr, Expr, Head};

use super::PerturbError;

/// Supported gauge-fixing choices.
///
/// `Harmonic` adds `-(d^mu h_mu nu - d_nu h / 2)^2` for the graviton.
/// `LorenzStueckelberg` adds `-(d.dA - m phi)^2 / 2`, which cancels the
/// vector-scalar mixing produced by the scalar-restoring substitution and
/// gives both fields the same quadratic denominator.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Gauge {
    Harmonic,
    LorenzStueckelberg,
}

fn contains_head(e: &Expr, head: Head) -> bool {
    e.terms.iter().any(|m| m.facs.iter().any(|f| f.head == head))
}

fn density(lines: &[&str]) -> Expr {
    let mut acc = Expr::zero();
    for l in lines {
        acc = acc.add(&parse_expr(l).expect("builtin density parses"));
    }
    acc.canon()
}

/// The gauge-fixing density itself, before adding it to anything.
pub fn gauge_fixing_density(gauge: Gauge) -> Expr {
    match gauge {
        Gauge::Harmonic => density(&[
            "(* (coef -1 1) (scal) (fac h dn.a dn.b der up.a) (fac h up.c up.b der dn.c))",
            "(* (coef 1 1) (scal) (fac h dn.a dn.b der up.a) (fac h up.t dn.t der up.b))",
            "(* (coef -1 4) (scal) (fac h up.t dn.t der dn.b) (fac h up.u dn.u der up.b))",
        ]),
        Gauge::LorenzStueckelberg => density(&[
            "(* (coef -1 2) (scal) (fac dA up.a der dn.a) (fac dA up.b der dn.b))",
            "(* (coef 1 1) (scal m) (fac phi) (fac dA up.a der dn.a))",
            "(* (coef -1 2) (scal m^2) (fac phi) (fac phi))",
        ]),
    }
}

/// Adds the gauge-fixing density to a quadratic piece. The piece must
/// contain the field the gauge condition constrains.
pub fn add_gauge_fixing(l2: &Expr, gauge: Gauge) -> Result<Expr, PerturbError> {
    let ok = match gauge {
        Gauge::Harmonic => contains_head(l2, Head::H),
        Gauge::LorenzStueckelberg => {
            contains_head(l2, Head::DA) && contains_head(l2, Head::Phi)
        }
    };
    if !ok {
        let need = match gauge {
            Gauge::Harmonic => "a graviton sector",
            Gauge::LorenzStueckelberg => "a scalar-restored vector sector",
        };
        return Err(PerturbError::GaugeFieldMismatch(format!(
            "gauge choice {gauge:?} needs {need}"
        )));
    }
    Ok(l2.add(&gauge_fixing_density(gauge)).canon())
}
