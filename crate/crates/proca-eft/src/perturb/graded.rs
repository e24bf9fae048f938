//! Grading of the expanded action by field content.

use std::collections::BTreeMap;

use crate::expr::{ibp_normal_form, Expr, Head, Mono, DEFAULT_PRIORITY};

use super::PerturbError;

/// Field content of a monomial: how many graviton, vector, and scalar
/// factors it carries. The field strength counts as one vector factor,
/// though canonical form expands it before grading ever sees one.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Content {
    pub h: u8,
    pub da: u8,
    pub phi: u8,
}

impl Content {
    pub fn new(h: u8, da: u8, phi: u8) -> Content {
        Content { h, da, phi }
    }

    pub fn of(m: &Mono) -> Content {
        let mut c = Content { h: 0, da: 0, phi: 0 };
        for f in &m.facs {
            match f.head {
                Head::H => c.h += 1,
                Head::DA | Head::FdA => c.da += 1,
                Head::Phi => c.phi += 1,
                _ => {}
            }
        }
        c
    }

    /// Total perturbation order of the piece.
    pub fn order(&self) -> u32 {
        self.h as u32 + self.da as u32 + self.phi as u32
    }
}

impl std::fmt::Display for Content {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for (n, label) in [(self.h, "h"), (self.da, "dA"), (self.phi, "phi")] {
            if n > 0 {
                parts.push(if n == 1 { label.to_string() } else { format!("{label}^{n}") });
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Action organized by field content. Every piece is an `ibp_normal_form`
/// fixed point, so piece equality is literal expression equality.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GradedLagrangian {
    pub pieces: BTreeMap<Content, Expr>,
}

impl GradedLagrangian {
    /// Splits an expression by field content and normalizes each piece.
    /// Pieces that normalize to zero are not stored.
    pub fn from_expr(e: &Expr) -> GradedLagrangian {
        let mut buckets: BTreeMap<Content, Vec<Mono>> = BTreeMap::new();
        for m in &e.clone().canon().terms {
            buckets.entry(Content::of(m)).or_default().push(m.clone());
        }
        let mut pieces = BTreeMap::new();
        for (c, monos) in buckets {
            let piece = ibp_normal_form(&Expr::from_monos(monos), &DEFAULT_PRIORITY);
            if !piece.is_zero() {
                pieces.insert(c, piece);
            }
        }
        GradedLagrangian { pieces }
    }

    /// The stored piece with the given content, or zero.
    pub fn piece(&self, c: Content) -> Expr {
        self.pieces.get(&c).cloned().unwrap_or_else(Expr::zero)
    }

    /// Sum of all pieces of total order `n`.
    pub fn order_piece(&self, n: u32) -> Expr {
        let mut acc = Expr::zero();
        for (c, e) in &self.pieces {
            if c.order() == n {
                acc = acc.add(e);
            }
        }
        acc.canon()
    }

    pub fn max_order(&self) -> u32 {
        self.pieces.keys().map(|c| c.order()).max().unwrap_or(0)
    }

    pub fn total(&self) -> Expr {
        let mut acc = Expr::zero();
        for e in self.pieces.values() {
            acc = acc.add(e);
        }
        acc.canon()
    }
}

/// Expands a covariant action into graded pieces of order 2 through
/// `order`. The flat background must be a stationary point: the constant
/// piece must vanish identically and the linear piece up to total
/// derivatives.
pub fn expand_perturbations(action: &Expr, order: u32) -> Result<GradedLagrangian, PerturbError> {
    if !(2..=4).contains(&order) {
        return Err(PerturbError::UnsupportedOrder(order));
    }
    let graded = GradedLagrangian::from_expr(action);
    for c in graded.pieces.keys() {
        if c.order() < 2 {
            return Err(PerturbError::BackgroundNotStationary(format!(
                "order-{} piece `{}` survives integration by parts",
                c.order(),
                c
            )));
        }
    }
    let pieces = graded
        .pieces
        .into_iter()
        .filter(|(c, _)| c.order() <= order)
        .collect();
    Ok(GradedLagrangian { pieces })
}
