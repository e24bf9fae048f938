//! Coupling-function series in the invariant scalars.
//!
//! A coupling function is stored as a truncated polynomial in the three
//! invariants `X = -A.A/2`, `Y = A A F F`, and the kinetic scalar
//! `F = -F_{mn}F^{mn}/4`, each term carrying an exact rational coefficient
//! and a scalar monomial holding both the dimensionless series symbol and
//! its scale prefactor. Dimensional consistency of every term is checked
//! against the mass dimension of the parent coupling family.

use crate::expr::{q, qei, Expr, Fam, Mono, Q, Qe, ScalMono, Sym};
use crate::expr::{bdn, bup, fac, Head};
use num_traits::Zero;

use super::ModelError;

/// One term `coef * scal * X^ex Y^ey F^ef` of a coupling series.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CouplingTerm {
    pub ex: u8,
    pub ey: u8,
    pub ef: u8,
    pub coef: Q,
    pub scal: ScalMono,
}

impl CouplingTerm {
    pub fn new(ex: u8, ey: u8, ef: u8, coef: Q, scal: ScalMono) -> CouplingTerm {
        CouplingTerm { ex, ey, ef, coef, scal }
    }

    /// Number of perturbation fields the block expands into: two per X,
    /// four per Y, two per F.
    pub fn field_order(&self) -> u32 {
        2 * self.ex as u32 + 4 * self.ey as u32 + 2 * self.ef as u32
    }

    /// Mass dimension of the invariant block itself.
    pub fn block_dim(&self) -> i32 {
        2 * self.ex as i32 + 6 * self.ey as i32 + 4 * self.ef as i32
    }
}

/// Truncated series for one coupling family.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CouplingSeries {
    pub fam: Fam,
    pub terms: Vec<CouplingTerm>,
    /// Field order through which the stored terms are complete. Exact
    /// polynomials use `u8::MAX`.
    pub trunc: u8,
}

impl CouplingSeries {
    pub fn zero(fam: Fam) -> CouplingSeries {
        CouplingSeries { fam, terms: Vec::new(), trunc: u8::MAX }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coef.is_zero())
    }

    /// Term-wise d/dX.
    pub fn x_derivative(&self) -> CouplingSeries {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.ex > 0)
            .map(|t| CouplingTerm {
                ex: t.ex - 1,
                coef: t.coef * Q::from(t.ex as i128),
                ..t.clone()
            })
            .collect();
        CouplingSeries { fam: self.fam, terms, trunc: self.trunc }
    }

    /// Dimension bookkeeping plus the structural rules: only the kinetic
    /// family depends on Y and F, a constant cubic coupling and a linear
    /// quintic coupling multiply total derivatives and must vanish.
    pub fn validate(&self) -> Result<(), ModelError> {
        for t in &self.terms {
            if t.coef.is_zero() {
                continue;
            }
            let want = Qe::from_integer(self.fam.base_dim());
            let got = t.scal.mass_dim() + Qe::from_integer(t.block_dim());
            if got != want {
                return Err(ModelError::DimensionMismatch {
                    fam: self.fam.base_name().into(),
                    ex: t.ex,
                    ey: t.ey,
                    ef: t.ef,
                    got: format!("{got}"),
                    want: format!("{want}"),
                });
            }
            if self.fam != Fam::G2 && (t.ey > 0 || t.ef > 0) {
                return Err(ModelError::BadSeriesVariable(self.fam.base_name().into()));
            }
            if self.fam == Fam::G3 && t.ex == 0 && t.ey == 0 && t.ef == 0 {
                return Err(ModelError::TotalDerivativeCoef(
                    "constant term of the cubic coupling".into(),
                ));
            }
            if self.fam == Fam::G5 && t.ex == 1 {
                return Err(ModelError::TotalDerivativeCoef(
                    "linear term of the quintic coupling".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Flat-space invariant blocks used by the Taylor expansion.
pub(crate) fn x_flat() -> Expr {
    Expr::mono(Mono::new(
        q(-1, 2),
        ScalMono::one(),
        vec![fac(Head::DA, &[bup(0)]), fac(Head::DA, &[bdn(0)])],
    ))
}

pub(crate) fn f_scal_flat() -> Expr {
    Expr::mono(Mono::new(
        q(-1, 4),
        ScalMono::one(),
        vec![fac(Head::FdA, &[bdn(0), bdn(1)]), fac(Head::FdA, &[bup(0), bup(1)])],
    ))
}

pub(crate) fn y_flat() -> Expr {
    Expr::mono(Mono::new(
        q(1, 1),
        ScalMono::one(),
        vec![
            fac(Head::DA, &[bup(0)]),
            fac(Head::DA, &[bup(1)]),
            fac(Head::FdA, &[bup(2), bdn(0)]),
            fac(Head::FdA, &[bdn(1), bdn(2)]),
        ],
    ))
}

/// Expands a coupling series into a flat-space field polynomial, truncated
/// at `order` perturbation fields. The stored coefficients are the
/// background values of the coupling and its derivatives, so the result is
/// the Taylor expansion about the vanishing-vector background.
pub fn taylor_expand_couplings(series: &CouplingSeries, order: u32) -> Result<Expr, ModelError> {
    if order > series.trunc as u32 {
        return Err(ModelError::TruncationExceeded {
            fam: series.fam.base_name().into(),
            stored: series.trunc,
            requested: order,
        });
    }
    series.validate()?;
    let mut acc = Expr::zero();
    for t in &series.terms {
        if t.coef.is_zero() || t.field_order() > order {
            continue;
        }
        let mut block = Expr::mono(Mono::new(t.coef, t.scal.clone(), Vec::new()));
        for _ in 0..t.ex {
            block = block.mul(&x_flat());
        }
        for _ in 0..t.ey {
            block = block.mul(&y_flat());
        }
        for _ in 0..t.ef {
            block = block.mul(&f_scal_flat());
        }
        acc = acc.add(&block);
    }
    Ok(acc.canon())
}

/// Shorthand for a scalar monomial with integer exponents.
pub(crate) fn scal_of(entries: &[(Sym, i32)]) -> ScalMono {
    let mut s = ScalMono::one();
    for &(sym, e) in entries {
        s.mul_sym(sym, qei(e));
    }
    s
}
