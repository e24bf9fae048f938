//! Decoupling limit: exponent bookkeeping over the fixed scales.

use num_traits::Zero;

use crate::expr::{print_expr, qe, qei, subst_scal_sym, Expr, Qe, ScalMono, Sym};

use super::graded::GradedLagrangian;
use super::PerturbError;

/// The limit `m -> 0`, `lam2 -> inf`, `mpl -> inf` with `lam3 = (lam2^2
/// m)^(1/3)` and `lam4 = (mpl m)^(1/2)` held fixed, encoded as exact
/// exponent substitutions onto the fixed set `{m, lam3, lam4}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScaleLimit {
    /// Replacement for each power of `lam2`.
    pub lam2: ScalMono,
    /// Replacement for each power of `mpl`.
    pub mpl: ScalMono,
}

impl ScaleLimit {
    pub fn standard() -> ScaleLimit {
        let lam2 = ScalMono::from_entries(vec![(Sym::Lam3, qe(3, 2)), (Sym::M, qe(-1, 2))]);
        let mpl = ScalMono::from_entries(vec![(Sym::Lam4, qei(2)), (Sym::M, qei(-1))]);
        ScaleLimit { lam2, mpl }
    }
}

/// Rewrites every scale prefactor as `m^a lam3^b lam4^c`, keeps the `a = 0`
/// terms, drops the `a > 0` terms, and treats `a < 0` as a hard error: such
/// a term would blow up in the limit, so surviving the limit is itself a
/// consistency check on the input action.
pub fn decoupling_limit(
    l: &GradedLagrangian,
    lim: &ScaleLimit,
) -> Result<GradedLagrangian, PerturbError> {
    let mut acc = Expr::zero();
    for piece in l.pieces.values() {
        let rewritten = subst_scal_sym(&subst_scal_sym(piece, Sym::Lam2, &lim.lam2), Sym::Mpl, &lim.mpl);
        let mut kept = Vec::new();
        for m in &rewritten.canon().terms {
            let a = m.scal.exp_of(Sym::M);
            if a > Qe::zero() {
                continue;
            }
            if a < Qe::zero() {
                return Err(PerturbError::DivergentLimit(print_expr(&Expr::mono(m.clone()))));
            }
            kept.push(m.clone());
        }
        acc = acc.add(&Expr::from_monos(kept));
    }
    Ok(GradedLagrangian::from_expr(&acc))
}
