//! Scalar-restoring field redefinition and its inverse gauge choice.

use smallvec::SmallVec;

use crate::expr::{subst_head, Expr, Factor, Head, HeadBranch, ScalMono, Sym};

use super::graded::GradedLagrangian;

/// Replaces every vector factor by `dA + grad(phi)/m` and regrades. The
/// substitution preserves field-strength combinations exactly: the scalar
/// branch of an antisymmetrized pair cancels because partial derivatives
/// commute, so no explicit antisymmetry handling is needed here.
pub fn stueckelberg(l: &GradedLagrangian) -> GradedLagrangian {
    let inv_m = ScalMono::sym_pow(Sym::M, crate::expr::qei(-1));
    let mut acc = Expr::zero();
    for piece in l.pieces.values() {
        let s = subst_head(piece, Head::DA, &|f| {
            let mut ders: SmallVec<[crate::expr::Idx; 2]> = f.ders.clone();
            ders.push(f.slots[0]);
            let grad = Factor { head: Head::Phi, slots: SmallVec::new(), ders };
            vec![
                HeadBranch::unit(f.clone()),
                HeadBranch {
                    coef: crate::expr::qi(1),
                    scal: inv_m.clone(),
                    factor: Some(grad),
                },
            ]
        });
        acc = acc.add(&s);
    }
    GradedLagrangian::from_expr(&acc)
}

/// Unitary gauge: sets the restored scalar to zero, which simply drops
/// every piece carrying scalar content. Applied right after
/// [`stueckelberg`] this recovers the input bit for bit, because the
/// scalar-free branch of the substitution is the identity.
pub fn unitary_gauge(l: &GradedLagrangian) -> GradedLagrangian {
    GradedLagrangian {
        pieces: l
            .pieces
            .iter()
            .filter(|(c, _)| c.phi == 0)
            .map(|(c, e)| (*c, e.clone()))
            .collect(),
    }
}
