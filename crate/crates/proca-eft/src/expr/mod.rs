//! Exact symbolic tensor-polynomial engine.
//!
//! Expressions are sums of monomials `rational * scalar monomial * tensor
//! factors` over a flat mostly-minus background. The engine provides
//! canonical forms, Levi-Civita pair reduction, functional derivatives, an
//! integration-by-parts normal form, a bit-exact textual serialization, and
//! an exact numeric evaluator used as the test oracle.

mod canon;
mod deriv;
mod ibp;
mod io;
pub mod num;
mod numeric;
mod subst;
pub mod sym;

pub mod factor;
pub mod index;
mod mono;

pub use deriv::{apply_partial, functional_derivative, total_derivative};
pub use factor::{fac, fac_d, Factor, Head, Sym2};
pub use ibp::{equal_mod_ibp, ibp_normal_form, DEFAULT_PRIORITY};
pub use index::{bdn, bup, dn, up, Idx};
pub use io::{parse_expr, print_expr};
pub use mono::{Expr, Mono};
pub use num::{q, qe, qei, qi, EpsSeries, Q, Qe};
pub use numeric::{eval_eq, eval_expr, NumEnv};
pub use subst::{
    coeff_of_sym, dim_to_four, dimreg_pole_part, drop_sym, subst_head, subst_scal_sym, HeadBranch,
};
pub use sym::{CoefVar, Fam, ScalMono, Sym};

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("malformed expression: {0}")]
    Malformed(String),
    #[error("index label `{0}` occurs more than twice in one monomial")]
    TripleIndex(String),
    #[error("free-index mismatch: {0}")]
    FreeMismatch(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Canonical normal form; the only equality notion used by the crate.
pub fn canonicalize(e: Expr) -> Result<Expr, ExprError> {
    e.canonical()
}

/// Replaces every product of two Levi-Civita symbols by the signed metric
/// determinant expansion. Part of the canonical pass; exposed separately
/// because single factors must pass through untouched.
pub fn epsilon_reduce(e: Expr) -> Result<Expr, ExprError> {
    e.canonical()
}
