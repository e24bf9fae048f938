//! Covariant action assembly around the flat, vanishing-vector background.
//!
//! The metric enters through the perturbation series of the geometry module
//! and the vector enters as the fundamental upper-index field, so every
//! invariant block below is an exact polynomial or a truncated series in
//! the perturbations. The output density is truncated at quartic field
//! order, which covers everything the downstream expansion consumes.

use num_traits::Zero;

use crate::expr::{apply_partial, fac, fac_d, q, Expr, Head, Mono, Qe, ScalMono};
use crate::expr::{bdn, bup, dn, up, Idx};
use crate::perturb::geom;

use super::config::ModelConfig;
use super::series::CouplingSeries;
use super::ModelError;

/// Total field order kept in the assembled density.
pub const ACTION_ORDER: u32 = 4;

/// Pure-graviton curvature terms are kept only through this field order;
/// higher graviton self-interactions are outside the supported sector.
const CURVATURE_ORDER: u32 = 2;

fn da(i: Idx) -> Expr {
    Expr::mono(Mono::new(q(1, 1), ScalMono::one(), vec![fac(Head::DA, &[i])]))
}

/// Lowered vector A_l = g_{lk} dA^k with the named free index.
fn a_low(lbl: &str) -> Expr {
    geom::metric_lower(dn(lbl), dn("avk"))
        .mul(&da(up("avk2")))
        .bond_label_pair("avk", "avk2")
}

/// Invariant X = -(1/2) g_{mn} dA^m dA^n, exact.
pub fn x_cov() -> Expr {
    geom::metric_lower(dn("xva"), dn("xvb"))
        .mul(&da(up("xva2")))
        .mul(&da(up("xvb2")))
        .bond_label_pair("xva", "xva2")
        .bond_label_pair("xvb", "xvb2")
        .scale(q(-1, 2))
        .canon()
}

/// Lower field strength F_{ab} = d_a A_b - d_b A_a, exact (the connection
/// cancels by antisymmetry).
fn f_low(a: &str, b: &str) -> Expr {
    apply_partial(&a_low(b), dn(a)).sub(&apply_partial(&a_low(a), dn(b)))
}

/// Kinetic scalar -(1/4) g^{ma} g^{nb} F_{mn} F_{ab} as a series.
pub fn f_scal_cov() -> Expr {
    let g1 = geom::inv_metric(2, up("fv1"), up("fv3"));
    let g2 = geom::inv_metric(2, up("fv2"), up("fv4"));
    g1.mul(&g2)
        .mul(&f_low("fv1b", "fv2b"))
        .mul(&f_low("fv3b", "fv4b"))
        .bond_label_pair("fv1", "fv1b")
        .bond_label_pair("fv2", "fv2b")
        .bond_label_pair("fv3", "fv3b")
        .bond_label_pair("fv4", "fv4b")
        .scale(q(-1, 4))
        .truncate_fields(ACTION_ORDER)
        .canon()
}

/// Invariant Y = dA^m dA^n F^a{}_m F_{na} with one series-raised index.
pub fn y_cov() -> Expr {
    da(up("yvm"))
        .mul(&da(up("yvn")))
        .mul(&geom::inv_metric(2, up("yva"), up("yvb")))
        .mul(&f_low("yvb2", "yvm2"))
        .mul(&f_low("yvn2", "yva2"))
        .bond_label_pair("yvm", "yvm2")
        .bond_label_pair("yvn", "yvn2")
        .bond_label_pair("yva", "yva2")
        .bond_label_pair("yvb", "yvb2")
        .truncate_fields(ACTION_ORDER)
        .canon()
}

/// Covariant divergence of the vector, d_m dA^m + Gamma^m_{mk} dA^k.
pub fn div_a() -> Expr {
    let flat = Expr::mono(Mono::new(
        q(1, 1),
        ScalMono::one(),
        vec![fac_d(Head::DA, &[bup(0)], &[bdn(0)])],
    ));
    let trace = geom::christoffel(3, up("dva"), dn("dva2"), dn("dvl"))
        .bond_label_pair("dva", "dva2")
        .mul(&da(up("dvl2")))
        .bond_label_pair("dvl", "dvl2");
    flat.add(&trace).truncate_fields(ACTION_ORDER).canon()
}

/// Covariant derivative of the lowered vector with both free indices down.
fn nabla_a_low(r: &str, s: &str) -> Expr {
    let partial = apply_partial(&a_low(s), dn(r));
    let conn = geom::christoffel(2, up("nvl"), dn(r), dn(s))
        .mul(&a_low("nvl2"))
        .bond_label_pair("nvl", "nvl2");
    partial.sub(&conn)
}

/// The quartic-family derivative structure (div A)^2 - nabla_r A_s
/// nabla^s A^r.
pub fn quartic_derivative_block() -> Expr {
    let d = div_a();
    let sq = d.mul(&d).truncate_fields(ACTION_ORDER).canon();
    let raised = geom::inv_metric(2, up("qv1"), up("qv3"))
        .mul(&geom::inv_metric(2, up("qv2"), up("qv4")))
        .mul(&nabla_a_low("qv3b", "qv4b"))
        .bond_label_pair("qv3", "qv3b")
        .bond_label_pair("qv4", "qv4b");
    let cross = nabla_a_low("qv2b", "qv1b")
        .mul(&raised)
        .bond_label_pair("qv1", "qv1b")
        .bond_label_pair("qv2", "qv2b")
        .truncate_fields(ACTION_ORDER)
        .canon();
    sq.sub(&cross).canon()
}

/// Curvature scalar times volume factor, pure-graviton sector.
fn dressed_curvature() -> Expr {
    geom::sqrt_det(CURVATURE_ORDER)
        .mul(&geom::ricci_scalar(CURVATURE_ORDER))
        .truncate_fields(CURVATURE_ORDER)
        .canon()
}

/// Series value as a field polynomial with covariant blocks, truncated.
fn series_cov(series: &CouplingSeries, y_allowed: bool) -> Result<Expr, ModelError> {
    let mut acc = Expr::zero();
    for t in &series.terms {
        if t.coef.is_zero() || t.field_order() > ACTION_ORDER {
            continue;
        }
        if t.ey > 0 && !y_allowed {
            return Err(ModelError::SectorFlagConflict("include_Y_sector".into()));
        }
        let mut block = Expr::mono(Mono::new(t.coef, t.scal.clone(), Vec::new()));
        for _ in 0..t.ex {
            block = block.mul(&x_cov()).truncate_fields(ACTION_ORDER).canon();
        }
        for _ in 0..t.ey {
            block = block.mul(&y_cov()).truncate_fields(ACTION_ORDER).canon();
        }
        for _ in 0..t.ef {
            block = block.mul(&f_scal_cov()).truncate_fields(ACTION_ORDER).canon();
        }
        acc = acc.add(&block);
    }
    Ok(acc.canon())
}

/// Assembles the covariant Lagrangian density for a configuration, expanded
/// in the perturbations and truncated at quartic field order.
///
/// A configuration with no quartic coupling at all has no dynamical metric;
/// the density is then assembled on the flat background (the volume factor
/// and all metric dressings collapse to the flat metric).
pub fn build_action(cfg: &ModelConfig) -> Result<Expr, ModelError> {
    cfg.validate()?;
    for fam_series in [&cfg.g5, &cfg.small_g5, &cfg.g6] {
        if !fam_series.is_zero() {
            return Err(ModelError::UnsupportedExplicitSector(
                fam_series.fam.base_name().into(),
            ));
        }
    }
    let gravity_on = !cfg.g4.is_zero();
    let sq = if gravity_on { geom::sqrt_det(ACTION_ORDER) } else { Expr::scalar(q(1, 1)) };
    let dress = |e: &Expr| sq.mul(e).truncate_fields(ACTION_ORDER).canon();

    let g2_val = if gravity_on {
        series_cov(&cfg.g2, cfg.include_y_sector)?
    } else {
        // flat blocks only
        super::series::taylor_expand_couplings(&cfg.g2, ACTION_ORDER)?
    };
    let mut lagr = dress(&g2_val);

    if !cfg.g3.is_zero() {
        let g3_val = series_cov(&cfg.g3, false)?;
        let l3 = g3_val.mul(&div_a()).truncate_fields(ACTION_ORDER).canon();
        lagr = lagr.add(&dress(&l3));
    }

    if gravity_on {
        // curvature term: every coupling term multiplies the dressed
        // curvature scalar, which is itself kept to quadratic field order
        let r = dressed_curvature();
        for t in &cfg.g4.terms {
            if t.coef.is_zero() {
                continue;
            }
            let mut block = Expr::mono(Mono::new(t.coef, t.scal.clone(), Vec::new()));
            for _ in 0..t.ex {
                block = block.mul(&x_cov()).truncate_fields(ACTION_ORDER).canon();
            }
            lagr = lagr.add(&block.mul(&r).truncate_fields(ACTION_ORDER).canon());
        }
        // derivative self-interactions from the X-dependence
        let g4x = cfg.g4.x_derivative();
        if !g4x.is_zero() {
            let val = series_cov(&g4x, false)?;
            let l4x = val
                .mul(&quartic_derivative_block())
                .truncate_fields(ACTION_ORDER)
                .canon();
            lagr = lagr.add(&dress(&l4x));
        }
    }

    let lagr = lagr.canon();
    check_density_dim(&lagr, 0)?;
    Ok(lagr)
}

/// Every monomial of a Lagrangian density must have mass dimension four.
/// `h_dim` is zero before canonical normalization (the metric perturbation
/// is dimensionless) and one after.
pub fn check_density_dim(e: &Expr, h_dim: i32) -> Result<(), ModelError> {
    for m in &e.terms {
        let mut d = m.scal.mass_dim();
        for f in &m.facs {
            let fd: i32 = match f.head {
                Head::H => h_dim,
                Head::DA | Head::Phi | Head::ABar => 1,
                Head::FdA => 2,
                Head::Mom(_) | Head::LoopK => 1,
                _ => 0,
            };
            d += Qe::from_integer(fd + f.ders.len() as i32);
        }
        if d != Qe::from_integer(4) {
            return Err(ModelError::DensityDimension(format!("{d}")));
        }
    }
    Ok(())
}

/// Restriction of a density to its `n`-field graded piece.
pub fn field_grade(e: &Expr, n: u32) -> Expr {
    Expr::from_monos(
        e.terms
            .iter()
            .filter(|m| Expr::field_count(m) == n)
            .cloned()
            .collect(),
    )
}
