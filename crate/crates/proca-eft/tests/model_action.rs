//! End-to-end checks of the model layer: coupling series, configuration
//! parsing, and the assembled Lagrangian density against hand-expanded
//! reference forms.

use num_traits::Zero;
use proca_eft::expr::{
    equal_mod_ibp, ibp_normal_form, parse_expr, print_expr, q, qei, CoefVar, Expr, Fam, Head,
    ScalMono, Sym, DEFAULT_PRIORITY,
};
use proca_eft::model::{
    action, build_action, check_density_dim, field_grade, taylor_expand_couplings, CouplingSeries,
    CouplingTerm, ModelConfig, ModelError,
};
use proca_eft::perturb::geom;

fn parse(s: &str) -> Expr {
    parse_expr(s).unwrap().canon()
}

fn assert_same(a: &Expr, b: &Expr) {
    let d = a.sub(b).canon();
    assert!(d.is_zero(), "expressions differ by:\n{}", print_expr(&d));
}

fn assert_same_ibp(a: &Expr, b: &Expr) {
    assert!(
        equal_mod_ibp(a, b, &DEFAULT_PRIORITY),
        "normal forms differ:\n{}\n--- vs ---\n{}",
        print_expr(&ibp_normal_form(a, &DEFAULT_PRIORITY)),
        print_expr(&ibp_normal_form(b, &DEFAULT_PRIORITY)),
    );
}

/// Monomials built from the given head only.
fn pure(e: &Expr, head: Head) -> Expr {
    Expr::from_monos(
        e.terms
            .iter()
            .filter(|m| m.facs.iter().all(|f| f.head == head))
            .cloned()
            .collect(),
    )
}

const FLAT_KINETIC: &str = "\
(* (coef -1 2) (scal) (fac dA up.a der up.b) (fac dA dn.a der dn.b))
(* (coef 1 2) (scal) (fac dA up.a der up.b) (fac dA dn.b der dn.a))";

const MASS_TERM: &str = "(* (coef 1 2) (scal m^2) (fac dA up.a) (fac dA dn.a))";

#[test]
fn maxwell_is_flat_kinetic_term() {
    let a = build_action(&ModelConfig::maxwell()).unwrap();
    assert_same(&a, &parse(FLAT_KINETIC));
}

#[test]
fn kinetic_taylor_expansion_matches_blocks() {
    let cfg = ModelConfig::minimal();
    let t = taylor_expand_couplings(&cfg.g2, 2).unwrap();
    let want = parse(&format!("{FLAT_KINETIC}\n{MASS_TERM}"));
    assert_same(&t, &want);
}

#[test]
fn minimal_quadratic_matches_standard_form() {
    let a = build_action(&ModelConfig::minimal()).unwrap();
    let grade2 = field_grade(&a, 2);

    let vector = parse(&format!("{FLAT_KINETIC}\n{MASS_TERM}"));
    assert_same(&pure(&grade2, Head::DA), &vector);

    let graviton = parse(
        "\
(* (coef -1 4) (scal mpl^2) (fac h up.m up.n) (fac h dn.m dn.r der dn.n up.r))
(* (coef 1 4) (scal mpl^2) (fac h up.t dn.t) (fac h dn.n dn.r der up.n up.r))
(* (coef 1 8) (scal mpl^2) (fac h up.m up.n) (fac h dn.m dn.n der up.s dn.s))
(* (coef -1 8) (scal mpl^2) (fac h up.t dn.t) (fac h up.u dn.u der up.s dn.s))",
    );
    assert_same_ibp(&pure(&grade2, Head::H), &graviton);

    // no two-field mixing between the metric and the vector
    let mixed = grade2.sub(&pure(&grade2, Head::DA)).sub(&pure(&grade2, Head::H)).canon();
    assert!(mixed.is_zero(), "unexpected mixed quadratic terms:\n{}", print_expr(&mixed));
}

#[test]
fn minimal_pure_vector_cubic_is_exact() {
    let a = build_action(&ModelConfig::minimal()).unwrap();
    let cubic = pure(&field_grade(&a, 3), Head::DA);
    let want = parse(
        "(* (coef 1 2) (scal c3 m^2 lam2^-2) (fac dA up.a) (fac dA dn.a) (fac dA up.b der dn.b))",
    );
    assert_same(&cubic, &want);
}

#[test]
fn vector_galileon_quadratic_equals_minimal() {
    let a = build_action(&ModelConfig::vector_galileon()).unwrap();
    let b = build_action(&ModelConfig::minimal()).unwrap();
    assert_same(&field_grade(&a, 2), &field_grade(&b, 2));
}

#[test]
fn background_is_stationary() {
    for cfg in [ModelConfig::minimal(), ModelConfig::vector_galileon()] {
        let a = build_action(&cfg).unwrap();
        assert!(field_grade(&a, 0).is_zero(), "vacuum term present");
        let tadpole = ibp_normal_form(&field_grade(&a, 1), &DEFAULT_PRIORITY);
        assert!(tadpole.is_zero(), "one-field terms survive:\n{}", print_expr(&tadpole));
    }
}

#[test]
fn density_dimension_audit() {
    for cfg in [ModelConfig::minimal(), ModelConfig::maxwell(), ModelConfig::vector_galileon()] {
        let a = build_action(&cfg).unwrap();
        check_density_dim(&a, 0).unwrap();
    }
}

#[test]
fn covariant_y_block_reduces_to_flat() {
    let mut s = CouplingSeries::zero(Fam::G2);
    s.terms.push(CouplingTerm::new(
        0,
        1,
        0,
        q(1, 1),
        ScalMono::sym_pow(Sym::Lam2, qei(-2)),
    ));
    let t = taylor_expand_couplings(&s, 4).unwrap();
    let y = action::y_cov().scale_scal(&ScalMono::sym_pow(Sym::Lam2, qei(-2))).canon();
    assert_same(&y, &t);
}

#[test]
fn galileon_quartic_derivative_terms_present() {
    let a = build_action(&ModelConfig::vector_galileon()).unwrap();
    let c42 = Sym::SeriesCoef { fam: Fam::G4, n: 2, var: CoefVar::Plain };
    let found = field_grade(&a, 4).terms.iter().any(|m| {
        !m.scal.exp_of(c42).is_zero()
            && m.facs.iter().all(|f| f.head == Head::DA)
            && m.facs.iter().map(|f| f.ders.len()).sum::<usize>() == 2
    });
    assert!(found, "quartic-coupling derivative self-interactions missing");
}

#[test]
fn constant_cubic_coupling_is_total_derivative() {
    // the dressed divergence is a total derivative grade by grade, which is
    // why the constant slot of the cubic coupling is rejected
    let td = geom::sqrt_det(3).mul(&action::div_a()).truncate_fields(3).canon();
    for n in 1..=3 {
        let g = ibp_normal_form(&field_grade(&td, n), &DEFAULT_PRIORITY);
        assert!(g.is_zero(), "grade {n} not a total derivative:\n{}", print_expr(&g));
    }

    let mut s = CouplingSeries::zero(Fam::G3);
    s.terms.push(CouplingTerm::new(0, 0, 0, q(1, 1), ScalMono::sym_pow(Sym::M, qei(2))));
    assert!(matches!(s.validate(), Err(ModelError::TotalDerivativeCoef(_))));
}

#[test]
fn quintic_linear_slot_rejected() {
    let mut s = CouplingSeries::zero(Fam::G5);
    s.terms.push(CouplingTerm::new(
        0,
        0,
        0,
        q(1, 1),
        ScalMono::one(),
    ));
    s.validate().unwrap();
    s.terms.push(CouplingTerm::new(
        1,
        0,
        0,
        q(1, 1),
        ScalMono::from_entries(vec![(Sym::M, qei(0)), (Sym::Lam2, qei(-2))]),
    ));
    assert!(matches!(s.validate(), Err(ModelError::TotalDerivativeCoef(_))));
}

#[test]
fn truncation_guard() {
    let cfg = ModelConfig::vector_galileon();
    match taylor_expand_couplings(&cfg.g4, 8) {
        Err(ModelError::TruncationExceeded { stored: 6, requested: 8, .. }) => {}
        other => panic!("expected truncation error, got {other:?}"),
    }
}

#[test]
fn config_roundtrip_minimal() {
    let text = "\
# massive vector with one cubic self-coupling
G2.c21X = -1
G2.c21F = 1
G3.c31 = -c3
G4.c40 = 1/2*mpl^2
";
    let parsed = ModelConfig::parse(text).unwrap();
    let a = build_action(&parsed).unwrap();
    let b = build_action(&ModelConfig::minimal()).unwrap();
    assert_same(&a, &b);
    assert!(!parsed.include_l5 && !parsed.include_l6 && !parsed.include_y_sector);
}

#[test]
fn config_slot_semantics() {
    // later assignment of the same slot wins
    let cfg = ModelConfig::parse("G3.c31 = -c3\nG3.c31 = 1/2\n").unwrap();
    assert_eq!(cfg.g3.terms.len(), 1);
    assert_eq!(cfg.g3.terms[0].coef, q(1, 2));
    assert!(cfg.g3.terms[0].scal.exp_of(Sym::C3).is_zero());

    // assigning zero removes the slot
    let cfg = ModelConfig::parse("G3.c31 = 0\n").unwrap();
    assert!(cfg.g3.is_zero());

    // slots add on top of a preset
    let cfg = ModelConfig::parse("preset = minimal\nG4.c42 = 1\n").unwrap();
    assert_eq!(cfg.g4.terms.len(), 2);
    let added = &cfg.g4.terms[1];
    assert_eq!((added.ex, added.ey, added.ef), (2, 0, 0));
    assert_eq!(added.scal.exp_of(Sym::M), qei(2));
    assert_eq!(added.scal.exp_of(Sym::Lam2), qei(-4));
}

#[test]
fn config_errors() {
    for (text, frag) in [
        ("preset = bogus\n", "unknown preset"),
        ("G2.c21X\n", "expected `key = value`"),
        ("bogus = 1\n", "unknown key"),
        ("G7.c1 = 1\n", "unknown coupling"),
        ("G2.c31 = 1\n", "does not belong"),
        ("G3.c31 = c3*2\n", "rational factor must come first"),
        ("G3.c31 = bogus\n", "unknown symbol"),
        ("G2.c21F = true\n", "unknown symbol"),
    ] {
        match ModelConfig::parse(text) {
            Err(ModelError::Config { msg, .. }) => {
                assert!(msg.contains(frag), "`{text}` gave `{msg}`, wanted `{frag}`")
            }
            other => panic!("`{text}` should fail with Config error, got {other:?}"),
        }
    }

    // a dimensionful value breaks the slot's dimension bookkeeping
    assert!(matches!(
        ModelConfig::parse("G3.c31 = mpl^2\n"),
        Err(ModelError::DimensionMismatch { .. })
    ));
}

#[test]
fn sector_flags_gate_their_couplings() {
    assert!(matches!(
        ModelConfig::parse("G6.c60 = 1\n"),
        Err(ModelError::SectorFlagConflict(_))
    ));
    let cfg = ModelConfig::parse("include_L6 = true\nG6.c60 = 1\n").unwrap();
    assert!(matches!(
        build_action(&cfg),
        Err(ModelError::UnsupportedExplicitSector(_))
    ));

    assert!(matches!(
        ModelConfig::parse("G2.c21Y = 1\n"),
        Err(ModelError::SectorFlagConflict(_))
    ));
    let cfg = ModelConfig::parse(
        "preset = minimal\ninclude_Y_sector = true\nG2.c21Y = 1\n",
    )
    .unwrap();
    let a = build_action(&cfg).unwrap();
    let quartic = field_grade(&a, 4);
    let has_y = quartic.terms.iter().any(|m| {
        m.facs.iter().all(|f| f.head == Head::DA)
            && m.facs.len() == 4
            && m.facs.iter().map(|f| f.ders.len()).sum::<usize>() == 2
            && m.scal.exp_of(Sym::Lam2) == qei(-2)
    });
    assert!(has_y, "field-strength-squared vector coupling missing:\n{}", print_expr(&quartic));
}
