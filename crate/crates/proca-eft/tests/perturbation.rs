//! Pipeline checks: graded expansion, canonical normalization, gauge
//! fixing, the scalar-restoring substitution, the decoupling limit, and the
//! scale hierarchy, all against hand-expanded reference densities.

use num_traits::Zero;
use proca_eft::expr::{
    equal_mod_ibp, functional_derivative, ibp_normal_form, parse_expr, print_expr, q, qei, qi,
    subst_head, subst_scal_sym, up, Expr, Factor, Head, HeadBranch, Mono, ScalMono, Sym,
    DEFAULT_PRIORITY,
};
use proca_eft::model::{build_action, ModelConfig};
use proca_eft::perturb::{
    add_gauge_fixing, canonical_normalize, decoupling_limit, expand_perturbations,
    gauge_fixing_density, scale_hierarchy, stueckelberg, unitary_gauge, Content, Gauge,
    GradedLagrangian, HierarchyVerdict, Normalization, PerturbError, ScaleLimit,
};

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

/// Expanded and canonically normalized minimal model.
fn minimal_pipeline(order: u32) -> (GradedLagrangian, Normalization) {
    let action = build_action(&ModelConfig::minimal()).unwrap();
    let graded = expand_perturbations(&action, order).unwrap();
    canonical_normalize(&graded).unwrap()
}

const FLAT_KINETIC: &str = "\
(* (coef -1 2) (scal) (fac dA up.a der up.b) (fac dA dn.a der dn.b))
(* (coef 1 2) (scal) (fac dA up.a der up.b) (fac dA dn.b der dn.a))";

const MASS_TERM: &str = "(* (coef 1 2) (scal m^2) (fac dA up.a) (fac dA dn.a))";

/// Graviton kinetic operator after harmonic gauge fixing.
const GAUGE_FIXED_GRAVITON: &str = "\
(* (coef 1 2) (scal) (fac h up.m up.n) (fac h dn.m dn.n der up.s dn.s))
(* (coef -1 4) (scal) (fac h up.t dn.t) (fac h up.u dn.u der up.s dn.s))";

/// Graviton-vector-vector interactions of the minimal model in canonical
/// fields, written out term by term.
const HAA_CUBIC: &str = "\
(* (coef -1 4) (scal mpl^-1) (fac h up.t dn.t) (fac F dn.m dn.n) (fac F up.m up.n))
(* (coef 1 2) (scal m^2 mpl^-1) (fac h up.t dn.t) (fac dA up.a) (fac dA dn.a))
(* (coef 1 1) (scal m^2 mpl^-1) (fac h dn.a dn.b) (fac dA up.a) (fac dA up.b))
(* (coef -1 1) (scal mpl^-1) (fac h dn.a dn.c) (fac dA up.c der dn.b) (fac dA up.a der up.b))
(* (coef 1 1) (scal mpl^-1) (fac h dn.b dn.c) (fac dA up.a der up.b) (fac dA dn.a der up.c))
(* (coef 2 1) (scal mpl^-1) (fac dA up.a) (fac h dn.a dn.c der dn.b) (fac dA up.b der up.c))
(* (coef -2 1) (scal mpl^-1) (fac dA up.a) (fac h dn.a dn.b der dn.c) (fac dA up.b der up.c))";

/// Self-interaction of the vector at cubic order.
const AAA_CUBIC: &str =
    "(* (coef 1 2) (scal c3 m^2 lam2^-2) (fac dA up.a) (fac dA dn.a) (fac dA up.b der dn.b))";

/// Two-graviton-two-vector interactions in canonical fields.
const HHAA_QUARTIC: &str = "\
(* (coef -1 2) (scal m^2 mpl^-2) (fac h dn.b dn.c) (fac h up.b up.c) (fac dA up.a) (fac dA dn.a))
(* (coef 1 4) (scal m^2 mpl^-2) (fac h up.t dn.t) (fac h up.u dn.u) (fac dA up.a) (fac dA dn.a))
(* (coef 1 1) (scal m^2 mpl^-2) (fac h dn.a dn.b) (fac h up.t dn.t) (fac dA up.a) (fac dA up.b))
(* (coef 1 4) (scal mpl^-2) (fac h dn.c dn.e) (fac h up.c up.e) (fac F dn.m dn.n) (fac F up.m up.n))
(* (coef -1 8) (scal mpl^-2) (fac h up.t dn.t) (fac h up.u dn.u) (fac F dn.m dn.n) (fac F up.m up.n))
(* (coef -2 1) (scal mpl^-2) (fac h up.e dn.b) (fac h dn.c dn.e) (fac dA up.a der up.b) (fac dA dn.a der up.c))
(* (coef 2 1) (scal mpl^-2) (fac h dn.a dn.c) (fac h dn.b dn.e) (fac dA up.a der up.b) (fac dA up.c der up.e))
(* (coef -1 1) (scal mpl^-2) (fac h dn.a dn.c) (fac h up.t dn.t) (fac dA up.c der dn.b) (fac dA up.a der up.b))
(* (coef 1 1) (scal mpl^-2) (fac h dn.b dn.c) (fac h up.t dn.t) (fac dA up.a der up.b) (fac dA dn.a der up.c))
(* (coef 2 1) (scal mpl^-2) (fac h up.t dn.t) (fac dA up.a) (fac h dn.a dn.c der dn.b) (fac dA up.b der up.c))
(* (coef -2 1) (scal mpl^-2) (fac h up.t dn.t) (fac dA up.a) (fac h dn.a dn.b der dn.c) (fac dA up.b der up.c))
(* (coef 4 1) (scal mpl^-2) (fac h up.e dn.c) (fac dA up.a) (fac dA up.b der up.c) (fac h dn.a dn.b der dn.e))
(* (coef -4 1) (scal mpl^-2) (fac h up.e dn.c) (fac dA up.a) (fac h dn.a dn.e der dn.b) (fac dA up.b der up.c))
(* (coef 2 1) (scal mpl^-2) (fac dA up.a) (fac dA up.b) (fac h dn.b dn.e der dn.c) (fac h dn.a up.c der up.e))
(* (coef -2 1) (scal mpl^-2) (fac dA up.a) (fac dA up.b) (fac h dn.b dn.c der dn.e) (fac h dn.a up.c der up.e))";

/// Graviton-three-vector interactions in canonical fields.
const HAAA_QUARTIC: &str = "\
(* (coef 1 2) (scal c3 m^2 mpl^-1 lam2^-2) (fac dA dn.b) (fac dA up.b) (fac dA up.a) (fac h up.t dn.t der dn.a))
(* (coef 1 2) (scal c3 m^2 mpl^-1 lam2^-2) (fac h up.t dn.t) (fac dA dn.b) (fac dA up.b) (fac dA up.a der dn.a))
(* (coef 1 1) (scal c3 m^2 mpl^-1 lam2^-2) (fac h dn.b dn.a) (fac dA up.a) (fac dA up.b) (fac dA up.c der dn.c))";

/// Scalar self-interaction surviving the decoupling limit. The quadratic
/// vector self-coupling `c3 m^2/(2 lam2^2) dA^2 (d.dA)` turns into exactly
/// half of `(c3/lam3^3) (dphi)^2 (d^2 phi)` under the scalar-restoring
/// substitution; the factor 1/2 is inherited from the 1/2 in the coupling.
const DL_CUBIC_SCALAR: &str = "\
(* (coef 1 2) (scal c3 lam3^-3) (fac phi der up.a) (fac phi der dn.a) (fac phi der up.b dn.b))";

/// Graviton-field-strength-scalar couplings surviving the decoupling limit.
/// Derived by substituting `dA -> grad(phi)/m` once into the four
/// non-gauge-invariant two-derivative cubic couplings: the leftover
/// `dA (dh) (d^2 phi)` pieces cancel pairwise and the rest assembles into
/// the field strength.
const DL_CUBIC_MIXED: &str = "\
(* (coef 2 1) (scal lam4^-2) (fac h dn.b up.c) (fac F up.b up.a) (fac phi der dn.a dn.c))
(* (coef 2 1) (scal lam4^-2) (fac h dn.a dn.c der dn.b) (fac F up.a up.b) (fac phi der up.c))";

/// Two-graviton-two-scalar couplings surviving the decoupling limit.
const DL_QUARTIC: &str = "\
(* (coef -2 1) (scal lam4^-4) (fac h dn.a up.e) (fac h up.a up.b) (fac phi der dn.c dn.b) (fac phi der up.c dn.e))
(* (coef 2 1) (scal lam4^-4) (fac h dn.b up.e der dn.c) (fac h dn.a up.c der dn.e) (fac phi der up.a) (fac phi der up.b))
(* (coef 4 1) (scal lam4^-4) (fac h up.b up.c) (fac phi der up.a) (fac h dn.a up.e der dn.c) (fac phi der dn.e dn.b))
(* (coef 2 1) (scal lam4^-4) (fac h up.a up.b) (fac h up.c up.e) (fac phi der dn.c dn.a) (fac phi der dn.e dn.b))
(* (coef -4 1) (scal lam4^-4) (fac h up.b up.c) (fac phi der up.a) (fac phi der dn.e dn.b) (fac h dn.a dn.c der up.e))
(* (coef -2 1) (scal lam4^-4) (fac phi der up.a) (fac phi der up.b) (fac h dn.a up.c der dn.e) (fac h dn.b dn.c der up.e))";

const SCALAR_KINETIC: &str =
    "(* (coef 1 2) (scal) (fac phi der up.a) (fac phi der dn.a))";

/// Maxwell density with the field strength kept explicit.
const MAXWELL_F: &str = "(* (coef -1 4) (scal) (fac F dn.m dn.n) (fac F up.m up.n))";

#[test]
fn quadratic_kinetic_operator_after_gauge_fixing() {
    let (l, _) = minimal_pipeline(2);
    let vector = l.piece(Content::new(0, 2, 0));
    assert_same_ibp(&vector, &parse(FLAT_KINETIC).add(&parse(MASS_TERM)));

    let graviton = add_gauge_fixing(&l.piece(Content::new(2, 0, 0)), Gauge::Harmonic).unwrap();
    assert_same_ibp(&graviton, &parse(GAUGE_FIXED_GRAVITON));

    assert!(l.piece(Content::new(1, 1, 0)).is_zero(), "no graviton-vector mixing");
}

#[test]
fn normalization_report_for_minimal_model() {
    let (_, norm) = minimal_pipeline(2);
    assert_eq!(norm.da_factor, (qi(1), ScalMono::one()));
    assert_eq!(norm.h_factor, (qi(2), ScalMono::sym_pow(Sym::Mpl, qei(-1))));
    assert_eq!(norm.mass2, Some((qi(1), ScalMono::sym_pow(Sym::M, qei(2)))));
}

#[test]
fn cubic_graviton_vector_sector() {
    let (l, _) = minimal_pipeline(3);
    assert_same_ibp(&l.piece(Content::new(1, 2, 0)), &parse(HAA_CUBIC));
}

#[test]
fn cubic_vector_self_interaction_is_exact() {
    let (l, _) = minimal_pipeline(3);
    assert_same_ibp(&l.piece(Content::new(0, 3, 0)), &parse(AAA_CUBIC));
}

#[test]
fn quartic_two_graviton_sector() {
    let (l, _) = minimal_pipeline(4);
    assert_same_ibp(&l.piece(Content::new(2, 2, 0)), &parse(HHAA_QUARTIC));
}

#[test]
fn quartic_graviton_three_vector_sector() {
    let (l, _) = minimal_pipeline(4);
    assert_same_ibp(&l.piece(Content::new(1, 3, 0)), &parse(HAAA_QUARTIC));
}

#[test]
fn normalization_examples() {
    // A vector kinetic term scaled by 4 absorbs a factor 1/2 per field.
    let scaled = GradedLagrangian::from_expr(&parse(FLAT_KINETIC).scale(qi(4)));
    let (out, norm) = canonical_normalize(&scaled).unwrap();
    assert_eq!(norm.da_factor, (q(1, 2), ScalMono::one()));
    assert_same_ibp(&out.total(), &parse(FLAT_KINETIC));

    // Already-canonical input is a fixed point.
    let (l, _) = minimal_pipeline(3);
    let (again, norm2) = canonical_normalize(&l).unwrap();
    assert_eq!(norm2.da_factor, (qi(1), ScalMono::one()));
    assert_eq!(norm2.h_factor, (qi(1), ScalMono::one()));
    assert_eq!(again, l);
}

#[test]
fn normalization_rejects_foreign_kinetic_shape() {
    // A pure divergence-squared term is not a multiple of the Maxwell form.
    let bad = GradedLagrangian::from_expr(&parse(
        "(* (coef -1 2) (scal) (fac dA up.a der dn.a) (fac dA up.b der dn.b))",
    ));
    match canonical_normalize(&bad) {
        Err(PerturbError::KineticMismatch(_)) => {}
        other => panic!("expected kinetic mismatch, got {other:?}"),
    }
}

#[test]
fn normalization_rejects_irrational_scale() {
    let scaled = GradedLagrangian::from_expr(&parse(FLAT_KINETIC).scale(qi(3)));
    match canonical_normalize(&scaled) {
        Err(PerturbError::IrrationalNormalization(_)) => {}
        other => panic!("expected irrational normalization, got {other:?}"),
    }
}

/// Drops monomials in which any graviton factor is traced or carries a
/// derivative contracted into one of its own slots. What survives is the
/// evaluation on a transverse-traceless configuration.
fn transverse_traceless_part(e: &Expr) -> Expr {
    Expr::from_monos(
        e.terms
            .iter()
            .filter(|m| {
                !m.facs.iter().any(|f| {
                    f.head == Head::H
                        && (f.slots[0].name == f.slots[1].name
                            || f.ders.iter().any(|d| {
                                f.slots.iter().any(|s| s.name == d.name)
                            }))
                })
            })
            .cloned()
            .collect(),
    )
}

#[test]
fn harmonic_gauge_term_is_inert_on_transverse_traceless_fields() {
    let gf = gauge_fixing_density(Gauge::Harmonic);
    let el = functional_derivative(&gf, Head::H, &[up("mu"), up("nu")]).canon();
    assert!(!el.is_zero());
    assert!(transverse_traceless_part(&el).is_zero());
}

#[test]
fn gauge_choice_must_match_field_content() {
    let vector_only = parse(FLAT_KINETIC);
    match add_gauge_fixing(&vector_only, Gauge::Harmonic) {
        Err(PerturbError::GaugeFieldMismatch(_)) => {}
        other => panic!("expected gauge mismatch, got {other:?}"),
    }
    // Before the scalar-restoring substitution there is no phi to fix.
    match add_gauge_fixing(&vector_only.add(&parse(MASS_TERM)), Gauge::LorenzStueckelberg) {
        Err(PerturbError::GaugeFieldMismatch(_)) => {}
        other => panic!("expected gauge mismatch, got {other:?}"),
    }
}

#[test]
fn lorenz_gauge_diagonalizes_the_quadratic_piece() {
    let (l, _) = minimal_pipeline(2);
    let stueck = stueckelberg(&l);
    let quadratic = stueck.order_piece(2);
    let fixed = ibp_normal_form(
        &add_gauge_fixing(&quadratic, Gauge::LorenzStueckelberg).unwrap(),
        &DEFAULT_PRIORITY,
    );
    for m in &fixed.terms {
        let has_da = m.facs.iter().any(|f| f.head == Head::DA);
        let has_phi = m.facs.iter().any(|f| f.head == Head::Phi);
        assert!(
            !(has_da && has_phi),
            "mixing survives gauge fixing: {}",
            print_expr(&Expr::mono(m.clone()))
        );
    }

    // Vector sector: -dA.dA/2 + m^2 dA^2/2; scalar sector: the canonical
    // massive scalar. Both denominators are then p^2 - m^2.
    let vector = Expr::from_monos(
        fixed.terms.iter().filter(|m| m.facs[0].head == Head::DA).cloned().collect(),
    );
    assert_same_ibp(
        &vector,
        &parse(
            "(* (coef -1 2) (scal) (fac dA up.a der up.b) (fac dA dn.a der dn.b))\
             \n(* (coef 1 2) (scal m^2) (fac dA up.a) (fac dA dn.a))",
        ),
    );
    let scalar = Expr::from_monos(
        fixed.terms.iter().filter(|m| m.facs[0].head == Head::Phi).cloned().collect(),
    );
    assert_same_ibp(
        &scalar,
        &parse(
            "(* (coef 1 2) (scal) (fac phi der up.a) (fac phi der dn.a))\
             \n(* (coef -1 2) (scal m^2) (fac phi) (fac phi))",
        ),
    );
}

#[test]
fn scalar_restoration_expands_the_mass_term_binomially() {
    let mass = GradedLagrangian::from_expr(&parse(MASS_TERM));
    let s = stueckelberg(&mass);
    assert_same(&s.piece(Content::new(0, 2, 0)), &parse(MASS_TERM));
    assert_same_ibp(
        &s.piece(Content::new(0, 1, 1)),
        &parse("(* (coef 1 1) (scal m) (fac dA up.a) (fac phi der dn.a))"),
    );
    assert_same_ibp(&s.piece(Content::new(0, 0, 2)), &parse(SCALAR_KINETIC));
}

#[test]
fn scalar_restoration_leaves_field_strength_terms_alone() {
    let maxwell = GradedLagrangian::from_expr(&parse(FLAT_KINETIC));
    let s = stueckelberg(&maxwell);
    assert_eq!(s.pieces.len(), 1, "gradient branches must cancel pairwise");
    assert_same_ibp(&s.piece(Content::new(0, 2, 0)), &parse(FLAT_KINETIC));
}

#[test]
fn scalar_restoration_of_the_cubic_coupling() {
    let cubic = GradedLagrangian::from_expr(&parse(AAA_CUBIC));
    let s = stueckelberg(&cubic);
    // Pure-scalar branch: (c3/(2 lam2^2 m)) (dphi)^2 (d^2 phi).
    let expected = parse(
        "(* (coef 1 2) (scal c3 m^-1 lam2^-2) (fac phi der up.a) (fac phi der dn.a) (fac phi der up.b dn.b))",
    );
    assert_same_ibp(&s.piece(Content::new(0, 0, 3)), &expected);
}

#[test]
fn unitary_gauge_recovers_the_input_bit_exactly() {
    let (l, _) = minimal_pipeline(4);
    let roundtrip = unitary_gauge(&stueckelberg(&l));
    assert_eq!(roundtrip, l);
}

#[test]
fn decoupling_limit_of_the_minimal_model() {
    let (l, _) = minimal_pipeline(4);
    let dl = decoupling_limit(&stueckelberg(&l), &ScaleLimit::standard()).unwrap();

    let expected: Vec<Content> = vec![
        Content::new(0, 0, 2),
        Content::new(0, 0, 3),
        Content::new(0, 2, 0),
        Content::new(1, 1, 1),
        Content::new(2, 0, 0),
        Content::new(2, 0, 2),
    ];
    let got: Vec<Content> = dl.pieces.keys().copied().collect();
    assert_eq!(got, expected, "surviving sectors");

    // Quadratic: massless vector, canonical scalar, and the graviton
    // operator; all mass mixings drop out of the limit.
    assert_same_ibp(&dl.piece(Content::new(0, 2, 0)), &parse(FLAT_KINETIC));
    assert_same_ibp(&dl.piece(Content::new(0, 0, 2)), &parse(SCALAR_KINETIC));
    let graviton =
        add_gauge_fixing(&dl.piece(Content::new(2, 0, 0)), Gauge::Harmonic).unwrap();
    assert_same_ibp(&graviton, &parse(GAUGE_FIXED_GRAVITON));

    // Cubic survivors.
    assert_same_ibp(&dl.piece(Content::new(0, 0, 3)), &parse(DL_CUBIC_SCALAR));
    assert_same_ibp(&dl.piece(Content::new(1, 1, 1)), &parse(DL_CUBIC_MIXED));

    // Quartic survivor.
    assert_same_ibp(&dl.piece(Content::new(2, 0, 2)), &parse(DL_QUARTIC));
}

#[test]
fn decoupling_limit_keeps_pure_maxwell_unchanged() {
    let maxwell = GradedLagrangian::from_expr(&parse(FLAT_KINETIC));
    let dl = decoupling_limit(&maxwell, &ScaleLimit::standard()).unwrap();
    assert_eq!(dl, maxwell);
}

#[test]
fn decoupling_limit_rejects_divergent_terms() {
    // A cubic scalar coupling suppressed only by the mass blows up as
    // m -> 0 with the interaction scales held fixed.
    let bad = GradedLagrangian::from_expr(&parse(
        "(* (coef 1 1) (scal m^-1) (fac phi der up.a) (fac phi der dn.a) (fac phi der up.b dn.b))",
    ));
    match decoupling_limit(&bad, &ScaleLimit::standard()) {
        Err(PerturbError::DivergentLimit(term)) => {
            assert!(term.contains("m^-1"), "offending term names its scale: {term}");
        }
        other => panic!("expected divergent limit, got {other:?}"),
    }
}

#[test]
fn decoupling_limit_of_the_extended_model_is_finite() {
    let action = build_action(&ModelConfig::vector_galileon()).unwrap();
    let graded = expand_perturbations(&action, 4).unwrap();
    let (norm, _) = canonical_normalize(&graded).unwrap();
    let dl = decoupling_limit(&stueckelberg(&norm), &ScaleLimit::standard());
    assert!(dl.is_ok(), "no term may diverge: {:?}", dl.err());
}

#[test]
fn scale_limit_substitutions_are_exact_identities() {
    let lim = ScaleLimit::standard();
    // lam3^3 = lam2^2 m and lam4^2 = mpl m, rewritten onto {m, lam3, lam4}.
    let lam2_sq_m = lim.lam2.pow(qei(2)).mul(&ScalMono::sym_pow(Sym::M, qei(1)));
    assert_eq!(lam2_sq_m, ScalMono::sym_pow(Sym::Lam3, qei(3)));
    let mpl_m = lim.mpl.mul(&ScalMono::sym_pow(Sym::M, qei(1)));
    assert_eq!(mpl_m, ScalMono::sym_pow(Sym::Lam4, qei(2)));
    // Exponent identity on a generic monomial: a term m^a lam2^b mpl^c maps
    // to m^(a - b/2 - c) lam3^(3b/2) lam4^(2c).
    let probe = Expr::mono(Mono {
        coef: qi(1),
        scal: ScalMono::from_entries(vec![
            (Sym::M, qei(2)),
            (Sym::Lam2, qei(-2)),
            (Sym::Mpl, qei(-1)),
        ]),
        facs: vec![],
    });
    let mapped = subst_scal_sym(
        &subst_scal_sym(&probe, Sym::Lam2, &lim.lam2),
        Sym::Mpl,
        &lim.mpl,
    );
    let want = ScalMono::from_entries(vec![
        (Sym::M, qei(4)),
        (Sym::Lam3, qei(-3)),
        (Sym::Lam4, qei(-2)),
    ]);
    assert_eq!(mapped.terms[0].scal, want);
}

#[test]
fn scale_hierarchy_examples() {
    let r = scale_hierarchy(1e-4, 5e-2, 1.0).unwrap();
    assert!((r.lam3 - 6.2996e-3).abs() < 1e-6);
    assert!((r.lam4 - 1e-2).abs() < 1e-12);
    assert_eq!(r.verdict, HierarchyVerdict::Holds);
    assert!(r.margins.iter().all(|m| m.ratio > 1.0));

    let r = scale_hierarchy(1e-6, 1e-1, 1.0).unwrap();
    assert!((r.lam4 - 1e-3).abs() < 1e-12);
    assert!(r.lam3 > r.lam4);
    match &r.verdict {
        HierarchyVerdict::Broken(why) => assert!(why.contains("lam3 < lam4")),
        other => panic!("expected broken hierarchy, got {other:?}"),
    }

    // Degenerate input: m = lam2 cannot satisfy m << lam3 << lam2.
    let r = scale_hierarchy(1.0, 1.0, 10.0).unwrap();
    assert!(matches!(r.verdict, HierarchyVerdict::Broken(_)));

    match scale_hierarchy(0.0, 1.0, 1.0) {
        Err(PerturbError::NonPositiveScale("m")) => {}
        other => panic!("expected positivity error, got {other:?}"),
    }
}

#[test]
fn expansion_order_is_validated() {
    let action = build_action(&ModelConfig::minimal()).unwrap();
    for bad in [0u32, 1, 5] {
        match expand_perturbations(&action, bad) {
            Err(PerturbError::UnsupportedOrder(o)) => assert_eq!(o, bad),
            other => panic!("expected order error, got {other:?}"),
        }
    }
}

#[test]
fn tadpoles_are_rejected() {
    let action = build_action(&ModelConfig::minimal()).unwrap();
    let tadpole = parse("(* (coef 1 1) (scal m^4) (fac h up.t dn.t))");
    match expand_perturbations(&action.add(&tadpole), 3) {
        Err(PerturbError::BackgroundNotStationary(msg)) => assert!(msg.contains("order-1")),
        other => panic!("expected stationarity error, got {other:?}"),
    }
    let vacuum = parse("(* (coef 1 1) (scal m^4))");
    match expand_perturbations(&action.add(&vacuum), 3) {
        Err(PerturbError::BackgroundNotStationary(msg)) => assert!(msg.contains("order-0")),
        other => panic!("expected stationarity error, got {other:?}"),
    }
}

#[test]
fn grading_matches_the_stored_content() {
    let (l, _) = minimal_pipeline(4);
    for (c, piece) in &l.pieces {
        assert!((2..=4).contains(&c.order()));
        for m in &piece.terms {
            assert_eq!(Content::of(m), *c, "monomial graded into the wrong piece");
        }
    }
}

/// Linearized coordinate-transformation invariance of the free graviton
/// action: replacing h by h + grad xi + (grad xi)^T changes the quadratic
/// piece only by a total derivative, at every order in xi. The vector head
/// stands in for the transformation parameter.
#[test]
fn graviton_quadratic_piece_is_gauge_invariant() {
    for cfg in [ModelConfig::minimal(), ModelConfig::vector_galileon()] {
        let action = build_action(&cfg).unwrap();
        let graded = expand_perturbations(&action, 2).unwrap();
        let quad = graded.piece(Content::new(2, 0, 0));
        assert!(!quad.is_zero());
        let shifted = subst_head(&quad, Head::H, &|f| {
            let mut branches = vec![HeadBranch::unit(f.clone())];
            for (keep, gradient) in [(0usize, 1usize), (1, 0)] {
                let mut ders: Vec<_> = f.ders.to_vec();
                ders.push(f.slots[gradient]);
                branches.push(HeadBranch::unit(Factor::with_ders(
                    Head::DA,
                    &[f.slots[keep]],
                    &ders,
                )));
            }
            branches
        });
        let change = shifted.canon().sub(&quad);
        assert!(
            ibp_normal_form(&change.canon(), &DEFAULT_PRIORITY).is_zero(),
            "gauge variation must be a total derivative"
        );
    }
}

/// The residual vector gauge shift dA -> dA - grad(alpha). The scalar head
/// stands in for the parameter.
fn vector_gauge_shift(e: &Expr) -> Expr {
    subst_head(e, Head::DA, &|f| {
        let mut ders: Vec<_> = f.ders.to_vec();
        ders.push(f.slots[0]);
        vec![
            HeadBranch::unit(f.clone()),
            HeadBranch {
                coef: qi(-1),
                scal: ScalMono::one(),
                factor: Some(Factor::with_ders(Head::Phi, &[], &ders)),
            },
        ]
    })
}

#[test]
fn decoupling_limit_retains_both_residual_symmetries() {
    let (l, _) = minimal_pipeline(4);
    let dl = decoupling_limit(&stueckelberg(&l), &ScaleLimit::standard()).unwrap();
    let total = dl.total();

    // Constant scalar shift. Normal forms may park a scalar factor without
    // derivatives (moving them onto its neighbours), so the invariant is not
    // "every scalar is differentiated" but that the shift variation of any
    // representative is a total derivative.
    let shifted = subst_head(&total, Head::Phi, &|f| {
        let mut branches = vec![HeadBranch::unit(f.clone())];
        if f.ders.is_empty() {
            branches.push(HeadBranch {
                coef: qi(1),
                scal: ScalMono::one(),
                factor: None,
            });
        }
        branches
    });
    let change = shifted.canon().sub(&total);
    assert!(
        ibp_normal_form(&change.canon(), &DEFAULT_PRIORITY).is_zero(),
        "constant scalar shift must change the density by a total derivative"
    );

    // On the stored normal forms the vector gauge shift changes nothing up
    // to total derivatives.
    let change = vector_gauge_shift(&total).canon().sub(&total);
    assert!(ibp_normal_form(&change.canon(), &DEFAULT_PRIORITY).is_zero());

    // On the field-strength representative of the vector sectors the shift
    // cancels exactly, before any integration by parts: the gradient
    // substitution is symmetric in its two derivatives and drops out of
    // every antisymmetrized pair.
    let representative = parse(MAXWELL_F).add(&parse(DL_CUBIC_MIXED));
    assert_same_ibp(
        &representative,
        &dl.piece(Content::new(0, 2, 0)).add(&dl.piece(Content::new(1, 1, 1))),
    );
    let change = vector_gauge_shift(&representative).sub(&representative);
    assert!(change.canon().is_zero(), "exact invariance of the field-strength form");
}

#[test]
fn normalization_mass_report_uses_the_kinetic_ratio() {
    // Scaling both the kinetic and mass terms leaves the reported mass
    // untouched: it is the ratio of the two quadratic coefficients.
    let scaled = GradedLagrangian::from_expr(
        &parse(FLAT_KINETIC).add(&parse(MASS_TERM)).scale(qi(4)),
    );
    let (_, norm) = canonical_normalize(&scaled).unwrap();
    assert_eq!(norm.da_factor, (q(1, 2), ScalMono::one()));
    assert_eq!(norm.mass2, Some((qi(1), ScalMono::sym_pow(Sym::M, qei(2)))));
}
