//! Integration checks of the invariant-object searches against the catalog
//! and hand-built degenerate fields.

use darboux_core::catalog;
use darboux_core::coeff::Coeff;
use darboux_core::context::Context;
use darboux_core::invariant::{
    find_meridians, find_parallels, invariance_check, InvarianceOutcome, TransversalityStatus,
};
use darboux_core::parser::parse_expression;
use darboux_core::surface::{Ellipsoid, Tangency};
use darboux_core::vector_field::VectorField;

#[test]
fn catalog_degree_vectors() {
    let pp0 = catalog::get("pp0").unwrap();
    assert_eq!(
        pp0.field.degree_vector().sorted(),
        &[Some(2), Some(2), Some(2)]
    );
    let ex2 = catalog::get("ex2").unwrap();
    assert_eq!(
        ex2.field.degree_vector().sorted(),
        &[Some(2), Some(2), Some(1)]
    );
    assert_eq!(ex2.field.degree_vector().sorted_entry(3), Some(1));
}

#[test]
fn on_surface_invariance_with_verified_transversality() {
    let sys = catalog::get("pp0").unwrap();
    let e = sys.ellipsoid.as_ref().unwrap();
    let f = sys.parse("I*b*x + a*y").unwrap();
    let outcome = invariance_check(&sys.field, &f, Some(e), None).unwrap();
    let InvarianceOutcome::Invariant(cert) = outcome else {
        panic!("meridian plane must certify");
    };
    assert_eq!(cert.transversality, TransversalityStatus::Verified);
    assert_eq!(cert.tangency, Some(Tangency::Transversal));
    let expect = sys.parse("-(a*k2*x - I*a020*b*y)/a").unwrap();
    assert_eq!(cert.cofactor.poly, expect);
}

#[test]
fn tangent_planes_are_rejected() {
    let sys = catalog::get("pp0").unwrap();
    let e = sys.ellipsoid.as_ref().unwrap();
    // x = a touches the ellipsoid at a vertex; it happens to be carried by
    // no cofactor either, but the tangency gate alone must reject it when a
    // cofactor exists, so use a field that fixes it: the zero multiple test
    // goes through cofactor_solve; simply assert the tangency classifier.
    let coeffs = vec![
        Coeff::one(sys.ctx.n_params()),
        Coeff::zero(sys.ctx.n_params()),
        Coeff::zero(sys.ctx.n_params()),
    ];
    let a = Coeff::param(sys.ctx.n_params(), 0);
    assert_eq!(
        e.hyperplane_tangency(&coeffs, &a).unwrap(),
        Tangency::Tangent
    );
}

#[test]
fn sys10_meridians_match_the_expected_pair() {
    let sys = catalog::get("sys10").unwrap().with_settings().unwrap();
    let inst = sys
        .substituted(&[
            ("a".to_string(), "1".to_string()),
            ("b".to_string(), "2".to_string()),
            ("c".to_string(), "1".to_string()),
            ("alpha".to_string(), "1".to_string()),
            ("beta".to_string(), "2".to_string()),
            ("k4".to_string(), "1".to_string()),
            ("b011".to_string(), "3".to_string()),
            ("k001".to_string(), "1".to_string()),
            ("a101".to_string(), "1".to_string()),
            ("a002".to_string(), "0".to_string()),
            ("k100".to_string(), "0".to_string()),
        ])
        .unwrap();
    let e = inst.ellipsoid.as_ref().unwrap();
    let rep = find_meridians(&inst.field, e, &[]).unwrap();
    let forms: Vec<String> = rep.all_factors().map(|f| f.form.render()).collect();
    // alpha x + beta y = x + 2y (normalized) and y
    assert_eq!(forms, vec!["2*y + x".to_string(), "y".to_string()]);
    // both are real: the two-real-meridian bound of the quadratic family is
    // reached here
    assert_eq!(rep.real_factors().len(), 2);
}

#[test]
fn degenerate_parallel_search() {
    // rotation about the polar axis of a spheroid: ż = 0, every parallel
    // is invariant
    let ctx = Context::new(vec!["x", "y", "z"], vec!["c"]).unwrap();
    let one = Coeff::one(1);
    let e = Ellipsoid::new(
        &ctx,
        vec![one.clone(), one.clone(), Coeff::param(1, 0)],
    )
    .unwrap();
    let field = VectorField::new(
        &ctx,
        vec![
            parse_expression("y", &ctx).unwrap(),
            parse_expression("-x", &ctx).unwrap(),
            parse_expression("0", &ctx).unwrap(),
        ],
    )
    .unwrap();
    let rep = find_parallels(&field, &e, &[]).unwrap();
    assert!(rep.degenerate);
    assert_eq!(rep.distinct_count(), 0);
}

#[test]
fn degenerate_meridian_search() {
    // the meridian-radial field on the unit sphere keeps every meridian
    // plane invariant, so the extactic vanishes identically
    let ctx = Context::new(vec!["x", "y", "z"], vec![] as Vec<&str>).unwrap();
    let one = Coeff::one(0);
    let e = Ellipsoid::new(&ctx, vec![one.clone(), one.clone(), one.clone()]).unwrap();
    let field = VectorField::new(
        &ctx,
        vec![
            parse_expression("x*z", &ctx).unwrap(),
            parse_expression("y*z", &ctx).unwrap(),
            parse_expression("-(x^2 + y^2)", &ctx).unwrap(),
        ],
    )
    .unwrap();
    let rep = find_meridians(&field, &e, &[]).unwrap();
    assert!(rep.degenerate);
}

#[test]
fn field_not_on_surface_is_refused() {
    let ctx = Context::new(vec!["x", "y", "z"], vec![] as Vec<&str>).unwrap();
    let one = Coeff::one(0);
    let e = Ellipsoid::new(&ctx, vec![one.clone(), one.clone(), one.clone()]).unwrap();
    let field = VectorField::new(
        &ctx,
        vec![
            parse_expression("1", &ctx).unwrap(),
            parse_expression("0", &ctx).unwrap(),
            parse_expression("0", &ctx).unwrap(),
        ],
    )
    .unwrap();
    assert!(matches!(
        find_meridians(&field, &e, &[]),
        Err(darboux_core::error::Error::NotOnSurface(_))
    ));
    assert!(matches!(
        find_parallels(&field, &e, &[]),
        Err(darboux_core::error::Error::NotOnSurface(_))
    ));
}

#[test]
fn surface_cofactors_reduce_to_normal_form() {
    // an on-surface certificate's cofactor must be a reduced representative
    let sys = catalog::get("ex2").unwrap();
    let e = sys.ellipsoid.as_ref().unwrap();
    let z = sys.parse("z").unwrap();
    let cert = invariance_check(&sys.field, &z, Some(e), None)
        .unwrap()
        .invariant()
        .unwrap();
    let n = sys.ctx.n_coords() - 1;
    assert!(cert
        .cofactor
        .poly
        .degree_in(n)
        .is_none_or(|d| d <= 1));
    assert_eq!(
        cert.cofactor.context,
        darboux_core::invariant::InvarianceContext::OnSurface
    );
}

#[test]
fn on_surface_exponential_factor_and_invariant_product() {
    // on pp0 the polar coordinate is constant along the flow on the
    // surface: X(z) reduces to zero, so exp(z) is an exponential factor
    // with cofactor 0 there (but not in the ambient space)
    let sys = catalog::get("pp0").unwrap();
    let e = sys.ellipsoid.as_ref().unwrap();
    let z = sys.parse("z").unwrap();
    let one = sys.parse("1").unwrap();
    assert!(!sys.field.lie_derivative(&z).unwrap().is_zero());
    assert!(e
        .normal_form(&sys.field.lie_derivative(&z).unwrap())
        .unwrap()
        .is_zero());
    let fac = darboux_core::invariant::exp_factor_check(&sys.field, &z, &one, Some(e), None)
        .unwrap()
        .factor()
        .unwrap();
    assert!(fac.cofactor.is_zero());
    // the zero cofactor alone spans a first-integral relation mu = 1
    let rels =
        darboux_core::darboux::solve_relation(&[], &[fac.cofactor.clone()], Some(e), true)
            .unwrap();
    assert_eq!(rels.len(), 1);
    assert!(rels[0].sigma.is_zero());
    let func = darboux_core::darboux::build_darboux_function(
        &[],
        &[fac],
        &rels[0],
        &sys.field,
        Some(e),
    )
    .unwrap();
    assert!(func.expanded.is_none());
    assert_eq!(func.factors.len(), 1);
}

#[test]
fn nonlinear_hypersurfaces_leave_transversality_unchecked() {
    let sys = catalog::get("pp0").unwrap();
    let e = sys.ellipsoid.as_ref().unwrap();
    let f = sys.parse("b^2*x^2 + a^2*y^2").unwrap();
    let cert = invariance_check(&sys.field, &f, Some(e), None)
        .unwrap()
        .invariant()
        .unwrap();
    assert!(cert.cofactor.poly.is_zero());
    assert_eq!(cert.transversality, TransversalityStatus::Unchecked);
    assert_eq!(cert.tangency, None);
}
