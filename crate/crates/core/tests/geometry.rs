//! Pointwise properties of the model geometries at random chart points.

use std::sync::Arc;

use ksa_core::bilinears::CausalCharacter;
use ksa_core::geometry::connection::{
    curvature_RD, dirac_current_frame, killing_function_drift, killing_spinor_dimension, lichnerowicz_residual,
    AdmissibleConnection, KillingFunction, KillingSpinorField,
};
use ksa_core::geometry::killing::{killing_equation_residual, killing_vectors};
use ksa_core::geometry::{model_space, sample_grid, GeometryKind, ModelGeometry};
use ksa_core::SignatureKind;
use nalgebra::{Matrix2, Vector2};
use proptest::prelude::*;

fn backgrounds() -> Vec<(ModelGeometry, i8)> {
    let h2 = model_space(GeometryKind::H2, SignatureKind::Riemannian02, 0.5).unwrap();
    vec![
        (h2.clone(), -1),
        (h2, 1),
        (model_space(GeometryKind::DS2, SignatureKind::Lorentzian11, 1.0).unwrap(), 1),
        (model_space(GeometryKind::AdS2, SignatureKind::Lorentzian11, 1.0).unwrap(), -1),
    ]
}

fn offset() -> impl Strategy<Value = [f64; 2]> {
    [-0.5f64..0.5, -0.5f64..0.5]
}

fn point(geom: &ModelGeometry, d: [f64; 2]) -> [f64; 2] {
    let b = geom.base_point();
    [b[0] + d[0], b[1] + d[1]]
}

fn to_nalgebra(m: &ksa_core::Mat2) -> Matrix2<f64> {
    let f = |r: usize, c: usize| ksa_core::rational::to_f64(m.entry(r, c));
    Matrix2::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn maximally_supersymmetric_pointwise(d in offset()) {
        for (geom, sigma_b) in backgrounds() {
            let p = point(&geom, d);
            let conn = AdmissibleConnection::canonical(geom.clone(), sigma_b);
            let rd = curvature_RD(&conn, p).unwrap();
            prop_assert!(rd.max_component < 1e-8);
            prop_assert!((rd.obstruction - rd.obstruction_formula).abs() < 1e-9);
            let target = geom.scalar_curvature_target.unwrap();
            prop_assert!((geom.scalar_curvature(p).unwrap() - target).abs() < 1e-9);
            // *² = −ς on 1-forms
            let star = geom.hodge_star(p).unwrap();
            let sg = if geom.signature == SignatureKind::Lorentzian11 { -1.0 } else { 1.0 };
            prop_assert!((star * star + Matrix2::identity() * sg).amax() < 1e-12);
            for x in killing_vectors(&geom) {
                prop_assert!(killing_equation_residual(&geom, &x, p).unwrap() < 1e-6);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn killing_spinors_at_random_points(d in offset(), fibre in [-1.0f64..1.0, -1.0f64..1.0]) {
        prop_assume!(fibre[0].abs() + fibre[1].abs() > 0.1);
        for (geom, sigma_b) in backgrounds() {
            let conn = AdmissibleConnection::canonical(geom.clone(), sigma_b);
            let field = KillingSpinorField::new(&conn, geom.base_point(), Vector2::new(fibre[0], fibre[1]));
            let p = point(&geom, d);
            prop_assert!(field.killing_residual(p).unwrap() < 1e-5);
            let f = |q: [f64; 2]| field.value(q);
            prop_assert!(lichnerowicz_residual(&conn, &f, p, 1e-3).unwrap() < 1e-4);

            // the pointwise causal character of κ_ε follows the algebraic one
            let rep = ksa_core::build_gamma_rep(geom.signature);
            let b = to_nalgebra(&ksa_core::bilinears::bilinear_with_symmetry(&rep, sigma_b).matrix);
            let e = field.value(p).unwrap();
            let k = dirac_current_frame(&b, &conn.rep, &e, &e);
            let norm = conn.rep.norm2(&k);
            let chiral = e[0].abs() < 1e-9 || e[1].abs() < 1e-9;
            let expected = match (geom.signature, chiral) {
                (SignatureKind::Riemannian02, _) => CausalCharacter::Spacelike,
                (SignatureKind::Lorentzian11, true) => CausalCharacter::Null,
                (SignatureKind::Lorentzian11, false) if sigma_b < 0 => CausalCharacter::Timelike,
                _ => CausalCharacter::Spacelike,
            };
            let got = if norm.abs() < 1e-12 { CausalCharacter::Null } else if norm > 0.0 { CausalCharacter::Spacelike } else { CausalCharacter::Timelike };
            prop_assert_eq!(got, expected, "{:?} σ_B={} e={:?}", geom.kind, sigma_b, e);
            prop_assert!(killing_function_drift(&conn, &b, &field, p).unwrap() < 1e-5);
        }
    }
}

#[test]
fn non_constant_killing_function_breaks_maximal_supersymmetry() {
    let geom = model_space(GeometryKind::H2, SignatureKind::Riemannian02, 0.5).unwrap();
    let killing = KillingFunction::Custom(Arc::new(|p: [f64; 2]| 0.5 + 0.2 * p[0]));
    let conn = AdmissibleConnection::new(geom.clone(), -1, killing);
    let est = killing_spinor_dimension(&conn, geom.base_point(), &sample_grid(&geom, 9, 0.4), &[]).unwrap();
    assert!(est.dimension < 2, "{est:?}");
    let rd = curvature_RD(&conn, [0.1, 1.1]).unwrap();
    assert!(rd.max_component > 1e-3);
    assert!((rd.obstruction - rd.obstruction_formula).abs() < 1e-8);
}
