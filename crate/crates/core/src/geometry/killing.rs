//! Killing vectors of the model spaces, the Kosmann derivative, and the
//! numeric Killing superalgebra.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, Vector2, Vector3};
use num_rational::BigRational;
use serde::Serialize;

use super::connection::{dirac_current_frame, killing_spinor_dimension, AdmissibleConnection, KillingSpinorField};
use super::{sample_grid, to_matrix, GeometryKind, ModelGeometry, Point};
use crate::bilinears::bilinear_with_symmetry;
use crate::clifford::{build_gamma_rep, SignatureKind};
use crate::error::GeometryError;
use crate::rational::to_f64;
use crate::superalgebra::{build_deformation, build_flat_model, ModuleChoice};

#[derive(Clone)]
pub struct KillingVector {
    pub label: String,
    field: Arc<dyn Fn(Point) -> [f64; 2] + Send + Sync>,
}

impl fmt::Debug for KillingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KillingVector({})", self.label)
    }
}

impl KillingVector {
    pub fn new(label: impl Into<String>, field: impl Fn(Point) -> [f64; 2] + Send + Sync + 'static) -> Self {
        Self { label: label.into(), field: Arc::new(field) }
    }

    pub fn eval(&self, p: Point) -> [f64; 2] {
        (self.field)(p)
    }

    /// `J[i][j] = ∂_j X^i` by central differences.
    pub fn jacobian(&self, p: Point) -> [[f64; 2]; 2] {
        let h = 1e-5;
        let plus = [self.eval([p[0] + h, p[1]]), self.eval([p[0], p[1] + h])];
        let minus = [self.eval([p[0] - h, p[1]]), self.eval([p[0], p[1] - h])];
        let mut j = [[0.0; 2]; 2];
        for i in 0..2 {
            for (k, (a, b)) in plus.iter().zip(&minus).enumerate() {
                j[i][k] = (a[i] - b[i]) / (2.0 * h);
            }
        }
        j
    }
}

/// A basis of Killing vectors for each model space, in chart coordinates.
pub fn killing_vectors(geom: &ModelGeometry) -> Vec<KillingVector> {
    let k = 2.0 * geom.scale.abs();
    match (geom.kind, geom.signature) {
        (GeometryKind::Flat, SignatureKind::Riemannian02) => vec![
            KillingVector::new("∂x", |_| [1.0, 0.0]),
            KillingVector::new("∂y", |_| [0.0, 1.0]),
            KillingVector::new("x∂y − y∂x", |p| [-p[1], p[0]]),
        ],
        (GeometryKind::Flat, SignatureKind::Lorentzian11) => vec![
            KillingVector::new("∂t", |_| [1.0, 0.0]),
            KillingVector::new("∂x", |_| [0.0, 1.0]),
            KillingVector::new("x∂t + t∂x", |p| [p[1], p[0]]),
        ],
        (GeometryKind::H2, _) => vec![
            KillingVector::new("∂x", |_| [1.0, 0.0]),
            KillingVector::new("x∂x + y∂y", |p| [p[0], p[1]]),
            KillingVector::new("(x² − y²)∂x + 2xy∂y", |p| [p[0] * p[0] - p[1] * p[1], 2.0 * p[0] * p[1]]),
        ],
        (GeometryKind::DS2, _) => vec![
            KillingVector::new("∂x", |_| [0.0, 1.0]),
            KillingVector::new("cos", move |p| {
                let (t, x) = (p[0], p[1]);
                [(k * x).cos() / k, -(k * t).tanh() * (k * x).sin() / k]
            }),
            KillingVector::new("sin", move |p| {
                let (t, x) = (p[0], p[1]);
                [(k * x).sin() / k, (k * t).tanh() * (k * x).cos() / k]
            }),
        ],
        (GeometryKind::AdS2, _) => vec![
            KillingVector::new("∂t", |_| [1.0, 0.0]),
            KillingVector::new("cos", move |p| {
                let (tau, u) = (k * p[0], k * p[1]);
                [-u.tanh() * tau.sin() / k, tau.cos() / k]
            }),
            KillingVector::new("sin", move |p| {
                let (tau, u) = (k * p[0], k * p[1]);
                [u.tanh() * tau.cos() / k, tau.sin() / k]
            }),
        ],
    }
}

/// `A_{ab} = ∇_b X_a` in the orthonormal frame.
pub fn covariant_derivative(geom: &ModelGeometry, x: &KillingVector, p: Point) -> Result<Matrix2<f64>, GeometryError> {
    let c = geom.christoffel(p)?.gamma;
    let h = geom.frame_scale(p)?;
    let s = geom.signs();
    let v = x.eval(p);
    let jac = x.jacobian(p);
    let mut out = Matrix2::zeros();
    for a in 0..2 {
        for b in 0..2 {
            let mut d = jac[a][b];
            for k in 0..2 {
                d += c[a][b][k] * v[k];
            }
            out[(a, b)] = s[a] * h[a] * d / h[b];
        }
    }
    Ok(out)
}

/// `max |∇_a X_b + ∇_b X_a|` at `p`.
pub fn killing_equation_residual(geom: &ModelGeometry, x: &KillingVector, p: Point) -> Result<f64, GeometryError> {
    let a = covariant_derivative(geom, x, p)?;
    Ok((a + a.transpose()).amax())
}

/// `𝓛_X ε = ∇_X ε − ρ(∇X) ε`.
pub fn kosmann_lie_derivative(
    conn: &AdmissibleConnection,
    x: &KillingVector,
    field: &KillingSpinorField,
    p: Point,
) -> Result<Vector2<f64>, GeometryError> {
    let geom = &conn.geometry;
    let value = field.value(p)?;
    let nabla = conn.nabla_frame(p, &value, &field.partials(p, 1e-5)?)?;
    let xf = geom.to_frame(p, x.eval(p))?;
    let a = covariant_derivative(geom, x, p)?;
    Ok(nabla[0] * xf[0] + nabla[1] * xf[1] - conn.rep.spin_lift(&a) * value)
}

/// Coordinate components of `[X, Y]`.
pub fn vector_bracket(x: &KillingVector, y: &KillingVector, p: Point) -> [f64; 2] {
    let (xv, yv) = (x.eval(p), y.eval(p));
    let (jx, jy) = (x.jacobian(p), y.jacobian(p));
    [0, 1].map(|i| (0..2).map(|j| xv[j] * jy[i][j] - yv[j] * jx[i][j]).sum())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Alignment {
    /// Column `m` holds the coefficients of `P_0, P_1, L_*` (in that order)
    /// on the closed-form Killing vectors.
    pub change_of_basis: [[f64; 3]; 3],
    pub even_residual: f64,
    pub full_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KillingSuperalgebra {
    pub labels: Vec<String>,
    /// `[x_i, x_j] = c[i][j][k] x_k` in the basis of closed-form Killing
    /// vectors followed by the two Killing spinors.
    pub structure: Vec<Vec<Vec<f64>>>,
    pub closure_residual: f64,
    pub jacobi_residual: f64,
    pub alignment: Alignment,
}

fn least_squares(columns: &[DVector<f64>], rhs: &DVector<f64>) -> (Vec<f64>, f64) {
    let a = DMatrix::from_columns(columns);
    let svd = a.clone().svd(true, true);
    let c = svd.solve(rhs, 1e-12).expect("SVD with both factors");
    let resid = (&a * &c - rhs).amax();
    (c.iter().copied().collect(), resid)
}

/// Largest graded-Jacobi defect of a float bracket tensor.
pub fn numeric_jacobi_residual(c: &[Vec<Vec<f64>>], odd: &[bool]) -> f64 {
    let n = c.len();
    let br = |x: &[f64], y: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                let w = x[i] * y[j];
                if w != 0.0 {
                    for k in 0..n {
                        out[k] += w * c[i][j][k];
                    }
                }
            }
        }
        out
    };
    let unit = |i: usize| {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        v
    };
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (x, y, z) = (unit(i), unit(j), unit(k));
                let lhs = br(&x, &br(&y, &z));
                let t1 = br(&br(&x, &y), &z);
                let t2 = br(&y, &br(&x, &z));
                let sign = if odd[i] && odd[j] { -1.0 } else { 1.0 };
                for m in 0..n {
                    worst = worst.max((lhs[m] - t1[m] - sign * t2[m]).abs());
                }
            }
        }
    }
    worst
}

/// Build the bracket table of Killing vectors and Killing spinors on a
/// maximally supersymmetric background and align it with the algebraic
/// deformation of the same `(signature, σ_B, b)`.
pub fn assemble_killing_superalgebra(conn: &AdmissibleConnection) -> Result<KillingSuperalgebra, GeometryError> {
    let geom = &conn.geometry;
    let base = geom.base_point();
    let est = killing_spinor_dimension(conn, base, &sample_grid(geom, 9, 0.4), &[])?;
    if est.dimension != 2 {
        return Err(GeometryError::NotMaxSusy(est.dimension));
    }
    let rep = &conn.rep;
    let exact_rep = build_gamma_rep(geom.signature);
    let bilinear = bilinear_with_symmetry(&exact_rep, conn.sigma_b);
    let bf = to_matrix(&bilinear.matrix);

    let vectors = killing_vectors(geom);
    let spinors: Vec<KillingSpinorField> =
        [Vector2::new(1.0, 0.0), Vector2::new(0.0, 1.0)].into_iter().map(|f| KillingSpinorField::new(conn, base, f)).collect();

    let d = 0.2;
    let points: Vec<Point> = [[0.0, 0.0], [d, 0.0], [-d, 0.0], [0.0, d], [0.0, -d], [d, d]]
        .iter()
        .map(|o| [base[0] + o[0], base[1] + o[1]])
        .collect();

    // Frame components of each basis element at every sample point.
    let mut vec_samples: Vec<DVector<f64>> = Vec::new();
    for x in &vectors {
        let mut col = Vec::new();
        for &p in &points {
            let v = geom.to_frame(p, x.eval(p))?;
            col.extend([v[0], v[1]]);
        }
        vec_samples.push(DVector::from_vec(col));
    }
    let mut spin_values: Vec<Vec<Vector2<f64>>> = Vec::new();
    for s in &spinors {
        spin_values.push(points.iter().map(|&p| s.value(p)).collect::<Result<_, _>>()?);
    }
    let spin_samples: Vec<DVector<f64>> =
        spin_values.iter().map(|vals| DVector::from_iterator(2 * vals.len(), vals.iter().flat_map(|v| [v[0], v[1]]))).collect();

    let n = 5;
    let mut c = vec![vec![vec![0.0; n]; n]; n];
    let mut closure: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let mut col = Vec::new();
            for &p in &points {
                let v = geom.to_frame(p, vector_bracket(&vectors[i], &vectors[j], p))?;
                col.extend([v[0], v[1]]);
            }
            let (coef, r) = least_squares(&vec_samples, &DVector::from_vec(col));
            closure = closure.max(r);
            c[i][j][..3].copy_from_slice(&coef);
        }
        for a in 0..2 {
            let mut col = Vec::new();
            for &p in &points {
                let v = kosmann_lie_derivative(conn, &vectors[i], &spinors[a], p)?;
                col.extend([v[0], v[1]]);
            }
            let (coef, r) = least_squares(&spin_samples, &DVector::from_vec(col));
            closure = closure.max(r);
            for (m, x) in coef.iter().enumerate() {
                c[i][3 + a][3 + m] = *x;
                c[3 + a][i][3 + m] = -*x;
            }
        }
    }
    for a in 0..2 {
        for b in 0..2 {
            let mut col = Vec::new();
            for k in 0..points.len() {
                let v = dirac_current_frame(&bf, rep, &spin_values[a][k], &spin_values[b][k]);
                col.extend([v[0], v[1]]);
            }
            let (coef, r) = least_squares(&vec_samples, &DVector::from_vec(col));
            closure = closure.max(r);
            c[3 + a][3 + b][..3].copy_from_slice(&coef);
        }
    }
    let odd = [false, false, false, true, true];
    let jacobi_residual = numeric_jacobi_residual(&c, &odd);

    // Alignment: P_μ has X(p) = e_μ, ∇X(p) = 0; L_* has X(p) = 0, ∇X(p) = −A_L.
    let mut data = Matrix3::zeros();
    for (i, x) in vectors.iter().enumerate() {
        let v = geom.to_frame(base, x.eval(base))?;
        let a = covariant_derivative(geom, x, base)?;
        let l_coeff = 0.5 * rep.sigma_flip * (a[(0, 1)] - a[(1, 0)]);
        data.set_column(i, &Vector3::new(v[0], v[1], l_coeff));
    }
    let targets = Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0);
    let inv = data.try_inverse().filter(|m| m.iter().all(|x| x.is_finite())).ok_or(GeometryError::BasisDegenerate)?;
    if data.determinant().abs() < 1e-10 {
        return Err(GeometryError::BasisDegenerate);
    }
    let t = inv * targets;
    let t_inv = t.try_inverse().ok_or(GeometryError::BasisDegenerate)?;
    let mut full_t = DMatrix::identity(n, n);
    let mut full_t_inv = DMatrix::identity(n, n);
    for r in 0..3 {
        for s in 0..3 {
            full_t[(r, s)] = t[(r, s)];
            full_t_inv[(r, s)] = t_inv[(r, s)];
        }
    }
    let mut aligned = vec![vec![vec![0.0; n]; n]; n];
    for m in 0..n {
        for l in 0..n {
            let mut acc = DVector::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    let w = full_t[(i, m)] * full_t[(j, l)];
                    if w != 0.0 {
                        acc += DVector::from_column_slice(&c[i][j]) * w;
                    }
                }
            }
            let y = &full_t_inv * acc;
            aligned[m][l] = y.iter().copied().collect();
        }
    }

    let flat = build_flat_model(&exact_rep, &bilinear, ModuleChoice::Full).expect("canonical bilinear is admissible");
    let b = BigRational::from_float(conn.killing.value(base)).expect("finite b");
    let exact = build_deformation(&flat, &b).expect("full module deforms");
    let mut even_residual: f64 = 0.0;
    let mut full_residual: f64 = 0.0;
    for m in 0..n {
        for l in 0..n {
            let br = exact.bracket(m, l);
            for k in 0..n {
                let e = (aligned[m][l][k] - to_f64(&br[k])).abs();
                full_residual = full_residual.max(e);
                if m < 3 && l < 3 {
                    even_residual = even_residual.max(e);
                }
            }
        }
    }
    let mut change_of_basis = [[0.0; 3]; 3];
    for r in 0..3 {
        for s in 0..3 {
            change_of_basis[r][s] = t[(r, s)];
        }
    }
    let mut labels: Vec<String> = vectors.iter().map(|v| v.label.clone()).collect();
    labels.extend(["ε_1".to_string(), "ε_2".to_string()]);
    Ok(KillingSuperalgebra {
        labels,
        structure: c,
        closure_residual: closure,
        jacobi_residual,
        alignment: Alignment { change_of_basis, even_residual, full_residual },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::connection::{curvature_RD, KillingFunction};
    use crate::geometry::{model_space, perturbed_h2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn h2() -> ModelGeometry {
        model_space(GeometryKind::H2, SignatureKind::Riemannian02, 0.5).unwrap()
    }

    fn all_geometries() -> Vec<ModelGeometry> {
        vec![
            h2(),
            model_space(GeometryKind::DS2, SignatureKind::Lorentzian11, 1.0).unwrap(),
            model_space(GeometryKind::AdS2, SignatureKind::Lorentzian11, 1.0).unwrap(),
            model_space(GeometryKind::Flat, SignatureKind::Riemannian02, 0.0).unwrap(),
            model_space(GeometryKind::Flat, SignatureKind::Lorentzian11, 0.0).unwrap(),
        ]
    }

    fn pairing(geom: &ModelGeometry) -> i8 {
        match geom.kind {
            GeometryKind::DS2 => 1,
            _ => -1,
        }
    }

    #[test]
    fn closed_form_fields_are_killing() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for geom in all_geometries() {
            let base = geom.base_point();
            for x in killing_vectors(&geom) {
                for _ in 0..5 {
                    let p = [base[0] + rng.random_range(-0.7..0.7), base[1] + rng.random_range(-0.4..0.7)];
                    assert!(killing_equation_residual(&geom, &x, p).unwrap() < 1e-8, "{:?} {}", geom.kind, x.label);
                }
            }
        }
    }

    #[test]
    fn non_killing_field_detected() {
        let x = KillingVector::new("x∂x", |p| [p[0], 0.0]);
        assert!(killing_equation_residual(&h2(), &x, [0.3, 1.0]).unwrap() > 0.1);
    }

    #[test]
    fn kosmann_trivial_cases() {
        let conn = AdmissibleConnection::canonical(h2(), -1);
        let field = KillingSpinorField::new(&conn, [0.0, 1.0], Vector2::new(1.0, 0.0));
        let zero = KillingVector::new("0", |_| [0.0, 0.0]);
        assert!(kosmann_lie_derivative(&conn, &zero, &field, [0.1, 1.1]).unwrap().norm() < 1e-14);

        let flat = AdmissibleConnection::canonical(model_space(GeometryKind::Flat, SignatureKind::Riemannian02, 0.0).unwrap(), 1);
        let constant = KillingSpinorField::new(&flat, [0.0, 0.0], Vector2::new(0.3, 0.4));
        let tr = KillingVector::new("∂x", |_| [1.0, 0.0]);
        assert!(kosmann_lie_derivative(&flat, &tr, &constant, [0.5, -0.2]).unwrap().norm() < 1e-10);
    }

    #[test]
    fn kosmann_preserves_killing_spinors() {
        // 𝓛_X ε is again D-parallel: expand it on the transported basis at the
        // base point and compare elsewhere.
        let conn = AdmissibleConnection::canonical(h2(), -1);
        let base = [0.0, 1.0];
        let e1 = KillingSpinorField::new(&conn, base, Vector2::new(1.0, 0.0));
        for x in killing_vectors(&conn.geometry) {
            let at_base = kosmann_lie_derivative(&conn, &x, &e1, base).unwrap();
            let predicted = KillingSpinorField::new(&conn, base, at_base);
            for p in [[0.3, 1.1], [-0.2, 0.8]] {
                let got = kosmann_lie_derivative(&conn, &x, &e1, p).unwrap();
                assert!((got - predicted.value(p).unwrap()).amax() < 1e-5, "{}", x.label);
            }
        }
    }

    #[test]
    fn hyperbolic_superalgebra() {
        let conn = AdmissibleConnection::canonical(h2(), -1);
        let ks = assemble_killing_superalgebra(&conn).unwrap();
        assert!(ks.closure_residual < 1e-4, "{}", ks.closure_residual);
        assert!(ks.jacobi_residual < 1e-3, "{}", ks.jacobi_residual);
        assert!(ks.alignment.even_residual < 1e-3, "{:?}", ks.alignment);
        assert!(ks.alignment.full_residual < 1e-3, "{:?}", ks.alignment);
    }

    #[test]
    fn every_supersymmetric_background_assembles() {
        for geom in all_geometries() {
            let pairings: &[i8] = match geom.kind {
                GeometryKind::H2 | GeometryKind::Flat => &[1, -1],
                _ => &[pairing(&geom)],
            };
            for &sigma_b in pairings {
                let conn = AdmissibleConnection::canonical(geom.clone(), sigma_b);
                let ks = assemble_killing_superalgebra(&conn).unwrap();
                assert!(ks.closure_residual < 1e-4, "{:?} {sigma_b}: {}", geom.kind, ks.closure_residual);
                assert!(ks.jacobi_residual < 1e-3);
                assert!(ks.alignment.full_residual < 1e-3, "{:?} {sigma_b}: {:?}", geom.kind, ks.alignment);
            }
        }
    }

    #[test]
    fn flat_translations_commute() {
        let flat = AdmissibleConnection::canonical(model_space(GeometryKind::Flat, SignatureKind::Lorentzian11, 0.0).unwrap(), -1);
        let ks = assemble_killing_superalgebra(&flat).unwrap();
        assert!(ks.structure[0][1].iter().all(|x| x.abs() < 1e-8));
    }

    #[test]
    fn not_max_susy_refused() {
        let conn = AdmissibleConnection::new(perturbed_h2(0.5, 0.5).unwrap(), -1, KillingFunction::Constant(0.5));
        assert!(matches!(assemble_killing_superalgebra(&conn), Err(GeometryError::NotMaxSusy(0))));
        assert!(curvature_RD(&conn, [0.0, 1.0]).unwrap().max_component > 1e-3);
    }

    #[test]
    fn lorentzian_currents_have_the_predicted_causal_character() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for geom in all_geometries().into_iter().filter(|g| g.signature == SignatureKind::Lorentzian11) {
            let conn = AdmissibleConnection::canonical(geom.clone(), pairing(&geom));
            let exact = build_gamma_rep(geom.signature);
            let bf = to_matrix(&bilinear_with_symmetry(&exact, conn.sigma_b).matrix);
            let rep = &conn.rep;
            for _ in 0..4 {
                let fibre = Vector2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                let field = KillingSpinorField::new(&conn, geom.base_point(), fibre);
                let p = [rng.random_range(-0.4..0.4), rng.random_range(-0.4..0.4)];
                let e = field.value(p).unwrap();
                let k = dirac_current_frame(&bf, rep, &e, &e);
                let s1 = (e.transpose() * bf * e)[0];
                let s2 = (e.transpose() * bf * rep.gamma_star * e)[0];
                let predicted = s1 * s1 + rep.sigma_flip * s2 * s2;
                assert!((rep.norm2(&k) - predicted).abs() < 1e-9);
                if conn.sigma_b < 0 {
                    assert!(rep.norm2(&k) < 0.0, "timelike");
                }
            }
        }
    }
}
