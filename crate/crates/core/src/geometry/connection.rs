//! The connection `D = ∇ − β` on spinors, its curvature, and Killing
//! spinors built by `D`-parallel transport.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, Matrix2, Vector2};
use serde::Serialize;

use super::{FloatRep, ModelGeometry, Point};
use crate::error::GeometryError;

/// The Killing function `b`.
#[derive(Clone)]
pub enum KillingFunction {
    Constant(f64),
    Custom(Arc<dyn Fn(Point) -> f64 + Send + Sync>),
}

impl fmt::Debug for KillingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KillingFunction::Constant(b) => write!(f, "Constant({b})"),
            KillingFunction::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl KillingFunction {
    pub fn value(&self, p: Point) -> f64 {
        match self {
            KillingFunction::Constant(b) => *b,
            KillingFunction::Custom(f) => f(p),
        }
    }

    /// Coordinate gradient, by central differences for custom functions.
    pub fn gradient(&self, p: Point) -> [f64; 2] {
        match self {
            KillingFunction::Constant(_) => [0.0, 0.0],
            KillingFunction::Custom(f) => {
                let h = 1e-5;
                [
                    (f([p[0] + h, p[1]]) - f([p[0] - h, p[1]])) / (2.0 * h),
                    (f([p[0], p[1] + h]) - f([p[0], p[1] - h])) / (2.0 * h),
                ]
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct AdmissibleConnection {
    pub geometry: ModelGeometry,
    pub sigma_b: i8,
    pub killing: KillingFunction,
    pub rep: FloatRep,
}

impl AdmissibleConnection {
    pub fn new(geometry: ModelGeometry, sigma_b: i8, killing: KillingFunction) -> Self {
        let rep = geometry.rep();
        Self { geometry, sigma_b, killing, rep }
    }

    /// The connection the model space is maximally supersymmetric for.
    pub fn canonical(geometry: ModelGeometry, sigma_b: i8) -> Self {
        let b = geometry.scale;
        Self::new(geometry, sigma_b, KillingFunction::Constant(b))
    }

    /// `β(e_a)/b`: `Γ_a` for σ_B = -1 and `ε_{aν} Γ^ν`, the Clifford action of
    /// `*e_a`, for σ_B = +1.
    pub fn beta_unit(&self, a: usize) -> Matrix2<f64> {
        if self.sigma_b < 0 {
            self.rep.gamma[a]
        } else {
            (0..2).map(|nu| self.rep.gamma_upper[nu] * self.rep.eps[a][nu]).sum()
        }
    }

    /// `β(X)` for a frame vector `X`.
    pub fn beta(&self, p: Point, x: &Vector2<f64>) -> Matrix2<f64> {
        (self.beta_unit(0) * x[0] + self.beta_unit(1) * x[1]) * self.killing.value(p)
    }

    /// Frame derivatives `e_a b`.
    pub fn db_frame(&self, p: Point) -> Result<Vector2<f64>, GeometryError> {
        let h = self.geometry.frame_scale(p)?;
        let g = self.killing.gradient(p);
        Ok(Vector2::new(g[0] / h[0], g[1] / h[1]))
    }

    /// `dε/dt = A ε` along a curve with coordinate velocity `v`.
    pub fn transport_generator(&self, p: Point, v: [f64; 2]) -> Result<Matrix2<f64>, GeometryError> {
        let w = self.geometry.spin_connection(p)?;
        let omega = w[0] * v[0] + w[1] * v[1];
        let x = self.geometry.to_frame(p, v)?;
        Ok(self.beta(p, &x) - self.rep.spin_lift(&omega))
    }

    /// Covariant derivative `∇_{e_a}` of a spinor field, given its coordinate
    /// partials at `p`.
    pub fn nabla_frame(
        &self,
        p: Point,
        value: &Vector2<f64>,
        partials: &[Vector2<f64>; 2],
    ) -> Result<[Vector2<f64>; 2], GeometryError> {
        let h = self.geometry.frame_scale(p)?;
        let w = self.geometry.spin_connection(p)?;
        Ok([0, 1].map(|a| (partials[a] + self.rep.spin_lift(&w[a]) * value) / h[a]))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub point: Point,
    /// `R^D(e_0, e_1)`; the only independent component.
    pub component: [[f64; 2]; 2],
    /// Largest absolute entry of `R^D(e_μ, e_ν)` over all `μ, ν`.
    pub max_component: f64,
    /// `ε^{μν} R^D_{μν}`.
    pub contracted: [[f64; 2]; 2],
    /// `ς det(ε^{μν} R^D_{μν})`, computed from the matrix.
    pub obstruction: f64,
    /// The same scalar from the closed-form expression in `R`, `b`, `db`.
    pub obstruction_formula: f64,
    pub scalar_curvature: f64,
}

fn rows(m: &Matrix2<f64>) -> [[f64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

/// `R^D(e_μ,e_ν) = R(e_μ,e_ν) + [β_μ,β_ν] − (e_μ b)β̂_ν + (e_ν b)β̂_μ`, all
/// four components.
pub fn curvature_components(conn: &AdmissibleConnection, p: Point) -> Result<[[Matrix2<f64>; 2]; 2], GeometryError> {
    let riemann = conn.geometry.frame_curvature(p)?;
    let b = conn.killing.value(p);
    let db = conn.db_frame(p)?;
    let beta_hat = [conn.beta_unit(0), conn.beta_unit(1)];
    let mut out = [[Matrix2::zeros(); 2]; 2];
    for mu in 0..2 {
        for nu in 0..2 {
            let comm = beta_hat[mu] * beta_hat[nu] - beta_hat[nu] * beta_hat[mu];
            out[mu][nu] = conn.rep.spin_lift(&riemann[mu][nu]) + comm * (b * b) - beta_hat[nu] * db[mu] + beta_hat[mu] * db[nu];
        }
    }
    Ok(out)
}

#[allow(non_snake_case)]
pub fn curvature_RD(conn: &AdmissibleConnection, p: Point) -> Result<CurvatureReport, GeometryError> {
    let comps = curvature_components(conn, p)?;
    let rep = &conn.rep;
    let s = rep.sigma_flip;
    // ε^{01} = ς ε_{01}
    let contracted = (comps[0][1] - comps[1][0]) * s;
    let max_component = comps.iter().flatten().map(|m| m.amax()).fold(0.0, f64::max);
    let r = conn.geometry.scalar_curvature(p)?;
    let b = conn.killing.value(p);
    let db = conn.db_frame(p)?;
    let db2 = rep.norm2(&db);
    let obstruction_formula = if conn.sigma_b < 0 {
        (0.5 * r + 4.0 * b * b).powi(2) - 4.0 * db2
    } else {
        (0.5 * r + s * 4.0 * b * b).powi(2) - s * 4.0 * db2
    };
    Ok(CurvatureReport {
        point: p,
        component: rows(&comps[0][1]),
        max_component,
        contracted: rows(&contracted),
        obstruction: s * contracted.determinant(),
        obstruction_formula,
        scalar_curvature: r,
    })
}

/// Distance of `R` from the nearer branch of the constraint
/// `R = ±4|db| − 8b²` (σ_B = -1) or `R = ±4|db| − ς8b²` (σ_B = +1).
pub fn scalar_curvature_constraint(conn: &AdmissibleConnection, p: Point) -> Result<f64, GeometryError> {
    let r = conn.geometry.scalar_curvature(p)?;
    let b = conn.killing.value(p);
    let db = conn.db_frame(p)?;
    let norm = conn.rep.norm2(&db).abs().sqrt();
    let shift = if conn.sigma_b < 0 { 8.0 * b * b } else { conn.rep.sigma_flip * 8.0 * b * b };
    Ok([1.0, -1.0].iter().map(|sign| (r - (sign * 4.0 * norm - shift)).abs()).fold(f64::INFINITY, f64::min))
}

fn rk4_segment(
    conn: &AdmissibleConnection,
    from: Point,
    to: Point,
    steps: usize,
    mut u: Matrix2<f64>,
) -> Result<Matrix2<f64>, GeometryError> {
    let v = [to[0] - from[0], to[1] - from[1]];
    if v == [0.0, 0.0] {
        return Ok(u);
    }
    let dt = 1.0 / steps as f64;
    let at = |t: f64| [from[0] + t * v[0], from[1] + t * v[1]];
    let gen = |t: f64| conn.transport_generator(at(t), v);
    for k in 0..steps {
        let t = k as f64 * dt;
        let a0 = gen(t)?;
        let a1 = gen(t + 0.5 * dt)?;
        let a2 = gen(t + dt)?;
        let k1 = a0 * u;
        let k2 = a1 * (u + k1 * (0.5 * dt));
        let k3 = a1 * (u + k2 * (0.5 * dt));
        let k4 = a2 * (u + k3 * dt);
        u += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        if !u.iter().all(|x| x.is_finite()) {
            return Err(GeometryError::NonFiniteState);
        }
    }
    Ok(u)
}

/// Propagator of `Dε = 0` along a polyline, RK4 with `steps` per segment.
pub fn transport_matrix(conn: &AdmissibleConnection, path: &[Point], steps: usize) -> Result<Matrix2<f64>, GeometryError> {
    assert!(steps > 0, "need at least one step");
    let mut u = Matrix2::identity();
    for p in path {
        conn.geometry.check_point(*p)?;
    }
    for w in path.windows(2) {
        u = rk4_segment(conn, w[0], w[1], steps, u)?;
    }
    Ok(u)
}

pub fn parallel_transport(
    conn: &AdmissibleConnection,
    path: &[Point],
    e0: &Vector2<f64>,
    steps: usize,
) -> Result<Vector2<f64>, GeometryError> {
    Ok(transport_matrix(conn, path, steps)? * e0)
}

/// Counter-clockwise square with one corner at `corner`.
pub fn square_loop(corner: Point, side: f64) -> Vec<Point> {
    let [x, y] = corner;
    vec![[x, y], [x + side, y], [x + side, y + side], [x, y + side], [x, y]]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KillingSpinorEstimate {
    pub dimension: usize,
    /// Singular values of the stacked transported curvature endomorphisms.
    pub singular_values: Vec<f64>,
    /// `‖U_loop − 1‖` for each loop, paired with its side length.
    pub holonomy_defects: Vec<(f64, f64)>,
}

pub const RANK_TOLERANCE: f64 = 1e-6;

/// `2 − rank` of `{U_p^{-1} R^D(p) U_p}` over the sample points, with `U_p`
/// transport from `base` along a straight line.
pub fn killing_spinor_dimension(
    conn: &AdmissibleConnection,
    base: Point,
    samples: &[Point],
    loop_sides: &[f64],
) -> Result<KillingSpinorEstimate, GeometryError> {
    let steps = 64;
    let mut stacked = DMatrix::zeros(2 * (samples.len() + 1), 2);
    for (k, &p) in std::iter::once(&base).chain(samples).enumerate() {
        let u = transport_matrix(conn, &[base, p], steps)?;
        let inv = u.try_inverse().ok_or(GeometryError::NonFiniteState)?;
        let rd = curvature_components(conn, p)?[0][1];
        let pulled = inv * rd * u;
        for r in 0..2 {
            for c in 0..2 {
                stacked[(2 * k + r, c)] = pulled[(r, c)];
            }
        }
    }
    let singular_values: Vec<f64> = stacked.singular_values().iter().copied().collect();
    let rank = singular_values.iter().filter(|&&s| s > RANK_TOLERANCE).count();
    let holonomy_defects = loop_sides
        .iter()
        .map(|&side| {
            let u = transport_matrix(conn, &square_loop(base, side), 32)?;
            Ok((side, (u - Matrix2::identity()).norm()))
        })
        .collect::<Result<_, GeometryError>>()?;
    Ok(KillingSpinorEstimate { dimension: 2 - rank, singular_values, holonomy_defects })
}

/// The Killing spinor with fibre value `fibre` at `base`, extended by
/// transport along straight lines.
#[derive(Clone, Debug)]
pub struct KillingSpinorField {
    pub conn: AdmissibleConnection,
    pub base: Point,
    pub fibre: Vector2<f64>,
    pub steps: usize,
}

impl KillingSpinorField {
    pub fn new(conn: &AdmissibleConnection, base: Point, fibre: Vector2<f64>) -> Self {
        Self { conn: conn.clone(), base, fibre, steps: 200 }
    }

    pub fn value(&self, p: Point) -> Result<Vector2<f64>, GeometryError> {
        parallel_transport(&self.conn, &[self.base, p], &self.fibre, self.steps)
    }

    /// Coordinate partials by central differences with step `h`.
    pub fn partials(&self, p: Point, h: f64) -> Result<[Vector2<f64>; 2], GeometryError> {
        partials_of(&|q| self.value(q), p, h)
    }

    /// `max_a |∇_{e_a} ε − β(e_a) ε|` at `p`.
    pub fn killing_residual(&self, p: Point) -> Result<f64, GeometryError> {
        let value = self.value(p)?;
        let nabla = self.conn.nabla_frame(p, &value, &self.partials(p, 1e-5)?)?;
        let mut worst: f64 = 0.0;
        for (a, n) in nabla.iter().enumerate() {
            let mut e = Vector2::zeros();
            e[a] = 1.0;
            worst = worst.max((n - self.conn.beta(p, &e) * value).amax());
        }
        Ok(worst)
    }
}

pub type SpinorFn<'a> = dyn Fn(Point) -> Result<Vector2<f64>, GeometryError> + 'a;

pub fn partials_of(f: &SpinorFn<'_>, p: Point, h: f64) -> Result<[Vector2<f64>; 2], GeometryError> {
    let d0 = (f([p[0] + h, p[1]])? - f([p[0] - h, p[1]])?) / (2.0 * h);
    let d1 = (f([p[0], p[1] + h])? - f([p[0], p[1] - h])?) / (2.0 * h);
    Ok([d0, d1])
}

/// `|−D̸²ε + ∇^a∇_a ε − ¼Rε|` at `p` by nested central differences of `f`.
pub fn lichnerowicz_residual(conn: &AdmissibleConnection, f: &SpinorFn<'_>, p: Point, h: f64) -> Result<f64, GeometryError> {
    let geom = &conn.geometry;
    let rep = &conn.rep;
    let psi = |q: Point| -> Result<[Vector2<f64>; 2], GeometryError> {
        let v = f(q)?;
        conn.nabla_frame(q, &v, &partials_of(f, q, h)?)
    };
    let dirac = |q: Point| -> Result<Vector2<f64>, GeometryError> {
        let ps = psi(q)?;
        Ok(rep.gamma_upper[0] * ps[0] + rep.gamma_upper[1] * ps[1])
    };
    let hs = geom.frame_scale(p)?;
    let w = geom.spin_connection(p)?;
    let wf = geom.frame_connection(p)?;

    let phi = dirac(p)?;
    let dphi = partials_of(&dirac, p, h)?;
    let mut dirac2 = Vector2::zeros();
    for a in 0..2 {
        dirac2 += rep.gamma_upper[a] * ((dphi[a] + rep.spin_lift(&w[a]) * phi) / hs[a]);
    }

    let ps = psi(p)?;
    let shift = |i: usize, s: f64| if i == 0 { [p[0] + s, p[1]] } else { [p[0], p[1] + s] };
    let mut rough = Vector2::zeros();
    for a in 0..2 {
        let plus = psi(shift(a, h))?;
        let minus = psi(shift(a, -h))?;
        // ∇²_{aa} ε = e_a(ψ_a) + ρ(ω(e_a))ψ_a − ω^c_a(e_a) ψ_c
        let mut second = (plus[a] - minus[a]) / (2.0 * h * hs[a]) + rep.spin_lift(&w[a]) * ps[a] / hs[a];
        for c in 0..2 {
            second -= ps[c] * (wf[a][(c, a)] / hs[a]);
        }
        rough += second * rep.eta[a];
    }
    let r = geom.scalar_curvature(p)?;
    Ok((-dirac2 + rough - f(p)? * (0.25 * r)).amax())
}

/// Frame components of the Dirac current `κ(ε, ε')^μ = (ε^T B Γ^μ ε')`.
pub fn dirac_current_frame(
    bilinear: &Matrix2<f64>,
    rep: &FloatRep,
    e: &Vector2<f64>,
    f: &Vector2<f64>,
) -> Vector2<f64> {
    Vector2::new((e.transpose() * bilinear * rep.gamma_upper[0] * f)[0], (e.transpose() * bilinear * rep.gamma_upper[1] * f)[0])
}

/// `|∇_{κ_ε} b|` at `p` for the Killing spinor `field`.
pub fn killing_function_drift(
    conn: &AdmissibleConnection,
    bilinear: &Matrix2<f64>,
    field: &KillingSpinorField,
    p: Point,
) -> Result<f64, GeometryError> {
    let e = field.value(p)?;
    let k = dirac_current_frame(bilinear, &conn.rep, &e, &e);
    let db = conn.db_frame(p)?;
    Ok((k[0] * db[0] + k[1] * db[1]).abs())
}
