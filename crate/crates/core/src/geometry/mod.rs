//! Numeric model spaces in diagonal charts `g_ii = s_i exp(2 f_i)`.
//!
//! Every chart comes with closed-form `f_i` and its first and second
//! derivatives; Christoffel symbols and curvature follow from those, and a
//! finite-difference path through the metric alone serves as a cross-check.

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::clifford::{build_gamma_rep, SignatureKind};
use crate::error::GeometryError;
use crate::rational::to_f64;

pub mod connection;
pub mod killing;

pub use connection::{AdmissibleConnection, KillingFunction};

pub type Point = [f64; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeometryKind {
    Flat,
    H2,
    #[serde(rename = "dS2")]
    DS2,
    #[serde(rename = "AdS2")]
    AdS2,
}

impl GeometryKind {
    pub const ALL: [GeometryKind; 4] = [GeometryKind::Flat, GeometryKind::H2, GeometryKind::DS2, GeometryKind::AdS2];

    pub fn name(self) -> &'static str {
        match self {
            GeometryKind::Flat => "flat",
            GeometryKind::H2 => "H2",
            GeometryKind::DS2 => "dS2",
            GeometryKind::AdS2 => "AdS2",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(text.trim()))
    }
}

/// Float copy of the gamma representation.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatRep {
    pub kind: SignatureKind,
    pub gamma: [Matrix2<f64>; 2],
    pub gamma_upper: [Matrix2<f64>; 2],
    pub gamma_star: Matrix2<f64>,
    pub eta: [f64; 2],
    pub eps: [[f64; 2]; 2],
    pub sigma_flip: f64,
}

pub(crate) fn to_matrix(m: &crate::clifford::Mat2) -> Matrix2<f64> {
    Matrix2::new(to_f64(m.entry(0, 0)), to_f64(m.entry(0, 1)), to_f64(m.entry(1, 0)), to_f64(m.entry(1, 1)))
}

impl FloatRep {
    pub fn new(kind: SignatureKind) -> Self {
        let rep = build_gamma_rep(kind);
        let gamma = [to_matrix(&rep.gamma[0]), to_matrix(&rep.gamma[1])];
        let eta = [rep.eta(0, 0) as f64, rep.eta(1, 1) as f64];
        Self {
            kind,
            gamma_upper: [gamma[0] * eta[0], gamma[1] * eta[1]],
            gamma,
            gamma_star: to_matrix(&rep.gamma_star),
            eta,
            eps: [[0.0, 1.0], [-1.0, 0.0]],
            sigma_flip: rep.sigma_flip() as f64,
        }
    }

    /// `¼ A_{ρσ} Γ^ρ Γ^σ` for `(Av)_ρ = A_{ρσ} v^σ`.
    pub fn spin_lift(&self, a: &Matrix2<f64>) -> Matrix2<f64> {
        let mut out = Matrix2::zeros();
        for r in 0..2 {
            for s in 0..2 {
                out += self.gamma_upper[r] * self.gamma_upper[s] * (0.25 * a[(r, s)]);
            }
        }
        out
    }

    /// Clifford action of a frame vector.
    pub fn clifford(&self, v: &Vector2<f64>) -> Matrix2<f64> {
        self.gamma[0] * v[0] + self.gamma[1] * v[1]
    }

    /// Lowered `so(V)` element of the rotation `L_*`, i.e. `ς ε_{ρσ}`.
    pub fn rotation_generator(&self) -> Matrix2<f64> {
        Matrix2::new(0.0, self.sigma_flip, -self.sigma_flip, 0.0)
    }

    /// Lorentzian (or Euclidean) squared norm of frame components.
    pub fn norm2(&self, v: &Vector2<f64>) -> f64 {
        self.eta[0] * v[0] * v[0] + self.eta[1] * v[1] * v[1]
    }
}

/// Metric data at a point: `g_ii`, `∂_l g_ii`, `∂_l ∂_m g_ii`.
#[derive(Clone, Copy, Debug)]
pub struct MetricJet {
    pub g: [f64; 2],
    pub dg: [[f64; 2]; 2],
    pub d2g: [[[f64; 2]; 2]; 2],
}

/// `Γ^k_{ij}` indexed `[k][i][j]`, and `∂_m Γ^k_{ij}` indexed `[k][i][j][m]`.
#[derive(Clone, Copy, Debug)]
pub struct Christoffel {
    pub gamma: [[[f64; 2]; 2]; 2],
    pub d_gamma: [[[[f64; 2]; 2]; 2]; 2],
}

impl MetricJet {
    pub fn christoffel(&self) -> Christoffel {
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        let (g, dg, d2g) = (self.g, self.dg, self.d2g);
        let mut gamma = [[[0.0; 2]; 2]; 2];
        let mut d_gamma = [[[[0.0; 2]; 2]; 2]; 2];
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let bracket = d(k, j) * dg[k][i] + d(k, i) * dg[k][j] - d(i, j) * dg[i][k];
                    gamma[k][i][j] = 0.5 * bracket / g[k];
                    for m in 0..2 {
                        let d_bracket = d(k, j) * d2g[k][i][m] + d(k, i) * d2g[k][j][m] - d(i, j) * d2g[i][k][m];
                        d_gamma[k][i][j][m] = -0.5 * dg[k][m] / (g[k] * g[k]) * bracket + 0.5 * d_bracket / g[k];
                    }
                }
            }
        }
        Christoffel { gamma, d_gamma }
    }

    /// `R^ρ_{σμν}` indexed `[ρ][σ][μ][ν]`.
    pub fn riemann(&self) -> [[[[f64; 2]; 2]; 2]; 2] {
        let Christoffel { gamma: c, d_gamma: dc } = self.christoffel();
        let mut r = [[[[0.0; 2]; 2]; 2]; 2];
        for rho in 0..2 {
            for sigma in 0..2 {
                for mu in 0..2 {
                    for nu in 0..2 {
                        let mut v = dc[rho][nu][sigma][mu] - dc[rho][mu][sigma][nu];
                        for l in 0..2 {
                            v += c[rho][mu][l] * c[l][nu][sigma] - c[rho][nu][l] * c[l][mu][sigma];
                        }
                        r[rho][sigma][mu][nu] = v;
                    }
                }
            }
        }
        r
    }

    pub fn scalar_curvature(&self) -> f64 {
        let r = self.riemann();
        (0..2).map(|s| (0..2).map(|rho| r[rho][s][rho][s]).sum::<f64>() / self.g[s]).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelGeometry {
    pub kind: GeometryKind,
    pub signature: SignatureKind,
    /// The parameter `b` the chart is scaled by.
    pub scale: f64,
    /// Coefficient `δ` of an extra `δx²` in the conformal factor; zero for the
    /// homogeneous spaces.
    pub perturbation: f64,
    pub chart: &'static str,
    pub scalar_curvature_target: Option<f64>,
}

pub fn model_space(kind: GeometryKind, signature: SignatureKind, b: f64) -> Result<ModelGeometry, GeometryError> {
    let needed = match kind {
        GeometryKind::Flat => None,
        GeometryKind::H2 => Some(SignatureKind::Riemannian02),
        GeometryKind::DS2 | GeometryKind::AdS2 => Some(SignatureKind::Lorentzian11),
    };
    if let Some(n) = needed {
        if n != signature {
            return Err(GeometryError::IncompatibleSignature { kind: kind.name(), needed: n.name() });
        }
        if b == 0.0 {
            return Err(GeometryError::ZeroCurvatureScale);
        }
    }
    let lorentzian = signature == SignatureKind::Lorentzian11;
    let (chart, target) = match kind {
        GeometryKind::Flat if lorentzian => ("Minkowski (t, x)", 0.0),
        GeometryKind::Flat => ("Euclidean (x, y)", 0.0),
        GeometryKind::H2 => ("upper half-plane (x, y), y > 0", -8.0 * b * b),
        GeometryKind::DS2 => ("global (t, x), -dt² + cosh²(2bt) dx²", 8.0 * b * b),
        GeometryKind::AdS2 => ("global (t, x), -cosh²(2bx) dt² + dx²", -8.0 * b * b),
    };
    let scale = if kind == GeometryKind::Flat { 0.0 } else { b };
    Ok(ModelGeometry { kind, signature, scale, perturbation: 0.0, chart, scalar_curvature_target: Some(target) })
}

/// Upper half-plane with conformal factor `exp(δx²)/(2|b|y)`; not of constant
/// curvature unless `δ = 0`.
pub fn perturbed_h2(b: f64, delta: f64) -> Result<ModelGeometry, GeometryError> {
    let mut geom = model_space(GeometryKind::H2, SignatureKind::Riemannian02, b)?;
    geom.perturbation = delta;
    geom.chart = "upper half-plane (x, y), perturbed conformal factor";
    if delta != 0.0 {
        geom.scalar_curvature_target = None;
    }
    Ok(geom)
}

impl ModelGeometry {
    pub fn rep(&self) -> FloatRep {
        FloatRep::new(self.signature)
    }

    pub fn signs(&self) -> [f64; 2] {
        match self.signature {
            SignatureKind::Lorentzian11 => [-1.0, 1.0],
            SignatureKind::Riemannian02 => [1.0, 1.0],
        }
    }

    pub fn check_point(&self, p: Point) -> Result<(), GeometryError> {
        let inside = p.iter().all(|x| x.is_finite()) && (self.kind != GeometryKind::H2 || p[1] > 0.0);
        if inside {
            Ok(())
        } else {
            Err(GeometryError::OutOfChart(p[0], p[1]))
        }
    }

    /// Base point used for transport and frames.
    pub fn base_point(&self) -> Point {
        match self.kind {
            GeometryKind::H2 => [0.0, 1.0],
            _ => [0.0, 0.0],
        }
    }

    /// `f_i`, `∂_l f_i` as `[i][l]`, `∂_l ∂_m f_i` as `[i][l][m]`.
    fn log_factor(&self, p: Point) -> ([f64; 2], [[f64; 2]; 2], [[[f64; 2]; 2]; 2]) {
        let mut f = [0.0; 2];
        let mut df = [[0.0; 2]; 2];
        let mut d2f = [[[0.0; 2]; 2]; 2];
        let k = 2.0 * self.scale.abs();
        match self.kind {
            GeometryKind::Flat => {}
            GeometryKind::H2 => {
                let (x, y) = (p[0], p[1]);
                let delta = self.perturbation;
                for i in 0..2 {
                    f[i] = -(k * y).ln() + delta * x * x;
                    df[i] = [2.0 * delta * x, -1.0 / y];
                    d2f[i] = [[2.0 * delta, 0.0], [0.0, 1.0 / (y * y)]];
                }
            }
            GeometryKind::DS2 => {
                let t = p[0];
                f[1] = (k * t).cosh().ln();
                df[1][0] = k * (k * t).tanh();
                d2f[1][0][0] = k * k / (k * t).cosh().powi(2);
            }
            GeometryKind::AdS2 => {
                let x = p[1];
                f[0] = (k * x).cosh().ln();
                df[0][1] = k * (k * x).tanh();
                d2f[0][1][1] = k * k / (k * x).cosh().powi(2);
            }
        }
        (f, df, d2f)
    }

    /// Diagonal metric components `g_00`, `g_11`.
    pub fn metric(&self, p: Point) -> Result<[f64; 2], GeometryError> {
        self.check_point(p)?;
        let (f, _, _) = self.log_factor(p);
        let s = self.signs();
        Ok([s[0] * (2.0 * f[0]).exp(), s[1] * (2.0 * f[1]).exp()])
    }

    pub fn metric_jet(&self, p: Point) -> Result<MetricJet, GeometryError> {
        let g = self.metric(p)?;
        let (_, df, d2f) = self.log_factor(p);
        let mut dg = [[0.0; 2]; 2];
        let mut d2g = [[[0.0; 2]; 2]; 2];
        for i in 0..2 {
            for l in 0..2 {
                dg[i][l] = 2.0 * df[i][l] * g[i];
                for m in 0..2 {
                    d2g[i][l][m] = (4.0 * df[i][l] * df[i][m] + 2.0 * d2f[i][l][m]) * g[i];
                }
            }
        }
        Ok(MetricJet { g, dg, d2g })
    }

    /// The same jet from central differences of [`Self::metric`] alone.
    pub fn metric_jet_fd(&self, p: Point, h: f64) -> Result<MetricJet, GeometryError> {
        let at = |dx: f64, dy: f64| self.metric([p[0] + dx, p[1] + dy]);
        let g = at(0.0, 0.0)?;
        let steps = [[h, 0.0], [0.0, h]];
        let mut dg = [[0.0; 2]; 2];
        let mut d2g = [[[0.0; 2]; 2]; 2];
        for l in 0..2 {
            let (a, b) = (steps[l][0], steps[l][1]);
            let plus = at(a, b)?;
            let minus = at(-a, -b)?;
            for i in 0..2 {
                dg[i][l] = (plus[i] - minus[i]) / (2.0 * h);
                d2g[i][l][l] = (plus[i] - 2.0 * g[i] + minus[i]) / (h * h);
            }
        }
        let pp = at(h, h)?;
        let pm = at(h, -h)?;
        let mp = at(-h, h)?;
        let mm = at(-h, -h)?;
        for i in 0..2 {
            let mixed = (pp[i] - pm[i] - mp[i] + mm[i]) / (4.0 * h * h);
            d2g[i][0][1] = mixed;
            d2g[i][1][0] = mixed;
        }
        Ok(MetricJet { g, dg, d2g })
    }

    pub fn christoffel(&self, p: Point) -> Result<Christoffel, GeometryError> {
        Ok(self.metric_jet(p)?.christoffel())
    }

    /// Frame scale factors `h_a = sqrt|g_aa|`, so `e_a = h_a^{-1} ∂_a`.
    pub fn frame_scale(&self, p: Point) -> Result<[f64; 2], GeometryError> {
        let g = self.metric(p)?;
        Ok([g[0].abs().sqrt(), g[1].abs().sqrt()])
    }

    /// Coordinate components to orthonormal-frame components.
    pub fn to_frame(&self, p: Point, v: [f64; 2]) -> Result<Vector2<f64>, GeometryError> {
        let h = self.frame_scale(p)?;
        Ok(Vector2::new(h[0] * v[0], h[1] * v[1]))
    }

    pub fn to_coords(&self, p: Point, v: &Vector2<f64>) -> Result<[f64; 2], GeometryError> {
        let h = self.frame_scale(p)?;
        Ok([v[0] / h[0], v[1] / h[1]])
    }

    /// Frame connection `ω^a_b(∂_j)` as matrices indexed `[j][(a, b)]`.
    pub fn frame_connection(&self, p: Point) -> Result<[Matrix2<f64>; 2], GeometryError> {
        let (f, df, _) = self.log_factor(p);
        self.check_point(p)?;
        let c = self.christoffel(p)?.gamma;
        let h = [f[0].exp(), f[1].exp()];
        let mut out = [Matrix2::zeros(); 2];
        for (j, w) in out.iter_mut().enumerate() {
            for a in 0..2 {
                for b in 0..2 {
                    let mut v = h[a] * c[a][j][b] / h[b];
                    if a == b {
                        v -= df[b][j];
                    }
                    w[(a, b)] = v;
                }
            }
        }
        Ok(out)
    }

    /// Spin connection 1-form in lowered `so(V)` form, `[j]` the coordinate
    /// direction; `∇_j ε = ∂_j ε + ρ(ω_j) ε`.
    pub fn spin_connection(&self, p: Point) -> Result<[Matrix2<f64>; 2], GeometryError> {
        let s = self.signs();
        let w = self.frame_connection(p)?;
        Ok(w.map(|m| Matrix2::new(s[0] * m[(0, 0)], s[0] * m[(0, 1)], s[1] * m[(1, 0)], s[1] * m[(1, 1)])))
    }

    /// `R(e_c, e_d)` in the frame as lowered `so(V)` elements, `[c][d]`.
    pub fn frame_curvature(&self, p: Point) -> Result<[[Matrix2<f64>; 2]; 2], GeometryError> {
        let r = self.metric_jet(p)?.riemann();
        let h = self.frame_scale(p)?;
        let s = self.signs();
        let mut out = [[Matrix2::zeros(); 2]; 2];
        for c in 0..2 {
            for d in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        out[c][d][(a, b)] = s[a] * h[a] * r[a][b][c][d] / (h[b] * h[c] * h[d]);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scalar_curvature(&self, p: Point) -> Result<f64, GeometryError> {
        Ok(self.metric_jet(p)?.scalar_curvature())
    }

    pub fn scalar_curvature_fd(&self, p: Point, h: f64) -> Result<f64, GeometryError> {
        Ok(self.metric_jet_fd(p, h)?.scalar_curvature())
    }

    /// The Hodge star on coordinate 1-forms, `(*α)_ν = ε_{μν} g^{μλ} α_λ`.
    pub fn hodge_star(&self, p: Point) -> Result<Matrix2<f64>, GeometryError> {
        let g = self.metric(p)?;
        let vol = (g[0] * g[1]).abs().sqrt();
        Ok(Matrix2::new(0.0, -vol / g[1], vol / g[0], 0.0))
    }
}

/// Scalar curvature at `p` with its finite-difference cross-check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub point: Point,
    pub closed_form: f64,
    pub finite_difference: f64,
}

pub fn scalar_curvature(geom: &ModelGeometry, p: Point) -> Result<CurvatureSample, GeometryError> {
    Ok(CurvatureSample {
        point: p,
        closed_form: geom.scalar_curvature(p)?,
        finite_difference: geom.scalar_curvature_fd(p, 1e-4)?,
    })
}

/// Deterministic sample points inside the chart around the base point.
pub fn sample_grid(geom: &ModelGeometry, n: usize, radius: f64) -> Vec<Point> {
    let base = geom.base_point();
    let side = (n as f64).sqrt().ceil() as usize;
    let mut out = Vec::with_capacity(n);
    for i in 0..side {
        for j in 0..side {
            if out.len() == n {
                return out;
            }
            let u = if side == 1 { 0.0 } else { -1.0 + 2.0 * i as f64 / (side - 1) as f64 };
            let v = if side == 1 { 0.0 } else { -1.0 + 2.0 * j as f64 / (side - 1) as f64 };
            out.push([base[0] + radius * u, base[1] + radius * v * 0.9]);
        }
    }
    out
}
