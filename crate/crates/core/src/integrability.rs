//! The two integrability conditions on a normalised cocycle and the
//! curvature map `θ` they produce.
//!
//! `Θ(v,s,s) = 2γ(s, β(v,s))` must factor as `θ(v, κ(s,s))` through the
//! Dirac current; then `θ(v,w)` has to act on spinors as `[β_v, β_w]`.

use num_traits::Zero;
use serde::Serialize;

use crate::bilinears::dirac_current;
use crate::clifford::Mat2;
use crate::error::AlgebraError;
use crate::linalg::QMatrix;
use crate::rational::{q, to_fraction_string, Q};
use crate::spencer::{is_cocycle, SpencerParams};
use crate::superalgebra::{p_index, q_index, ModuleChoice, StructureConstants, L_STAR};

/// `⊙²S` in the basis `Q₁Q₁, Q₁Q₂, Q₂Q₂`.
const SYM_BASIS: [(usize, usize); 3] = [(0, 0), (0, 1), (1, 1)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaTensor {
    /// `θ_{μνρσ}`: `(μ,ν)` the vector arguments, `(ρ,σ)` the `so(V)` indices.
    pub components: [[[[Q; 2]; 2]; 2]; 2],
    /// `L_*` coefficient `t_{μν}` of `θ(e_μ, e_ν)`.
    pub rotation: [[Q; 2]; 2],
    pub factors_through_kappa: bool,
    /// Basis of `ker κ ⊆ ⊙²S`.
    pub dirac_kernel: Vec<[Q; 3]>,
    /// `γ` evaluated on the Dirac kernel basis.
    pub gamma_on_kernel: Vec<Q>,
}

impl ThetaTensor {
    pub fn scaled(&self, k: &Q) -> ThetaTensor {
        let mut out = self.clone();
        for (row, src) in out.rotation.iter_mut().zip(&self.rotation) {
            for (x, y) in row.iter_mut().zip(src) {
                *x = y * k;
            }
        }
        for m in 0..2 {
            for n in 0..2 {
                for r in 0..2 {
                    for s in 0..2 {
                        out.components[m][n][r][s] = &self.components[m][n][r][s] * k;
                    }
                }
            }
        }
        out
    }

    pub fn is_skew(&self) -> bool {
        let c = &self.components;
        (0..16).all(|i| {
            let (m, n, r, s) = (i >> 3, (i >> 2) & 1, (i >> 1) & 1, i & 1);
            c[m][n][r][s] == -&c[n][m][r][s] && c[m][n][r][s] == -&c[m][n][s][r]
        })
    }
}

/// `Θ_ρ` on the `⊙²S` basis, polarised.
fn theta_values(flat: &StructureConstants, p: &SpencerParams) -> [[Q; 3]; 2] {
    let rep = flat.rep();
    let g = p.gamma_form();
    let mut out: [[Q; 3]; 2] = Default::default();
    for rho in 0..2 {
        let gb = &g * &p.beta(&rep, rho);
        let m = &gb + &gb.transpose();
        for (k, &(a, b)) in SYM_BASIS.iter().enumerate() {
            out[rho][k] = m.entry(a, b).clone();
        }
    }
    out
}

pub fn compute_theta(cocycle: &SpencerParams, flat: &StructureConstants) -> Result<ThetaTensor, AlgebraError> {
    if !is_cocycle(flat, cocycle) {
        return Err(AlgebraError::NotACocycle);
    }
    let rep = flat.rep();
    let kappa = dirac_current(&rep, &flat.bilinear)?;
    let sym: Vec<(usize, usize)> = match flat.module() {
        ModuleChoice::Full => SYM_BASIS.to_vec(),
        ModuleChoice::ChiralPlus => vec![(0, 0)],
    };
    let k_rows: Vec<Vec<Q>> = (0..2).map(|s| sym.iter().map(|&(a, b)| kappa.components[s].entry(a, b).clone()).collect()).collect();
    let k = QMatrix::from_rows(k_rows, sym.len());
    let kt = QMatrix::from_rows((0..sym.len()).map(|c| (0..2).map(|s| k.get(s, c).clone()).collect()).collect(), 2);

    let theta = theta_values(flat, cocycle);
    let pad = |v: &[Q]| -> [Q; 3] {
        let mut out: [Q; 3] = Default::default();
        for (c, &(a, b)) in sym.iter().enumerate() {
            let idx = SYM_BASIS.iter().position(|&x| x == (a, b)).unwrap();
            out[idx] = v[c].clone();
        }
        out
    };
    let dirac_kernel: Vec<[Q; 3]> = k.nullspace().iter().map(|v| pad(v)).collect();
    let gamma_on_kernel = dirac_kernel
        .iter()
        .map(|d| {
            SYM_BASIS.iter().zip(d).map(|(&(a, b), x)| cocycle.gamma_form().entry(a, b) * x).sum()
        })
        .collect();
    let factors = dirac_kernel.iter().all(|d| {
        (0..2).all(|rho| theta[rho].iter().zip(d).map(|(t, x)| t * x).sum::<Q>().is_zero())
    });
    if !factors {
        return Err(AlgebraError::NoFactorisation);
    }

    let mut rotation: [[Q; 2]; 2] = Default::default();
    for rho in 0..2 {
        let rhs: Vec<Q> = sym.iter().map(|ab| theta[rho][SYM_BASIS.iter().position(|x| x == ab).unwrap()].clone()).collect();
        let t = kt.solve(&rhs).ok_or(AlgebraError::NoFactorisation)?;
        rotation[rho] = [t[0].clone(), t[1].clone()];
    }
    let s = rep.sigma_flip();
    let mut components: [[[[Q; 2]; 2]; 2]; 2] = Default::default();
    for m in 0..2 {
        for n in 0..2 {
            for r in 0..2 {
                for c in 0..2 {
                    components[m][n][r][c] = &rotation[m][n] * q(s * rep.eps(r, c));
                }
            }
        }
    }
    Ok(ThetaTensor { components, rotation, factors_through_kappa: true, dirac_kernel, gamma_on_kernel })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegrabilityReport {
    pub factorisation: bool,
    pub skew: bool,
    pub commutator_condition: bool,
    /// Nonzero `θ(e_μ,e_ν)·s − [β_μ,β_ν]s` entries as `(μ, ν, residual)`.
    pub residuals: Vec<(usize, usize, [[String; 2]; 2])>,
}

impl IntegrabilityReport {
    pub fn passed(&self) -> bool {
        self.factorisation && self.skew && self.commutator_condition
    }
}

pub fn check_integrability(theta: &ThetaTensor, cocycle: &SpencerParams, flat: &StructureConstants) -> IntegrabilityReport {
    let rep = flat.rep();
    let mut residuals = Vec::new();
    for mu in 0..2 {
        for nu in 0..2 {
            let lhs = rep.spin_lift(&theta.components[mu][nu]);
            let rhs = cocycle.beta(&rep, mu).commutator(&cocycle.beta(&rep, nu));
            let d = &lhs - &rhs;
            if !d.is_zero() {
                residuals.push((mu, nu, d.0.clone().map(|r| r.map(|x| to_fraction_string(&x)))));
            }
        }
    }
    IntegrabilityReport {
        factorisation: theta.factors_through_kappa,
        skew: theta.is_skew(),
        commutator_condition: residuals.is_empty(),
        residuals,
    }
}

/// `[P,P] = θ`, `[P,s] = β(·,s)`, `[s,s] = κ + γ` on top of `flat`.
pub fn deformation_from_cocycle(
    flat: &StructureConstants,
    cocycle: &SpencerParams,
    theta: &ThetaTensor,
) -> StructureConstants {
    let rep = flat.rep();
    let mut sc = flat.clone();
    sc.deformation_parameter = cocycle.b_scalar(&rep);
    let n = sc.dim();
    let mut pp = vec![Q::zero(); n];
    pp[L_STAR] = theta.rotation[0][1].clone();
    sc.set_bracket(p_index(0), p_index(1), pp);
    let dim_s = flat.module().spinor_dim();
    for mu in 0..2 {
        let beta = cocycle.beta(&rep, mu);
        for a in 0..dim_s {
            let mut v = vec![Q::zero(); n];
            for c in 0..dim_s {
                v[q_index(c)] = beta.entry(c, a).clone();
            }
            sc.set_bracket(p_index(mu), q_index(a), v);
        }
    }
    let g = cocycle.gamma_form();
    for a in 0..dim_s {
        for c in a..dim_s {
            let mut v = flat.bracket(q_index(a), q_index(c)).to_vec();
            v[L_STAR] = g.entry(a, c).clone();
            sc.set_bracket(q_index(a), q_index(c), v);
        }
    }
    sc
}

/// `[β_μ, β_ν]` for the closed-form cocycle with parameter `b`.
pub fn expected_commutator(flat: &StructureConstants, b: &Q, mu: usize, nu: usize) -> Mat2 {
    let rep = flat.rep();
    let factor = if flat.sigma_b > 0 { q(rep.sigma_flip()) } else { q(1) };
    rep.gamma_star.scale(&(factor * b * b * q(2) * q(rep.eps(mu, nu))))
}

/// Value of `t_{01}` predicted in closed form: `ς4b²` for σ_B = +1, `4b²`
/// for σ_B = -1.
pub fn expected_rotation(flat: &StructureConstants, b: &Q) -> Q {
    let factor = if flat.sigma_b > 0 { q(flat.rep().sigma_flip()) } else { q(1) };
    factor * b * b * q(4)
}

/// Fit `t_{01}(b) = c₀ + c₁b + c₂b²` through three samples.
pub fn quadratic_fit(samples: &[(Q, Q); 3]) -> [Q; 3] {
    let rows = samples.iter().map(|(b, _)| vec![q(1), b.clone(), b * b]).collect();
    let m = QMatrix::from_rows(rows, 3);
    let y: Vec<Q> = samples.iter().map(|(_, t)| t.clone()).collect();
    let c = m.solve(&y).expect("distinct sample points");
    [c[0].clone(), c[1].clone(), c[2].clone()]
}
