//! Real Clifford algebras `Cl(1,1)` and `Cl(0,2)` as exact 2x2 matrices.
//!
//! Both algebras are realised on `R^2` with the `+` sign in the Clifford
//! relation, `Γ_μ Γ_ν + Γ_ν Γ_μ = 2 η_{μν} 1`. Frame indices are stored
//! 0-based; [`Signature::label`] adds the display offset (`0,1` in Lorentzian
//! signature and `1,2` in Riemannian signature).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SignatureKind {
    /// Positive-definite metric, `Cl(0,2)`.
    Riemannian02,
    /// Mostly-positive metric, `Cl(1,1)`.
    Lorentzian11,
}

impl SignatureKind {
    pub const ALL: [SignatureKind; 2] = [SignatureKind::Riemannian02, SignatureKind::Lorentzian11];

    pub fn name(self) -> &'static str {
        match self {
            SignatureKind::Riemannian02 => "(0,2)",
            SignatureKind::Lorentzian11 => "(1,1)",
        }
    }
}

impl fmt::Display for SignatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub kind: SignatureKind,
    /// Diagonal of η.
    pub eta: [i64; 2],
    /// ς = det η.
    pub sigma_flip: i64,
}

impl Signature {
    pub fn new(kind: SignatureKind) -> Self {
        let eta = match kind {
            SignatureKind::Riemannian02 => [1, 1],
            SignatureKind::Lorentzian11 => [-1, 1],
        };
        Self { kind, eta, sigma_flip: eta[0] * eta[1] }
    }

    pub fn eta_matrix(&self) -> Mat2 {
        Mat2::diag(q(self.eta[0]), q(self.eta[1]))
    }

    /// η_{μν}; the inverse metric has the same entries.
    pub fn eta(&self, mu: usize, nu: usize) -> i64 {
        if mu == nu {
            self.eta[mu]
        } else {
            0
        }
    }

    /// Display label of a frame index.
    pub fn label(&self, mu: usize) -> usize {
        match self.kind {
            SignatureKind::Lorentzian11 => mu,
            SignatureKind::Riemannian02 => mu + 1,
        }
    }

    pub fn is_lorentzian(&self) -> bool {
        self.kind == SignatureKind::Lorentzian11
    }
}

/// An exact 2x2 rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2(pub [[Q; 2]; 2]);

impl Mat2 {
    pub fn new(a: Q, b: Q, c: Q, d: Q) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn int(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(q(a), q(b), q(c), q(d))
    }

    pub fn zero() -> Self {
        Mat2::int(0, 0, 0, 0)
    }

    pub fn identity() -> Self {
        Mat2::int(1, 0, 0, 1)
    }

    pub fn diag(a: Q, d: Q) -> Self {
        Mat2::new(a, Q::zero(), Q::zero(), d)
    }

    pub fn sigma1() -> Self {
        Mat2::int(0, 1, 1, 0)
    }

    pub fn sigma3() -> Self {
        Mat2::int(1, 0, 0, -1)
    }

    /// Ω = iσ₂, the standard symplectic matrix.
    pub fn omega() -> Self {
        Mat2::int(0, 1, -1, 0)
    }

    pub fn entry(&self, r: usize, c: usize) -> &Q {
        &self.0[r][c]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0].clone(), m[1][0].clone(), m[0][1].clone(), m[1][1].clone())
    }

    pub fn trace(&self) -> Q {
        &self.0[0][0] + &self.0[1][1]
    }

    pub fn det(&self) -> Q {
        &self.0[0][0] * &self.0[1][1] - &self.0[0][1] * &self.0[1][0]
    }

    pub fn scale(&self, k: &Q) -> Self {
        Mat2(self.0.clone().map(|row| row.map(|x| x * k)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(Zero::is_zero)
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        self * other - other * self
    }

    pub fn anticommutator(&self, other: &Mat2) -> Mat2 {
        self * other + other * self
    }

    pub fn apply(&self, v: &[Q; 2]) -> [Q; 2] {
        let m = &self.0;
        [&m[0][0] * &v[0] + &m[0][1] * &v[1], &m[1][0] * &v[0] + &m[1][1] * &v[1]]
    }

    /// `uᵀ M v`.
    pub fn pair(&self, u: &[Q; 2], v: &[Q; 2]) -> Q {
        let mv = self.apply(v);
        &u[0] * &mv[0] + &u[1] * &mv[1]
    }

    /// Outer product `u vᵀ`.
    pub fn outer(u: &[Q; 2], v: &[Q; 2]) -> Mat2 {
        Mat2::new(&u[0] * &v[0], &u[0] * &v[1], &u[1] * &v[0], &u[1] * &v[1])
    }

    /// `(M + Mᵀ)/2`.
    pub fn symmetrised(&self) -> Mat2 {
        (self + &self.transpose()).scale(&crate::rational::frac(1, 2))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

impl Add for &Mat2 {
    type Output = Mat2;
    fn add(self, o: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2::new(&a[0][0] + &b[0][0], &a[0][1] + &b[0][1], &a[1][0] + &b[1][0], &a[1][1] + &b[1][1])
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        &self + &o
    }
}

impl Sub for &Mat2 {
    type Output = Mat2;
    fn sub(self, o: &Mat2) -> Mat2 {
        self + &(-o)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        &self - &o
    }
}

impl Neg for &Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2(self.0.clone().map(|row| row.map(|x| -x)))
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        -&self
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, o: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        &self * &o
    }
}

/// A concrete matrix representation of `Cl(V)` on `S = R^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaRep {
    pub signature: Signature,
    /// Γ_μ with lowered index.
    pub gamma: [Mat2; 2],
    pub gamma_star: Mat2,
    pub levi_civita_lower: [[i64; 2]; 2],
    pub levi_civita_upper: [[i64; 2]; 2],
}

/// The fixed representation for a signature: `Γ₀ = Ω, Γ₁ = σ₁` in
/// Lorentzian signature and `Γ₁ = σ₃, Γ₂ = σ₁` in Riemannian signature.
pub fn build_gamma_rep(kind: SignatureKind) -> GammaRep {
    let signature = Signature::new(kind);
    let gamma = match kind {
        SignatureKind::Lorentzian11 => [Mat2::omega(), Mat2::sigma1()],
        SignatureKind::Riemannian02 => [Mat2::sigma3(), Mat2::sigma1()],
    };
    // Γ_* is the image of the volume element, Γ_0Γ_1 (resp. Γ_1Γ_2).
    let gamma_star = &gamma[0] * &gamma[1];
    let lower = [[0, 1], [-1, 0]];
    let mut upper = [[0; 2]; 2];
    for (mu, row) in upper.iter_mut().enumerate() {
        for (nu, e) in row.iter_mut().enumerate() {
            *e = signature.eta(mu, mu) * signature.eta(nu, nu) * lower[mu][nu];
        }
    }
    GammaRep { signature, gamma, gamma_star, levi_civita_lower: lower, levi_civita_upper: upper }
}

impl GammaRep {
    pub fn kind(&self) -> SignatureKind {
        self.signature.kind
    }

    /// ς.
    pub fn sigma_flip(&self) -> i64 {
        self.signature.sigma_flip
    }

    pub fn eta(&self, mu: usize, nu: usize) -> i64 {
        self.signature.eta(mu, nu)
    }

    pub fn eps(&self, mu: usize, nu: usize) -> i64 {
        self.levi_civita_lower[mu][nu]
    }

    pub fn eps_upper(&self, mu: usize, nu: usize) -> i64 {
        self.levi_civita_upper[mu][nu]
    }

    /// ε_μ^ν, second index raised.
    pub fn eps_mixed(&self, mu: usize, nu: usize) -> i64 {
        self.eps(mu, nu) * self.eta(nu, nu)
    }

    /// Γ^μ = η^{μν} Γ_ν.
    pub fn gamma_upper(&self, mu: usize) -> Mat2 {
        self.gamma[mu].scale(&q(self.eta(mu, mu)))
    }

    /// Γ_{μν} = ε_{μν} Γ_*.
    pub fn gamma_pair(&self, mu: usize, nu: usize) -> Mat2 {
        self.gamma_star.scale(&q(self.eps(mu, nu)))
    }

    /// Γ^{μν} = ε^{μν} Γ_*.
    pub fn gamma_pair_upper(&self, mu: usize, nu: usize) -> Mat2 {
        self.gamma_star.scale(&q(self.eps_upper(mu, nu)))
    }

    /// Γ^* = Γ^{01} (resp. Γ^{12}) = ς Γ_*.
    pub fn gamma_star_upper(&self) -> Mat2 {
        let g0 = self.gamma_upper(0);
        let g1 = self.gamma_upper(1);
        &g0 * &g1
    }

    /// The matrix of a tangent vector with frame components `v^μ`.
    pub fn clifford_vector(&self, v: &[Q; 2]) -> Mat2 {
        &self.gamma[0].scale(&v[0]) + &self.gamma[1].scale(&v[1])
    }

    /// `¼ A_{ρσ} Γ^ρ Γ^σ`: the spin lift of an endomorphism of `V` with
    /// lowered components `A_{ρσ}`, where `(Av)_ρ = A_{ρσ} v^σ`.
    pub fn spin_lift(&self, a: &[[Q; 2]; 2]) -> Mat2 {
        let mut total = Mat2::zero();
        let quarter = crate::rational::frac(1, 4);
        for (rho, row) in a.iter().enumerate() {
            for (sig, coeff) in row.iter().enumerate() {
                let term = &self.gamma_upper(rho) * &self.gamma_upper(sig);
                total = &total + &term.scale(&(coeff * &quarter));
            }
        }
        total
    }
}

/// Element of `Cl(V)` in the basis `{1, Γ_μ, Γ_*}` (index lowered).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffordElement {
    pub scalar: Q,
    pub vector: [Q; 2],
    pub volume: Q,
}

impl CliffordElement {
    pub fn new(scalar: Q, vector: [Q; 2], volume: Q) -> Self {
        Self { scalar, vector, volume }
    }

    pub fn zero() -> Self {
        Self::new(Q::zero(), [Q::zero(), Q::zero()], Q::zero())
    }

    pub fn one() -> Self {
        Self::new(Q::one(), [Q::zero(), Q::zero()], Q::zero())
    }

    pub fn gamma(mu: usize) -> Self {
        let mut v = [Q::zero(), Q::zero()];
        v[mu] = Q::one();
        Self::new(Q::zero(), v, Q::zero())
    }

    pub fn gamma_star() -> Self {
        Self::new(Q::zero(), [Q::zero(), Q::zero()], Q::one())
    }

    pub fn coefficients(&self) -> [Q; 4] {
        [self.scalar.clone(), self.vector[0].clone(), self.vector[1].clone(), self.volume.clone()]
    }

    pub fn from_coefficients(c: [Q; 4]) -> Self {
        let [s, v0, v1, w] = c;
        Self::new(s, [v0, v1], w)
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::from_coefficients(self.coefficients().map(|x| x * k))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = (self.coefficients(), other.coefficients());
        Self::new(&a[0] + &b[0], [&a[1] + &b[1], &a[2] + &b[2]], &a[3] + &b[3])
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients().iter().all(Zero::is_zero)
    }

    pub fn to_matrix(&self, rep: &GammaRep) -> Mat2 {
        let mut m = Mat2::identity().scale(&self.scalar);
        for mu in 0..2 {
            m = &m + &rep.gamma[mu].scale(&self.vector[mu]);
        }
        &m + &rep.gamma_star.scale(&self.volume)
    }

    /// Inverse of [`CliffordElement::to_matrix`], by traces: `tr 1 = 2`,
    /// `tr(Γ^μ Γ_ν) = 2δ^μ_ν`, `tr(Γ_* Γ_*) = -2ς`, all other traces vanish.
    pub fn from_matrix(rep: &GammaRep, m: &Mat2) -> Self {
        let half = crate::rational::frac(1, 2);
        let scalar = m.trace() * &half;
        let vector = [0, 1].map(|mu| (&rep.gamma_upper(mu) * m).trace() * &half);
        let volume = (&rep.gamma_star * m).trace() * crate::rational::frac(-1, 2 * rep.sigma_flip());
        Self::new(scalar, vector, volume)
    }
}

/// Product in `Cl(V)` computed from the multiplication table
/// `Γ_μΓ_ν = ε_{μν}Γ_* + η_{μν}1`, `Γ_μΓ_* = -Γ_*Γ_μ = ς ε_{μν}Γ^ν`,
/// `Γ_*² = -ς 1`, without going through matrices.
pub fn clifford_product(rep: &GammaRep, x: &CliffordElement, y: &CliffordElement) -> CliffordElement {
    let s = q(rep.sigma_flip());
    let mut out = CliffordElement::zero();
    // scalar part of x
    out = out.add(&y.scale(&x.scalar));
    // scalar part of y times the non-scalar part of x
    out = out.add(&CliffordElement::new(Q::zero(), x.vector.clone(), x.volume.clone()).scale(&y.scalar));
    for mu in 0..2 {
        for nu in 0..2 {
            let c = &x.vector[mu] * &y.vector[nu];
            if c.is_zero() {
                continue;
            }
            out.scalar += &c * q(rep.eta(mu, nu));
            out.volume += &c * q(rep.eps(mu, nu));
        }
    }
    for mu in 0..2 {
        for rho in 0..2 {
            // Γ_μΓ_* = ς ε_μ^ρ Γ_ρ and Γ_*Γ_μ is its negative
            let e = &s * q(rep.eps_mixed(mu, rho));
            out.vector[rho] += &x.vector[mu] * &y.volume * &e;
            out.vector[rho] -= &x.volume * &y.vector[mu] * &e;
        }
    }
    out.scalar -= &x.volume * &y.volume * &s;
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub signature: SignatureKind,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn record(&mut self, name: &str, passed: bool) {
        self.checks.push(IdentityCheck { name: name.to_string(), passed });
    }
}

/// Check every algebraic identity among the Γ-matrices and ε-symbols by
/// explicit index sums.
pub fn verify_gamma_identities(rep: &GammaRep) -> IdentityReport {
    let mut report = IdentityReport { signature: rep.kind(), checks: Vec::new() };
    let s = rep.sigma_flip();
    let idx = [0usize, 1];
    let one = Mat2::identity();
    let gs = &rep.gamma_star;

    let clifford = idx.iter().all(|&m| {
        idx.iter().all(|&n| rep.gamma[m].anticommutator(&rep.gamma[n]) == one.scale(&q(2 * rep.eta(m, n))))
    });
    report.record("{Γ_μ, Γ_ν} = 2η_{μν}1", clifford);

    let products = idx.iter().all(|&m| {
        idx.iter().all(|&n| {
            &rep.gamma[m] * &rep.gamma[n]
                == &rep.gamma_pair(m, n) + &one.scale(&q(rep.eta(m, n)))
        })
    });
    report.record("Γ_μΓ_ν = ε_{μν}Γ_* + η_{μν}1", products);

    let star_square = gs * gs == one.scale(&q(-s));
    report.record("(Γ_*)² = -ς1", star_square);

    let anti = idx.iter().all(|&m| {
        let left = &rep.gamma[m] * gs;
        let right = -(gs * &rep.gamma[m]);
        let mut rhs = Mat2::zero();
        for &n in &idx {
            rhs = &rhs + &rep.gamma_upper(n).scale(&q(s * rep.eps(m, n)));
        }
        left == right && left == rhs
    });
    report.record("Γ_μΓ_* = -Γ_*Γ_μ = ςε_{μν}Γ^ν", anti);

    report.record("Γ^* = ςΓ_*", rep.gamma_star_upper() == gs.scale(&q(s)));

    let pair_upper = idx.iter().all(|&m| {
        idx.iter().all(|&n| {
            // Γ^{μν} = Γ^[μ Γ^ν]
            let raised = (&rep.gamma_upper(m) * &rep.gamma_upper(n)
                - &rep.gamma_upper(n) * &rep.gamma_upper(m))
                .scale(&crate::rational::frac(1, 2));
            raised == rep.gamma_pair_upper(m, n)
                && raised == rep.gamma_star_upper().scale(&q(s * rep.eps_upper(m, n)))
        })
    });
    report.record("Γ^{μν} = ε^{μν}Γ_* = ςε^{μν}Γ^*", pair_upper);

    let mut eps_eps = true;
    for &m in &idx {
        for &n in &idx {
            for &r in &idx {
                for &t in &idx {
                    let lhs = rep.eps(m, n) * rep.eps(r, t);
                    let rhs = s * (rep.eta(m, r) * rep.eta(n, t) - rep.eta(m, t) * rep.eta(n, r));
                    eps_eps &= lhs == rhs;
                }
            }
        }
    }
    report.record("ε_{μν}ε_{ρσ} = ς(η_{μρ}η_{νσ} - η_{μσ}η_{νρ})", eps_eps);

    let contraction = idx.iter().all(|&m| {
        idx.iter().all(|&r| {
            let sum: i64 = idx.iter().map(|&n| rep.eps(m, n) * rep.eps_mixed(r, n)).sum();
            sum == s * rep.eta(m, r)
        })
    });
    report.record("ε_{μν}ε_ρ^ν = ςη_{μρ}", contraction);

    let full: i64 = idx.iter().flat_map(|&m| idx.iter().map(move |&n| (m, n)))
        .map(|(m, n)| rep.eps(m, n) * rep.eps_upper(m, n))
        .sum();
    report.record("ε_{μν}ε^{μν} = 2ς", full == 2 * s);

    let sum_over = |f: &dyn Fn(usize) -> Mat2| idx.iter().fold(Mat2::zero(), |acc, &m| &acc + &f(m));
    report.record(
        "Γ^μΓ_μ = 2·1",
        sum_over(&|m| &rep.gamma_upper(m) * &rep.gamma[m]) == one.scale(&q(2)),
    );
    let sandwich_vec = idx.iter().all(|&n| {
        sum_over(&|m| &(&rep.gamma_upper(m) * &rep.gamma[n]) * &rep.gamma[m]).is_zero()
    });
    report.record("Γ^μΓ_νΓ_μ = 0", sandwich_vec);
    report.record(
        "Γ^μΓ_*Γ_μ = -2Γ_*",
        sum_over(&|m| &(&rep.gamma_upper(m) * gs) * &rep.gamma[m]) == gs.scale(&q(-2)),
    );

    let traceless = rep.gamma.iter().all(|g| g.trace().is_zero()) && gs.trace().is_zero();
    report.record("tr Γ_μ = tr Γ_* = 0", traceless);

    let lift = {
        // ¼A_{ρσ}Γ^ρΓ^σ intertwines: [ρ(A), v·] = (Av)·
        let a = [[Q::zero(), q(1)], [q(-1), Q::zero()]];
        let lifted = rep.spin_lift(&a);
        idx.iter().all(|&l| {
            let lhs = lifted.commutator(&rep.gamma[l]);
            // (A e_λ)_ρ = A_{ρλ}, raise ρ to get frame components
            let v = [0, 1].map(|r| &a[r][l] * q(rep.eta(r, r)));
            lhs == rep.clifford_vector(&v)
        })
    };
    report.record("spin lift ¼A_{ρσ}Γ^ρΓ^σ intertwines Clifford multiplication", lift);
    report
}
