//! Admissible bilinears on the pinor module, Dirac currents, the Fierz
//! identity and the causal character of Dirac currents.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::clifford::{CliffordElement, GammaRep, Mat2};
use crate::error::AlgebraError;
use crate::linalg::QMatrix;
use crate::rational::{frac, q, Q};

/// A real bilinear form `B(ε, ε') = εᵀ B ε'` on `S = R^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BilinearForm {
    pub matrix: Mat2,
}

impl BilinearForm {
    pub fn new(matrix: Mat2) -> Self {
        Self { matrix }
    }

    pub fn pair(&self, e: &[Q; 2], f: &[Q; 2]) -> Q {
        self.matrix.pair(e, f)
    }

    /// The conjugate covector `ε̄_b = ε^a B_{ab}`.
    pub fn conjugate(&self, e: &[Q; 2]) -> [Q; 2] {
        self.matrix.transpose().apply(e)
    }

    /// `ε̄ Γ ε'`.
    pub fn sandwich(&self, e: &[Q; 2], gamma: &Mat2, f: &[Q; 2]) -> Q {
        self.pair(e, &gamma.apply(f))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    /// σ_B
    pub symmetry: Option<i8>,
    /// τ_B
    pub type_sign: Option<i8>,
    /// ι_B; only defined in Lorentzian signature.
    pub isotropy: Option<i8>,
    pub admissible: bool,
    /// σ_κ = σ_B τ_B
    pub current_symmetry: Option<i8>,
    /// ι_κ: +1 when `S±` are mutually κ-orthogonal, -1 when each is κ-isotropic.
    pub current_isotropy: Option<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spinor {
    pub components: [Q; 2],
}

impl Spinor {
    pub fn new(a: Q, b: Q) -> Self {
        Self { components: [a, b] }
    }

    pub fn int(a: i64, b: i64) -> Self {
        Self::new(q(a), q(b))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Zero::is_zero)
    }

    /// Eigenvalue under `Γ_{01} = σ₃` when the spinor is chiral; `None` in
    /// Riemannian signature, for the zero spinor, and for mixed spinors.
    pub fn chirality(&self, rep: &GammaRep) -> Option<i8> {
        if !rep.signature.is_lorentzian() {
            return None;
        }
        let [a, b] = &self.components;
        match (a.is_zero(), b.is_zero()) {
            (false, true) => Some(1),
            (true, false) => Some(-1),
            _ => None,
        }
    }
}

/// `κ^μ_{ab} = B(e_a, Γ^μ e_b)`, one matrix per upper index μ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiracCurrent {
    pub components: [Mat2; 2],
}

impl DiracCurrent {
    /// `κ(ε, ε')^μ`.
    pub fn eval(&self, e: &[Q; 2], f: &[Q; 2]) -> [Q; 2] {
        [self.components[0].pair(e, f), self.components[1].pair(e, f)]
    }

    /// `κ_ε = κ(ε, ε)`.
    pub fn of(&self, e: &[Q; 2]) -> [Q; 2] {
        self.eval(e, e)
    }

    pub fn is_symmetric(&self) -> bool {
        self.components.iter().all(|m| m.transpose() == *m)
    }
}

fn sign_holds(lhs: &[Q], rhs: &[Q]) -> Option<i8> {
    let plus = lhs.iter().zip(rhs).all(|(a, b)| a == b);
    let minus = lhs.iter().zip(rhs).all(|(a, b)| *a == -b);
    match (plus, minus) {
        (true, false) => Some(1),
        (false, true) => Some(-1),
        _ => None,
    }
}

fn basis(a: usize) -> [Q; 2] {
    let mut e = [Q::zero(), Q::zero()];
    e[a] = q(1);
    e
}

/// Decide σ_B, τ_B, ι_B (and the induced κ signs) by evaluating the defining
/// conditions on all basis spinors and basis vectors.
pub fn classify_bilinear(rep: &GammaRep, b: &BilinearForm) -> Result<AdmissibilityReport, AlgebraError> {
    if b.matrix.is_zero() {
        return Err(AlgebraError::ZeroBilinear);
    }
    let mut lhs_sym = Vec::new();
    let mut rhs_sym = Vec::new();
    let mut lhs_type = Vec::new();
    let mut rhs_type = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            let (ex, ey) = (basis(x), basis(y));
            lhs_sym.push(b.pair(&ex, &ey));
            rhs_sym.push(b.pair(&ey, &ex));
            for g in &rep.gamma {
                lhs_type.push(b.pair(&ex, &g.apply(&ey)));
                rhs_type.push(b.pair(&g.apply(&ex), &ey));
            }
        }
    }
    let symmetry = sign_holds(&lhs_sym, &rhs_sym);
    let type_sign = sign_holds(&lhs_type, &rhs_type);

    let current = raw_current(rep, b);
    let (isotropy, current_isotropy) = if rep.signature.is_lorentzian() {
        let (plus, minus) = (basis(0), basis(1));
        let isotropy = chiral_dichotomy(
            [b.pair(&plus, &minus), b.pair(&minus, &plus)].iter().all(Zero::is_zero),
            [b.pair(&plus, &plus), b.pair(&minus, &minus)].iter().all(Zero::is_zero),
        );
        let k = |e: &[Q; 2], f: &[Q; 2]| current.eval(e, f).iter().all(Zero::is_zero);
        let current_isotropy = chiral_dichotomy(
            k(&plus, &minus) && k(&minus, &plus),
            k(&plus, &plus) && k(&minus, &minus),
        );
        (isotropy, current_isotropy)
    } else {
        (None, None)
    };

    let admissible = symmetry.is_some()
        && type_sign.is_some()
        && (!rep.signature.is_lorentzian() || isotropy.is_some());
    let current_symmetry = match (symmetry, type_sign) {
        (Some(s), Some(t)) => Some(s * t),
        _ => None,
    };
    Ok(AdmissibilityReport { symmetry, type_sign, isotropy, admissible, current_symmetry, current_isotropy })
}

fn chiral_dichotomy(orthogonal: bool, isotropic: bool) -> Option<i8> {
    match (orthogonal, isotropic) {
        (true, false) => Some(1),
        (false, true) => Some(-1),
        _ => None,
    }
}

/// The two admissible bilinears of each signature, symmetric one first:
/// `{σ₁, Ω}` in `(1,1)` and `{1, Ω}` in `(0,2)`.
pub fn enumerate_admissible(rep: &GammaRep) -> Vec<BilinearForm> {
    let symmetric = if rep.signature.is_lorentzian() { Mat2::sigma1() } else { Mat2::identity() };
    vec![BilinearForm::new(symmetric), BilinearForm::new(Mat2::omega())]
}

/// The admissible bilinear with symmetry `sigma_b`.
pub fn bilinear_with_symmetry(rep: &GammaRep, sigma_b: i8) -> BilinearForm {
    let forms = enumerate_admissible(rep);
    if sigma_b > 0 {
        forms[0].clone()
    } else {
        forms[1].clone()
    }
}

/// For a fixed pair of signs (σ, τ) the conditions `Bᵀ = σB` and
/// `B Γ_μ = τ Γ_μᵀ B` are linear in the four entries of `B`. Returns the
/// solution space for each sign pair as `((σ, τ), basis)`.
pub fn admissible_solution_spaces(rep: &GammaRep) -> Vec<((i8, i8), Vec<Mat2>)> {
    let mut out = Vec::new();
    for sigma in [1i8, -1] {
        for tau in [1i8, -1] {
            let mut rows = Vec::new();
            for unknown in 0..4 {
                let mut unit = [[Q::zero(), Q::zero()], [Q::zero(), Q::zero()]];
                unit[unknown / 2][unknown % 2] = q(1);
                let m = Mat2(unit);
                let mut column = Vec::new();
                let sym = &m.transpose() - &m.scale(&q(sigma as i64));
                column.extend(sym.0.iter().flatten().cloned());
                for g in &rep.gamma {
                    let t = &(&m * g) - &(&g.transpose() * &m).scale(&q(tau as i64));
                    column.extend(t.0.iter().flatten().cloned());
                }
                rows.push(column);
            }
            // `rows` holds columns of the constraint matrix; transpose it
            let n_eq = rows[0].len();
            let matrix = QMatrix::from_rows(
                (0..n_eq).map(|e| rows.iter().map(|c| c[e].clone()).collect()).collect(),
                4,
            );
            let kernel = matrix
                .nullspace()
                .into_iter()
                .map(|v| Mat2::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()))
                .collect();
            out.push(((sigma, tau), kernel));
        }
    }
    out
}

fn raw_current(rep: &GammaRep, b: &BilinearForm) -> DiracCurrent {
    DiracCurrent { components: [0, 1].map(|mu| &b.matrix * &rep.gamma_upper(mu)) }
}

/// `κ(ε, ε')^μ = B(ε, Γ^μ ε')`.
pub fn dirac_current(rep: &GammaRep, b: &BilinearForm) -> Result<DiracCurrent, AlgebraError> {
    if !classify_bilinear(rep, b)?.admissible {
        return Err(AlgebraError::NotAdmissible);
    }
    Ok(raw_current(rep, b))
}

/// Terms of the Fierz expansion of `ε ε̄'` together with the outer product
/// it must reproduce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FierzDecomposition {
    /// Coefficients over `{1, Γ_μ, Γ_*}`.
    pub element: CliffordElement,
    pub outer_product: Mat2,
    pub reconstructs: bool,
}

/// `ε ε̄' = ½((ε̄'ε)1 + (ε̄'Γ_με)Γ^μ - ς(ε̄'Γ_*ε)Γ_*)`.
pub fn fierz_decompose(
    rep: &GammaRep,
    b: &BilinearForm,
    e1: &Spinor,
    e2: &Spinor,
) -> Result<FierzDecomposition, AlgebraError> {
    if !classify_bilinear(rep, b)?.admissible {
        return Err(AlgebraError::NotAdmissible);
    }
    let (e, f) = (&e1.components, &e2.components);
    let half = frac(1, 2);
    let scalar = b.pair(f, e) * &half;
    // (ε̄'Γ_με)Γ^μ = (ε̄'Γ^με)Γ_μ
    let vector = [0, 1].map(|mu| b.sandwich(f, &rep.gamma_upper(mu), e) * &half);
    let volume = b.sandwich(f, &rep.gamma_star, e) * frac(-rep.sigma_flip(), 2);
    let element = CliffordElement::new(scalar, vector, volume);
    let outer_product = Mat2::outer(e, &b.conjugate(f));
    let reconstructs = element.to_matrix(rep) == outer_product;
    Ok(FierzDecomposition { element, outer_product, reconstructs })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CausalCharacter {
    Zero,
    Null,
    Timelike,
    Spacelike,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalReport {
    pub character: CausalCharacter,
    /// `η(κ_ε, κ_ε)`
    pub norm_direct: Q,
    /// `(ε̄ε)² + ς(ε̄Γ_*ε)²`
    pub norm_fierz: Q,
    /// What the causality corollary predicts from σ_B and chirality alone.
    pub predicted: CausalCharacter,
}

impl CausalReport {
    pub fn consistent(&self) -> bool {
        self.norm_direct == self.norm_fierz && self.character == self.predicted
    }
}

pub fn causal_character(rep: &GammaRep, b: &BilinearForm, e: &Spinor) -> Result<CausalReport, AlgebraError> {
    let report = classify_bilinear(rep, b)?;
    if !report.admissible {
        return Err(AlgebraError::NotAdmissible);
    }
    let kappa = raw_current(rep, b).of(&e.components);
    let norm_direct: Q = (0..2).map(|mu| &kappa[mu] * &kappa[mu] * q(rep.eta(mu, mu))).sum();
    let bar_e = b.pair(&e.components, &e.components);
    let bar_star = b.sandwich(&e.components, &rep.gamma_star, &e.components);
    let norm_fierz = &bar_e * &bar_e + q(rep.sigma_flip()) * &bar_star * &bar_star;

    let character = if kappa.iter().all(Zero::is_zero) {
        CausalCharacter::Zero
    } else if norm_direct.is_zero() {
        CausalCharacter::Null
    } else if norm_direct.is_positive() {
        CausalCharacter::Spacelike
    } else {
        CausalCharacter::Timelike
    };
    let predicted = if e.is_zero() {
        CausalCharacter::Zero
    } else if !rep.signature.is_lorentzian() {
        CausalCharacter::Spacelike
    } else if e.chirality(rep).is_some() {
        CausalCharacter::Null
    } else if report.symmetry == Some(1) {
        CausalCharacter::Spacelike
    } else {
        CausalCharacter::Timelike
    };
    Ok(CausalReport { character, norm_direct, norm_fierz, predicted })
}
