//! Graded Lie superalgebras by structure constants: the flat models
//! `V ⊕ S ⊕ so(V)`, their filtered deformations, and a brute-force graded
//! Jacobi check.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bilinears::{classify_bilinear, dirac_current, BilinearForm};
use crate::clifford::{build_gamma_rep, GammaRep, Mat2, SignatureKind};
use crate::error::AlgebraError;
use crate::rational::{parse_rational, q, to_fraction_string, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModuleChoice {
    /// The full pinor module `S = R^2`.
    Full,
    /// `S₊ = R e₁`, Lorentzian signature only.
    ChiralPlus,
}

impl ModuleChoice {
    pub fn spinor_dim(self) -> usize {
        match self {
            ModuleChoice::Full => 2,
            ModuleChoice::ChiralPlus => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub label: String,
    pub degree: i8,
    pub parity: Parity,
}

/// `P_μ` (degree -2), `L_*` (degree 0), `Q_a` (degree -1), in that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    pub module: ModuleChoice,
    pub elements: Vec<BasisElement>,
}

pub const L_STAR: usize = 2;

/// Index of `P_μ`.
pub fn p_index(mu: usize) -> usize {
    mu
}

/// Index of `Q_a` (0-based `a`).
pub fn q_index(a: usize) -> usize {
    3 + a
}

impl GradedBasis {
    pub fn new(rep: &GammaRep, module: ModuleChoice) -> Self {
        let mut elements = Vec::new();
        for mu in 0..2 {
            elements.push(BasisElement {
                label: format!("P_{}", rep.signature.label(mu)),
                degree: -2,
                parity: Parity::Even,
            });
        }
        elements.push(BasisElement { label: "L_*".into(), degree: 0, parity: Parity::Even });
        for a in 0..module.spinor_dim() {
            elements.push(BasisElement { label: format!("Q_{}", a + 1), degree: -1, parity: Parity::Odd });
        }
        Self { module, elements }
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn odd(&self, i: usize) -> bool {
        self.elements[i].parity == Parity::Odd
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.label == label)
    }

    pub fn spinor_indices(&self) -> std::ops::Range<usize> {
        3..self.dim()
    }
}

/// Bracket tensor `[x_i, x_j] = c^k_{ij} x_k` with graded-antisymmetry
/// enforced on every write.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    pub signature: SignatureKind,
    pub bilinear: BilinearForm,
    /// σ_B of the bilinear the model was built from.
    pub sigma_b: i8,
    pub basis: GradedBasis,
    pub deformation_parameter: Q,
    brackets: Vec<Vec<Vec<Q>>>,
}

impl StructureConstants {
    fn empty(signature: SignatureKind, bilinear: BilinearForm, sigma_b: i8, basis: GradedBasis) -> Self {
        let n = basis.dim();
        Self {
            signature,
            bilinear,
            sigma_b,
            basis,
            deformation_parameter: Q::zero(),
            brackets: vec![vec![vec![Q::zero(); n]; n]; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn rep(&self) -> GammaRep {
        build_gamma_rep(self.signature)
    }

    pub fn module(&self) -> ModuleChoice {
        self.basis.module
    }

    pub fn bracket(&self, i: usize, j: usize) -> &[Q] {
        &self.brackets[i][j]
    }

    fn swap_sign(&self, i: usize, j: usize) -> Q {
        if self.basis.odd(i) && self.basis.odd(j) {
            q(1)
        } else {
            q(-1)
        }
    }

    /// Set `[x_i, x_j]`, and `[x_j, x_i]` by graded antisymmetry.
    pub fn set_bracket(&mut self, i: usize, j: usize, value: Vec<Q>) {
        assert_eq!(value.len(), self.dim());
        let sign = self.swap_sign(i, j);
        self.brackets[j][i] = value.iter().map(|x| x * &sign).collect();
        self.brackets[i][j] = value;
    }

    /// Overwrite a single ordered bracket without touching its mirror.
    /// Only meant for building broken fixtures.
    pub fn set_bracket_unchecked(&mut self, i: usize, j: usize, value: Vec<Q>) {
        self.brackets[i][j] = value;
    }

    /// Bilinear extension of the bracket to arbitrary coefficient vectors.
    pub fn bracket_vectors(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let n = self.dim();
        let mut out = vec![Q::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, v) in self.brackets[i][j].iter().enumerate() {
                    if !v.is_zero() {
                        out[k] += &c * v;
                    }
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[i] = q(1);
        v
    }

    /// Ordered pairs violating `[x,y] = -(-1)^{|x||y|}[y,x]`.
    pub fn antisymmetry_violations(&self) -> Vec<(usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let sign = self.swap_sign(i, j);
                let ok = self.brackets[i][j].iter().zip(&self.brackets[j][i]).all(|(a, b)| *a == b * &sign);
                if !ok {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Drop every bracket component that raises the ℤ-degree.
    pub fn associated_graded(&self) -> StructureConstants {
        let mut out = self.clone();
        out.deformation_parameter = Q::zero();
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let target = self.basis.elements[i].degree + self.basis.elements[j].degree;
                for k in 0..n {
                    if self.basis.elements[k].degree != target {
                        out.brackets[i][j][k] = Q::zero();
                    }
                }
            }
        }
        out
    }

    /// The `[P_μ, P_ν]` block.
    pub fn translation_block(&self) -> Vec<Vec<Q>> {
        (0..2).flat_map(|m| (0..2).map(move |n| (m, n))).map(|(m, n)| self.brackets[m][n].clone()).collect()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis.elements[i].label
    }
}

/// The flat model: `[L_*, P_μ] = -ς ε_{μν} P^ν`, `[L_*, s] = ½ Γ_* s`,
/// `[s, s'] = κ(s, s')`, all other brackets zero.
pub fn build_flat_model(
    rep: &GammaRep,
    b: &BilinearForm,
    module: ModuleChoice,
) -> Result<StructureConstants, AlgebraError> {
    let report = classify_bilinear(rep, b)?;
    if !report.admissible {
        return Err(AlgebraError::NotAdmissible);
    }
    if module == ModuleChoice::ChiralPlus && !rep.signature.is_lorentzian() {
        return Err(AlgebraError::ChiralInRiemannian);
    }
    let kappa = dirac_current(rep, b)?;
    let basis = GradedBasis::new(rep, module);
    let sigma_b = report.symmetry.expect("admissible forms have a symmetry");
    let mut sc = StructureConstants::empty(rep.kind(), b.clone(), sigma_b, basis);
    let n = sc.dim();
    let s = rep.sigma_flip();

    for mu in 0..2 {
        let mut v = vec![Q::zero(); n];
        for rho in 0..2 {
            // -ς ε_{μν} η^{νρ} P_ρ
            v[p_index(rho)] = q(-s * rep.eps(mu, rho) * rep.eta(rho, rho));
        }
        sc.set_bracket(L_STAR, p_index(mu), v);
    }
    let dim_s = module.spinor_dim();
    for a in 0..dim_s {
        let mut v = vec![Q::zero(); n];
        for c in 0..dim_s {
            v[q_index(c)] = rep.gamma_star.entry(c, a) * crate::rational::frac(1, 2);
        }
        sc.set_bracket(L_STAR, q_index(a), v);
    }
    for a in 0..dim_s {
        for c in a..dim_s {
            let mut v = vec![Q::zero(); n];
            for mu in 0..2 {
                v[p_index(mu)] = kappa.components[mu].entry(a, c).clone();
            }
            sc.set_bracket(q_index(a), q_index(c), v);
        }
    }
    Ok(sc)
}

/// The one-parameter filtered deformation. For σ_B = +1:
/// `[P_μ,P_ν] = ς4b²ε_{μν}L_*`, `[P_μ,s] = bε_{μν}Γ^νs`,
/// `[s,s] = κ_s + ς2b(s̄s)L_*`; for σ_B = -1:
/// `[P_μ,P_ν] = 4b²ε_{μν}L_*`, `[P_μ,s] = bΓ_μs`,
/// `[s,s] = κ_s - ς2b(s̄Γ_*s)L_*`.
pub fn build_deformation(flat: &StructureConstants, b: &Q) -> Result<StructureConstants, AlgebraError> {
    if b.is_zero() {
        return Ok(flat.clone());
    }
    if flat.module() == ModuleChoice::ChiralPlus {
        return Err(AlgebraError::ChiralDeformation(to_fraction_string(b)));
    }
    let rep = flat.rep();
    let s = q(rep.sigma_flip());
    let mut sc = flat.associated_graded();
    sc.deformation_parameter = b.clone();
    let n = sc.dim();
    let b2 = b * b;
    let plus = flat.sigma_b > 0;

    let mut pp = vec![Q::zero(); n];
    pp[L_STAR] = if plus { &s * &b2 * q(4) } else { &b2 * q(4) };
    // pp is [P_0, P_1]; ε_{01} = 1 in both signatures
    sc.set_bracket(p_index(0), p_index(1), pp);

    for mu in 0..2 {
        let beta_mu = if plus {
            let mut m = Mat2::zero();
            for nu in 0..2 {
                m = &m + &rep.gamma_upper(nu).scale(&q(rep.eps(mu, nu)));
            }
            m.scale(b)
        } else {
            rep.gamma[mu].scale(b)
        };
        for a in 0..2 {
            let mut v = vec![Q::zero(); n];
            for c in 0..2 {
                v[q_index(c)] = beta_mu.entry(c, a).clone();
            }
            sc.set_bracket(p_index(mu), q_index(a), v);
        }
    }

    let gamma_form = if plus {
        flat.bilinear.matrix.symmetrised().scale(&(&s * b * q(2)))
    } else {
        (&flat.bilinear.matrix * &rep.gamma_star).symmetrised().scale(&(-&s * b * q(2)))
    };
    for a in 0..2 {
        for c in a..2 {
            let mut v = flat.bracket(q_index(a), q_index(c)).to_vec();
            v[L_STAR] = gamma_form.entry(a, c).clone();
            sc.set_bracket(q_index(a), q_index(c), v);
        }
    }
    Ok(sc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiViolation {
    pub triple: [String; 3],
    pub residual: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct JacobiReport {
    pub violations: Vec<JacobiViolation>,
    pub triples_checked: usize,
}

impl JacobiReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `[x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]` on every ordered
/// triple of basis elements.
pub fn super_jacobi_check(sc: &StructureConstants) -> JacobiReport {
    let n = sc.dim();
    let mut report = JacobiReport::default();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (x, y, z) = (sc.unit(i), sc.unit(j), sc.unit(k));
                let lhs = sc.bracket_vectors(&x, &sc.bracket_vectors(&y, &z));
                let t1 = sc.bracket_vectors(&sc.bracket_vectors(&x, &y), &z);
                let t2 = sc.bracket_vectors(&y, &sc.bracket_vectors(&x, &z));
                let sign = if sc.basis.odd(i) && sc.basis.odd(j) { q(-1) } else { q(1) };
                let residual: Vec<Q> = (0..n).map(|c| &lhs[c] - &t1[c] - &sign * &t2[c]).collect();
                report.triples_checked += 1;
                if residual.iter().any(|r| !r.is_zero()) {
                    report.violations.push(JacobiViolation {
                        triple: [sc.label(i).into(), sc.label(j).into(), sc.label(k).into()],
                        residual: residual.iter().map(to_fraction_string).collect(),
                    });
                }
            }
        }
    }
    report
}

/// Negate `[P_0, P_1]` when it is nonzero, otherwise `[L_*, P_0]`, on both
/// orderings. The result is still graded antisymmetric but fails Jacobi.
pub fn corrupted_fixture(sc: &StructureConstants) -> StructureConstants {
    let mut out = sc.clone();
    let (i, j) = if sc.bracket(p_index(0), p_index(1)).iter().any(|x| !x.is_zero()) {
        (p_index(0), p_index(1))
    } else {
        (L_STAR, p_index(0))
    };
    let flipped = sc.bracket(i, j).iter().map(|x| -x).collect();
    out.set_bracket(i, j, flipped);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeometryLabel {
    Flat,
    H2,
    #[serde(rename = "dS2")]
    DS2,
    #[serde(rename = "AdS2")]
    AdS2,
}

impl GeometryLabel {
    pub fn name(self) -> &'static str {
        match self {
            GeometryLabel::Flat => "flat",
            GeometryLabel::H2 => "H²",
            GeometryLabel::DS2 => "dS₂",
            GeometryLabel::AdS2 => "AdS₂",
        }
    }
}

/// Label the even part of a (deformed) model by the homogeneous geometry it
/// is the isometry algebra of, with scalar curvature `±8b²`.
pub fn classify_even_part(sc: &StructureConstants) -> (GeometryLabel, Q) {
    let b = &sc.deformation_parameter;
    if b.is_zero() {
        return (GeometryLabel::Flat, Q::zero());
    }
    let r = b * b * q(8);
    match (sc.signature, sc.sigma_b > 0) {
        (SignatureKind::Riemannian02, _) => (GeometryLabel::H2, -r),
        (SignatureKind::Lorentzian11, true) => (GeometryLabel::DS2, r),
        (SignatureKind::Lorentzian11, false) => (GeometryLabel::AdS2, -r),
    }
}

/// Plain-data form of [`StructureConstants`] with exact fraction strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureConstantsDoc {
    pub signature: SignatureKind,
    pub sigma_b: i8,
    pub bilinear: [[String; 2]; 2],
    pub module: ModuleChoice,
    pub deformation_parameter: String,
    pub basis: Vec<BasisElement>,
    /// Nonzero brackets `[left, right]` with `left <= right` in basis order.
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub result: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryDoc {
    pub label: GeometryLabel,
    pub scalar_curvature: String,
}

impl StructureConstants {
    pub fn to_doc(&self) -> StructureConstantsDoc {
        let n = self.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i..n {
                let result: BTreeMap<String, String> = self.brackets[i][j]
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(k, v)| (self.label(k).to_string(), to_fraction_string(v)))
                    .collect();
                if !result.is_empty() {
                    brackets.push(BracketEntry { left: self.label(i).into(), right: self.label(j).into(), result });
                }
            }
        }
        StructureConstantsDoc {
            signature: self.signature,
            sigma_b: self.sigma_b,
            bilinear: self.bilinear.matrix.0.clone().map(|r| r.map(|x| to_fraction_string(&x))),
            module: self.module(),
            deformation_parameter: to_fraction_string(&self.deformation_parameter),
            basis: self.basis.elements.clone(),
            brackets,
            geometry: None,
        }
    }

    pub fn from_doc(doc: &StructureConstantsDoc) -> Result<Self, AlgebraError> {
        let bad = |m: String| AlgebraError::Malformed(m);
        let rep = build_gamma_rep(doc.signature);
        let basis = GradedBasis::new(&rep, doc.module);
        if basis.elements != doc.basis {
            return Err(bad("basis does not match signature and module".into()));
        }
        let parse = |s: &str| parse_rational(s).map_err(bad);
        let m = &doc.bilinear;
        let bilinear = BilinearForm::new(Mat2::new(parse(&m[0][0])?, parse(&m[0][1])?, parse(&m[1][0])?, parse(&m[1][1])?));
        let mut sc = StructureConstants::empty(doc.signature, bilinear, doc.sigma_b, basis);
        sc.deformation_parameter = parse(&doc.deformation_parameter)?;
        for entry in &doc.brackets {
            let i = sc.basis.index_of(&entry.left).ok_or_else(|| bad(format!("unknown label {}", entry.left)))?;
            let j = sc.basis.index_of(&entry.right).ok_or_else(|| bad(format!("unknown label {}", entry.right)))?;
            let mut v = vec![Q::zero(); sc.dim()];
            for (label, value) in &entry.result {
                let k = sc.basis.index_of(label).ok_or_else(|| bad(format!("unknown label {label}")))?;
                v[k] = parse(value)?;
            }
            sc.set_bracket(i, j, v);
        }
        Ok(sc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilinears::{bilinear_with_symmetry, enumerate_admissible};
    use crate::rational::frac;

    fn flat(kind: SignatureKind, sigma_b: i8) -> StructureConstants {
        let rep = build_gamma_rep(kind);
        build_flat_model(&rep, &bilinear_with_symmetry(&rep, sigma_b), ModuleChoice::Full).unwrap()
    }

    fn all_flat() -> Vec<StructureConstants> {
        let mut out = Vec::new();
        for kind in SignatureKind::ALL {
            let rep = build_gamma_rep(kind);
            for b in enumerate_admissible(&rep) {
                out.push(build_flat_model(&rep, &b, ModuleChoice::Full).unwrap());
                if rep.signature.is_lorentzian() {
                    out.push(build_flat_model(&rep, &b, ModuleChoice::ChiralPlus).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn flat_models_are_lie_superalgebras() {
        for sc in all_flat() {
            assert!(sc.antisymmetry_violations().is_empty());
            let report = super_jacobi_check(&sc);
            assert!(report.is_empty(), "{:?}", report.violations.first());
            assert_eq!(report.triples_checked, sc.dim().pow(3));
        }
    }

    #[test]
    fn flat_lorentzian_brackets() {
        let sc = flat(SignatureKind::Lorentzian11, 1);
        let rep = sc.rep();
        let kappa = dirac_current(&rep, &sc.bilinear).unwrap();
        for a in 0..2 {
            for c in 0..2 {
                let br = sc.bracket(q_index(a), q_index(c));
                for mu in 0..2 {
                    assert_eq!(&br[p_index(mu)], kappa.components[mu].entry(a, c));
                }
                assert!(br[L_STAR].is_zero());
            }
            for mu in 0..2 {
                assert!(sc.bracket(p_index(mu), q_index(a)).iter().all(Zero::is_zero));
            }
        }
        // [L_*, P_0] = -ς ε_{01} P^1 = P_1 and [L_*, P_1] = -ς ε_{10} P^0 = P_0
        assert_eq!(sc.bracket(L_STAR, 0), &[q(0), q(1), q(0), q(0), q(0)]);
        assert_eq!(sc.bracket(L_STAR, 1), &[q(1), q(0), q(0), q(0), q(0)]);
        assert_eq!(sc.label(0), "P_0");
    }

    #[test]
    fn riemannian_rotation() {
        let sc = flat(SignatureKind::Riemannian02, -1);
        assert_eq!(sc.bracket(L_STAR, 0), &[q(0), q(-1), q(0), q(0), q(0)]);
        assert_eq!(sc.bracket(L_STAR, 1), &[q(1), q(0), q(0), q(0), q(0)]);
        assert_eq!(sc.label(0), "P_1");
    }

    #[test]
    fn chiral_requires_lorentzian() {
        let rep = build_gamma_rep(SignatureKind::Riemannian02);
        let err = build_flat_model(&rep, &enumerate_admissible(&rep)[0], ModuleChoice::ChiralPlus);
        assert_eq!(err, Err(AlgebraError::ChiralInRiemannian));
        let bad = BilinearForm::new(Mat2::identity() + Mat2::omega());
        assert_eq!(build_flat_model(&rep, &bad, ModuleChoice::Full), Err(AlgebraError::NotAdmissible));
    }

    #[test]
    fn zero_deformation_is_flat() {
        for sc in all_flat() {
            assert_eq!(build_deformation(&sc, &q(0)).unwrap(), sc);
        }
    }

    #[test]
    fn chiral_deformation_refused() {
        let rep = build_gamma_rep(SignatureKind::Lorentzian11);
        let sc = build_flat_model(&rep, &enumerate_admissible(&rep)[0], ModuleChoice::ChiralPlus).unwrap();
        assert!(matches!(build_deformation(&sc, &q(1)), Err(AlgebraError::ChiralDeformation(_))));
    }

    #[test]
    fn deformation_examples() {
        let d = build_deformation(&flat(SignatureKind::Lorentzian11, -1), &q(1)).unwrap();
        assert_eq!(d.bracket(0, 1)[L_STAR], q(4));
        assert_eq!(classify_even_part(&d), (GeometryLabel::AdS2, q(-8)));

        let d = build_deformation(&flat(SignatureKind::Riemannian02, 1), &frac(1, 2)).unwrap();
        assert_eq!(d.bracket(0, 1)[L_STAR], q(1));
        assert_eq!(classify_even_part(&d), (GeometryLabel::H2, q(-2)));

        let d = build_deformation(&flat(SignatureKind::Riemannian02, -1), &frac(1, 2)).unwrap();
        assert_eq!(classify_even_part(&d), (GeometryLabel::H2, q(-2)));
        let d = build_deformation(&flat(SignatureKind::Lorentzian11, 1), &q(1)).unwrap();
        assert_eq!(classify_even_part(&d), (GeometryLabel::DS2, q(8)));
        assert_eq!(classify_even_part(&flat(SignatureKind::Lorentzian11, 1)), (GeometryLabel::Flat, q(0)));
    }

    #[test]
    fn deformations_satisfy_jacobi() {
        for kind in SignatureKind::ALL {
            for sigma_b in [1, -1] {
                for b in [q(1), frac(1, 2), q(3), q(-2)] {
                    let d = build_deformation(&flat(kind, sigma_b), &b).unwrap();
                    assert!(d.antisymmetry_violations().is_empty());
                    let report = super_jacobi_check(&d);
                    assert!(report.is_empty(), "{kind} {sigma_b} {b}: {:?}", report.violations.first());
                }
            }
        }
    }

    #[test]
    fn corrupted_tensor_fails_jacobi() {
        let d = build_deformation(&flat(SignatureKind::Lorentzian11, -1), &q(1)).unwrap();
        assert!(!super_jacobi_check(&corrupted_fixture(&d)).is_empty());
        for sc in all_flat() {
            assert!(!super_jacobi_check(&corrupted_fixture(&sc)).is_empty());
        }
    }

    #[test]
    fn broken_antisymmetry_is_reported() {
        let mut sc = flat(SignatureKind::Riemannian02, 1);
        sc.set_bracket_unchecked(0, 1, vec![q(0), q(0), q(1), q(0), q(0)]);
        assert_eq!(sc.antisymmetry_violations(), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn translations_close_on_rotations() {
        for kind in SignatureKind::ALL {
            for sigma_b in [1, -1] {
                let d = build_deformation(&flat(kind, sigma_b), &q(2)).unwrap();
                let block = d.translation_block();
                assert!(block.iter().any(|v| !v[L_STAR].is_zero()));
                for v in &block {
                    for (k, x) in v.iter().enumerate() {
                        assert!(k == L_STAR || x.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn rescaling_b() {
        let base = flat(SignatureKind::Lorentzian11, 1);
        let (b, lambda) = (frac(3, 2), q(-2));
        let d1 = build_deformation(&base, &b).unwrap();
        let d2 = build_deformation(&base, &(&b * &lambda)).unwrap();
        let l2 = &lambda * &lambda;
        assert_eq!(d2.bracket(0, 1)[L_STAR], &d1.bracket(0, 1)[L_STAR] * &l2);
        for mu in 0..2 {
            for a in d1.basis.spinor_indices() {
                let scaled: Vec<Q> = d1.bracket(mu, a).iter().map(|x| x * &lambda).collect();
                assert_eq!(d2.bracket(mu, a), scaled.as_slice());
            }
        }
        for a in d1.basis.spinor_indices() {
            for c in d1.basis.spinor_indices() {
                assert_eq!(d2.bracket(a, c)[L_STAR], &d1.bracket(a, c)[L_STAR] * &lambda);
                assert_eq!(d2.bracket(a, c)[0], d1.bracket(a, c)[0]);
            }
        }
    }

    #[test]
    fn associated_graded_recovers_flat() {
        for kind in SignatureKind::ALL {
            for sigma_b in [1, -1] {
                let f = flat(kind, sigma_b);
                let d = build_deformation(&f, &frac(-5, 3)).unwrap();
                assert_eq!(d.associated_graded(), f);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let d = build_deformation(&flat(SignatureKind::Lorentzian11, -1), &q(3)).unwrap();
        let text = serde_json::to_string_pretty(&d.to_doc()).unwrap();
        assert!(text.contains("\"L_*\": \"36\""));
        let doc: StructureConstantsDoc = serde_json::from_str(&text).unwrap();
        let back = StructureConstants::from_doc(&doc).unwrap();
        assert_eq!(back, d);
        assert!(super_jacobi_check(&back).is_empty());
    }

    #[test]
    fn malformed_doc_rejected() {
        let mut doc = flat(SignatureKind::Riemannian02, 1).to_doc();
        doc.brackets[0].left = "X_9".into();
        assert!(matches!(StructureConstants::from_doc(&doc), Err(AlgebraError::Malformed(_))));
    }
}
