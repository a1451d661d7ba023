//! Normalised Spencer (2,2)-cocycles of a flat model as the kernel of an
//! exact linear system.
//!
//! A cocycle is `β + γ` with `β_μ = a_μ 1 + b_{μν} Γ^ν + c_μ Γ_*` and
//! `γ(s,s) = g(s,s) L_*`. The rotation `g L_*` is the `so(V)` element
//! `A_{ρσ} = ς g ε_{ρσ}`; it acts on vectors by `A` and on spinors by `½ g Γ_*`.

use num_traits::Zero;
use serde::Serialize;

use crate::bilinears::{dirac_current, DiracCurrent};
use crate::clifford::{CliffordElement, GammaRep, Mat2};
use crate::linalg::{primitive, QMatrix};
use crate::rational::{frac, q, to_fraction_string, Q};
use crate::superalgebra::{ModuleChoice, StructureConstants};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpencerParams {
    pub a: [Q; 2],
    pub b_tensor: [[Q; 2]; 2],
    pub c: [Q; 2],
    /// `g_11, g_12, g_22`: the `L_*` coefficient of `γ` on `⊙²S`.
    pub gamma: [Q; 3],
}

pub const PARAM_LABELS: [&str; 11] = ["a_0", "a_1", "b_00", "b_01", "b_10", "b_11", "c_0", "c_1", "g_11", "g_12", "g_22"];

const CHIRAL_COLUMNS: [usize; 3] = [0, 1, 8];

impl SpencerParams {
    pub fn zero() -> Self {
        Self::from_vec(&vec![Q::zero(); 11])
    }

    pub fn from_vec(v: &[Q]) -> Self {
        assert_eq!(v.len(), 11);
        Self {
            a: [v[0].clone(), v[1].clone()],
            b_tensor: [[v[2].clone(), v[3].clone()], [v[4].clone(), v[5].clone()]],
            c: [v[6].clone(), v[7].clone()],
            gamma: [v[8].clone(), v[9].clone(), v[10].clone()],
        }
    }

    pub fn to_vec(&self) -> Vec<Q> {
        let mut v = Vec::with_capacity(11);
        v.extend(self.a.iter().cloned());
        v.extend(self.b_tensor.iter().flatten().cloned());
        v.extend(self.c.iter().cloned());
        v.extend(self.gamma.iter().cloned());
        v
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::from_vec(&self.to_vec().iter().map(|x| x * k).collect::<Vec<_>>())
    }

    pub fn is_zero(&self) -> bool {
        self.to_vec().iter().all(Zero::is_zero)
    }

    /// `β_μ` as a spinor endomorphism.
    pub fn beta(&self, rep: &GammaRep, mu: usize) -> Mat2 {
        let mut m = Mat2::identity().scale(&self.a[mu]);
        for nu in 0..2 {
            m = &m + &rep.gamma_upper(nu).scale(&self.b_tensor[mu][nu]);
        }
        &m + &rep.gamma_star.scale(&self.c[mu])
    }

    /// Read `β` back from two endomorphisms; `γ` is left zero.
    pub fn from_beta(rep: &GammaRep, beta: &[Mat2; 2]) -> Self {
        let mut p = Self::zero();
        for mu in 0..2 {
            let e = CliffordElement::from_matrix(rep, &beta[mu]);
            p.a[mu] = e.scalar.clone();
            p.c[mu] = e.volume.clone();
            for nu in 0..2 {
                // b_{μν} Γ^ν = b_{μν} η^{νν} Γ_ν
                p.b_tensor[mu][nu] = &e.vector[nu] * q(rep.eta(nu, nu));
            }
        }
        p
    }

    /// Symmetric matrix of `g`.
    pub fn gamma_form(&self) -> Mat2 {
        let [g11, g12, g22] = self.gamma.clone();
        Mat2::new(g11, g12.clone(), g12, g22)
    }

    /// The cocycle's deformation parameter, `½(ς ε^{μν} + η^{μν}) b_{μν}`.
    pub fn b_scalar(&self, rep: &GammaRep) -> Q {
        let s = rep.sigma_flip();
        let mut acc = Q::zero();
        for mu in 0..2 {
            for nu in 0..2 {
                let w = s * rep.eps_upper(mu, nu) + rep.eta(mu, nu);
                acc += &self.b_tensor[mu][nu] * q(w);
            }
        }
        acc * frac(1, 2)
    }
}

/// Closed-form cocycle with parameter `b`: `β_μ = b ε_{μν} Γ^ν`,
/// `g = 2bς B` for σ_B = +1 and `β_μ = b Γ_μ`, `g = -2bς (BΓ_*)_sym` for
/// σ_B = -1.
pub fn canonical_cocycle(flat: &StructureConstants, b: &Q) -> SpencerParams {
    let rep = flat.rep();
    let s = q(rep.sigma_flip());
    let mut p = SpencerParams::zero();
    let g = if flat.sigma_b > 0 {
        for mu in 0..2 {
            for nu in 0..2 {
                p.b_tensor[mu][nu] = b * q(rep.eps(mu, nu));
            }
        }
        flat.bilinear.matrix.symmetrised().scale(&(&s * b * q(2)))
    } else {
        for mu in 0..2 {
            p.b_tensor[mu][mu] = b * q(rep.eta(mu, mu));
        }
        (&flat.bilinear.matrix * &rep.gamma_star).symmetrised().scale(&(-&s * b * q(2)))
    };
    p.gamma = [g.entry(0, 0).clone(), g.entry(0, 1).clone(), g.entry(1, 1).clone()];
    p
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowProvenance {
    /// 1 for `2κ(s,β(v,s)) + γ(s,s)v = 0`, 2 for `β(κ_s,s) + γ(s,s)s = 0`.
    pub condition: u8,
    pub spinor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vector: Option<String>,
    pub component: String,
}

#[derive(Clone, Debug)]
pub struct CocycleSystem {
    pub matrix: QMatrix,
    pub row_provenance: Vec<RowProvenance>,
    /// Indices into [`PARAM_LABELS`] of the unknowns that are columns.
    pub columns: Vec<usize>,
    pub module: ModuleChoice,
}

impl CocycleSystem {
    pub fn column_labels(&self) -> Vec<&'static str> {
        self.columns.iter().map(|&c| PARAM_LABELS[c]).collect()
    }

    pub fn embed(&self, x: &[Q]) -> SpencerParams {
        let mut v = vec![Q::zero(); 11];
        for (k, &c) in self.columns.iter().enumerate() {
            v[c] = x[k].clone();
        }
        SpencerParams::from_vec(&v)
    }

    /// Restrict to the rows of the first condition.
    pub fn condition_one(&self) -> QMatrix {
        let rows = self
            .row_provenance
            .iter()
            .enumerate()
            .filter(|(_, p)| p.condition == 1)
            .map(|(r, _)| self.matrix.row(r).to_vec())
            .collect();
        QMatrix::from_rows(rows, self.matrix.cols())
    }
}

fn spinor_label(s: &[Q; 2]) -> String {
    let mut parts = Vec::new();
    for (i, c) in s.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let coeff = if *c == q(1) {
            String::new()
        } else if *c == q(-1) {
            "-".into()
        } else {
            to_fraction_string(c)
        };
        parts.push(format!("{coeff}Q_{}", i + 1));
    }
    parts.join("+").replace("+-", "-")
}

/// Sample spinors used to depolarise the conditions.
pub fn default_samples(module: ModuleChoice) -> Vec<[Q; 2]> {
    match module {
        ModuleChoice::Full => vec![[q(1), q(0)], [q(0), q(1)], [q(1), q(1)]],
        ModuleChoice::ChiralPlus => vec![[q(1), q(0)]],
    }
}

pub fn extended_samples(module: ModuleChoice) -> Vec<[Q; 2]> {
    match module {
        ModuleChoice::Full => {
            let mut v = default_samples(module);
            v.push([q(1), q(-1)]);
            v.push([q(1), q(2)]);
            v
        }
        ModuleChoice::ChiralPlus => vec![[q(1), q(0)], [q(2), q(0)]],
    }
}

/// Left-hand sides of both conditions at one sample spinor, in row order.
fn residuals(rep: &GammaRep, kappa: &DiracCurrent, p: &SpencerParams, s: &[Q; 2]) -> (Vec<Q>, Vec<Q>) {
    let sg = rep.sigma_flip();
    let g = p.gamma_form().pair(s, s);
    let mut first = Vec::with_capacity(4);
    for mu in 0..2 {
        let bs = p.beta(rep, mu).apply(s);
        let k = kappa.eval(s, &bs);
        for rho in 0..2 {
            // (L_* e_μ)^ρ = ς ε_{ρμ} η^{ρρ}
            let rot = q(sg * rep.eps(rho, mu) * rep.eta(rho, rho));
            first.push(&k[rho] * q(2) + &g * rot);
        }
    }
    let ks = kappa.of(s);
    let mut acc = rep.gamma_star.apply(s).map(|x| x * &g * frac(1, 2));
    for mu in 0..2 {
        let bs = p.beta(rep, mu).apply(s);
        for a in 0..2 {
            acc[a] += &ks[mu] * &bs[a];
        }
    }
    (first, acc.to_vec())
}

pub fn assemble_cocycle_system(flat: &StructureConstants) -> CocycleSystem {
    assemble_with_samples(flat, &default_samples(flat.module()))
}

pub fn assemble_with_samples(flat: &StructureConstants, samples: &[[Q; 2]]) -> CocycleSystem {
    let rep = flat.rep();
    let kappa = dirac_current(&rep, &flat.bilinear).expect("flat models carry a nonzero bilinear");
    let module = flat.module();
    let columns: Vec<usize> = match module {
        ModuleChoice::Full => (0..11).collect(),
        ModuleChoice::ChiralPlus => CHIRAL_COLUMNS.to_vec(),
    };
    let spinor_dim = module.spinor_dim();

    let mut provenance = Vec::new();
    for s in samples {
        let label = spinor_label(s);
        for mu in 0..2 {
            for rho in 0..2 {
                provenance.push(RowProvenance {
                    condition: 1,
                    spinor: label.clone(),
                    vector: Some(flat.label(mu).to_string()),
                    component: format!("V^{}", rep.signature.label(rho)),
                });
            }
        }
    }
    for s in samples {
        for a in 0..spinor_dim {
            provenance.push(RowProvenance {
                condition: 2,
                spinor: spinor_label(s),
                vector: None,
                component: format!("S_{}", a + 1),
            });
        }
    }

    let evaluate = |p: &SpencerParams| -> Vec<Q> {
        let mut ones = Vec::new();
        let mut twos = Vec::new();
        for s in samples {
            let (f, t) = residuals(&rep, &kappa, p, s);
            ones.extend(f);
            twos.extend(t.into_iter().take(spinor_dim));
        }
        ones.extend(twos);
        ones
    };

    let n_rows = provenance.len();
    let mut matrix = QMatrix::zeros(n_rows, columns.len());
    for (k, &c) in columns.iter().enumerate() {
        let mut v = vec![Q::zero(); 11];
        v[c] = q(1);
        let col = evaluate(&SpencerParams::from_vec(&v));
        for (r, x) in col.into_iter().enumerate() {
            matrix.set(r, k, x);
        }
    }
    CocycleSystem { matrix, row_provenance: provenance, columns, module }
}

/// Whether `p` satisfies both conditions at the extended sample set.
pub fn is_cocycle(flat: &StructureConstants, p: &SpencerParams) -> bool {
    let system = assemble_with_samples(flat, &extended_samples(flat.module()));
    let x: Vec<Q> = system.columns.iter().map(|&c| p.to_vec()[c].clone()).collect();
    let embedded_back = system.embed(&x);
    embedded_back == *p && system.matrix.apply(&x).iter().all(Zero::is_zero)
}

#[derive(Clone, Debug)]
pub struct CohomologyResult {
    pub dimension: usize,
    pub basis: Vec<SpencerParams>,
    pub canonical_rep: Option<SpencerParams>,
    pub system: CocycleSystem,
}

#[allow(non_snake_case)]
pub fn solve_H22(flat: &StructureConstants) -> CohomologyResult {
    solve_with_system(flat, assemble_cocycle_system(flat))
}

pub fn solve_with_system(flat: &StructureConstants, system: CocycleSystem) -> CohomologyResult {
    let rep = flat.rep();
    let basis: Vec<SpencerParams> = system.matrix.nullspace().iter().map(|x| system.embed(x)).collect();
    let canonical_rep = match basis.as_slice() {
        [only] => {
            let b = only.b_scalar(&rep);
            Some(if b.is_zero() {
                SpencerParams::from_vec(&primitive(&only.to_vec()))
            } else {
                only.scale(&(q(1) / b))
            })
        }
        _ => None,
    };
    CohomologyResult { dimension: basis.len(), basis, canonical_rep, system }
}

/// The `L_*` action on a cocycle through its action on
/// `Hom(V ⊗ S, S) ⊕ Hom(⊙²S, so(V))`.
pub fn rotate_cocycle(rep: &GammaRep, p: &SpencerParams) -> SpencerParams {
    let sg = rep.sigma_flip();
    let half_star = rep.gamma_star.scale(&frac(1, 2));
    let mut beta = [Mat2::zero(), Mat2::zero()];
    for mu in 0..2 {
        let mut m = half_star.commutator(&p.beta(rep, mu));
        for nu in 0..2 {
            let rot = q(sg * rep.eps(nu, mu) * rep.eta(nu, nu));
            m = &m - &p.beta(rep, nu).scale(&rot);
        }
        beta[mu] = m;
    }
    let mut out = SpencerParams::from_beta(rep, &beta);
    // (L·γ)(s,t) = -γ(½Γ_* s, t) - γ(s, ½Γ_* t)
    let gm = p.gamma_form();
    let d = -(&(&gm * &half_star) + &(&half_star.transpose() * &gm));
    out.gamma = [d.entry(0, 0).clone(), d.entry(0, 1).clone(), d.entry(1, 1).clone()];
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SpencerParamsDoc {
    pub a: [String; 2],
    pub b_tensor: [[String; 2]; 2],
    pub c: [String; 2],
    pub gamma: [String; 3],
}

impl From<&SpencerParams> for SpencerParamsDoc {
    fn from(p: &SpencerParams) -> Self {
        let f = to_fraction_string;
        Self {
            a: p.a.clone().map(|x| f(&x)),
            b_tensor: p.b_tensor.clone().map(|r| r.map(|x| f(&x))),
            c: p.c.clone().map(|x| f(&x)),
            gamma: p.gamma.clone().map(|x| f(&x)),
        }
    }
}

impl SpencerParamsDoc {
    /// `(label, value)` in [`PARAM_LABELS`] order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let values = self.a.iter().chain(self.b_tensor.iter().flatten()).chain(&self.c).chain(&self.gamma);
        PARAM_LABELS.iter().copied().zip(values.cloned()).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyDoc {
    pub dimension: usize,
    pub rank: usize,
    pub columns: Vec<&'static str>,
    pub basis: Vec<SpencerParamsDoc>,
    pub canonical_rep: Option<SpencerParamsDoc>,
    pub row_provenance: Vec<RowProvenance>,
}

impl CohomologyResult {
    pub fn to_doc(&self) -> CohomologyDoc {
        CohomologyDoc {
            dimension: self.dimension,
            rank: self.system.matrix.rank(),
            columns: self.system.column_labels(),
            basis: self.basis.iter().map(Into::into).collect(),
            canonical_rep: self.canonical_rep.as_ref().map(Into::into),
            row_provenance: self.system.row_provenance.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilinears::{bilinear_with_symmetry, enumerate_admissible};
    use crate::clifford::{build_gamma_rep, SignatureKind};
    use crate::linalg::proportional;
    use crate::superalgebra::build_flat_model;

    fn flat(kind: SignatureKind, sigma_b: i8) -> StructureConstants {
        let rep = build_gamma_rep(kind);
        build_flat_model(&rep, &bilinear_with_symmetry(&rep, sigma_b), ModuleChoice::Full).unwrap()
    }

    fn chiral() -> StructureConstants {
        let rep = build_gamma_rep(SignatureKind::Lorentzian11);
        build_flat_model(&rep, &enumerate_admissible(&rep)[0], ModuleChoice::ChiralPlus).unwrap()
    }

    fn four_cases() -> Vec<StructureConstants> {
        SignatureKind::ALL.iter().flat_map(|&k| [flat(k, 1), flat(k, -1)]).collect()
    }

    #[test]
    fn column_counts() {
        for f in four_cases() {
            let sys = assemble_cocycle_system(&f);
            assert_eq!(sys.matrix.cols(), 11);
            assert_eq!(sys.matrix.rows(), sys.row_provenance.len());
            assert_eq!(sys.matrix.rows(), 3 * 4 + 3 * 2);
        }
        let sys = assemble_cocycle_system(&chiral());
        assert_eq!(sys.column_labels(), vec!["a_0", "a_1", "g_11"]);
    }

    #[test]
    fn zero_parameters_solve_the_system() {
        for f in four_cases() {
            let sys = assemble_cocycle_system(&f);
            assert!(sys.matrix.apply(&vec![Q::zero(); 11]).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn provenance_labels() {
        let sys = assemble_cocycle_system(&flat(SignatureKind::Lorentzian11, 1));
        assert_eq!(sys.row_provenance[0].spinor, "Q_1");
        assert_eq!(sys.row_provenance[8].spinor, "Q_1+Q_2");
        assert_eq!(sys.row_provenance[0].vector.as_deref(), Some("P_0"));
        assert_eq!(sys.row_provenance.last().unwrap().condition, 2);
        assert_eq!(spinor_label(&[q(1), q(-1)]), "Q_1-Q_2");
        assert_eq!(spinor_label(&[q(1), q(2)]), "Q_1+2Q_2");
    }

    #[test]
    fn cohomology_is_one_dimensional() {
        for f in four_cases() {
            let res = solve_H22(&f);
            assert_eq!(res.dimension, 1, "{} σ_B={}", f.signature, f.sigma_b);
            let canon = res.canonical_rep.unwrap();
            assert_eq!(canon, canonical_cocycle(&f, &q(1)));
        }
    }

    // β and γ written out by hand for each case, independent of canonical_cocycle.
    #[test]
    fn explicit_solutions() {
        let lor_plus = solve_H22(&flat(SignatureKind::Lorentzian11, 1)).canonical_rep.unwrap();
        // B = σ₁, ε_{01} = 1, ς = -1: b_{01} = 1, b_{10} = -1, g = -2σ₁
        assert_eq!(lor_plus.b_tensor, [[q(0), q(1)], [q(-1), q(0)]]);
        assert_eq!(lor_plus.gamma, [q(0), q(-2), q(0)]);

        let rie_minus = solve_H22(&flat(SignatureKind::Riemannian02, -1)).canonical_rep.unwrap();
        // B = Ω, Γ_* = Ω: BΓ_* = -1, so g = -2(+1)(-1) = 2·1
        assert_eq!(rie_minus.b_tensor, [[q(1), q(0)], [q(0), q(1)]]);
        assert_eq!(rie_minus.gamma, [q(2), q(0), q(2)]);

        let lor_minus = solve_H22(&flat(SignatureKind::Lorentzian11, -1)).canonical_rep.unwrap();
        // B = Ω, Γ_* = σ₃: ΩΓ_* = σ₁ up to sign; b_{μν} = η_{μν}
        assert_eq!(lor_minus.b_tensor, [[q(-1), q(0)], [q(0), q(1)]]);
        assert_eq!(lor_minus.a, [q(0), q(0)]);
        assert_eq!(lor_minus.c, [q(0), q(0)]);

        let rie_plus = solve_H22(&flat(SignatureKind::Riemannian02, 1)).canonical_rep.unwrap();
        assert_eq!(rie_plus.b_tensor, [[q(0), q(1)], [q(-1), q(0)]]);
        assert_eq!(rie_plus.gamma, [q(2), q(0), q(2)]);
    }

    #[test]
    fn chiral_cohomology_vanishes() {
        let res = solve_H22(&chiral());
        assert_eq!(res.dimension, 0);
        assert!(res.canonical_rep.is_none());
        let rep = build_gamma_rep(SignatureKind::Lorentzian11);
        for b in enumerate_admissible(&rep) {
            let f = build_flat_model(&rep, &b, ModuleChoice::ChiralPlus).unwrap();
            assert_eq!(solve_H22(&f).dimension, 0);
        }
    }

    #[test]
    fn second_condition_adds_no_rank() {
        for f in four_cases().into_iter().chain([chiral()]) {
            let sys = assemble_cocycle_system(&f);
            assert_eq!(sys.matrix.rank(), sys.condition_one().rank());
        }
    }

    #[test]
    fn extra_samples_do_not_change_kernel() {
        for f in four_cases().into_iter().chain([chiral()]) {
            let base = solve_H22(&f);
            let wide = solve_with_system(&f, assemble_with_samples(&f, &extended_samples(f.module())));
            assert_eq!(base.dimension, wide.dimension);
            for (x, y) in base.basis.iter().zip(&wide.basis) {
                assert!(proportional(&x.to_vec(), &y.to_vec()));
            }
        }
    }

    #[test]
    fn kernel_shape_by_case() {
        for f in four_cases() {
            let rep = f.rep();
            let v = &solve_H22(&f).basis[0];
            assert!(v.a.iter().chain(&v.c).all(Zero::is_zero));
            let bt = &v.b_tensor;
            if f.sigma_b > 0 {
                assert_eq!(&bt[0][1] + &bt[1][0], q(0));
                assert!(bt[0][0].is_zero() && bt[1][1].is_zero());
            } else {
                let flat_eta: Vec<Q> = (0..4).map(|i| q(rep.eta(i / 2, i % 2))).collect();
                let got: Vec<Q> = bt.iter().flatten().cloned().collect();
                assert!(proportional(&got, &flat_eta));
            }
        }
    }

    #[test]
    fn cocycles_are_rotation_invariant() {
        for f in four_cases() {
            let rep = f.rep();
            let canon = solve_H22(&f).canonical_rep.unwrap();
            assert!(rotate_cocycle(&rep, &canon).is_zero());
        }
    }

    #[test]
    fn rotation_acts_nontrivially_off_kernel() {
        let rep = build_gamma_rep(SignatureKind::Lorentzian11);
        let mut p = SpencerParams::zero();
        p.a = [q(1), q(0)];
        assert!(!rotate_cocycle(&rep, &p).is_zero());
        p = SpencerParams::zero();
        p.gamma = [q(1), q(0), q(0)];
        assert!(!rotate_cocycle(&rep, &p).is_zero());
    }

    #[test]
    fn is_cocycle_detects_perturbation() {
        for f in four_cases() {
            let mut p = canonical_cocycle(&f, &frac(3, 2));
            assert!(is_cocycle(&f, &p));
            p.gamma[1] += q(1);
            assert!(!is_cocycle(&f, &p));
        }
    }

    #[test]
    fn beta_round_trip() {
        let rep = build_gamma_rep(SignatureKind::Lorentzian11);
        let mut p = SpencerParams::from_vec(&(1..=11).map(q).collect::<Vec<_>>());
        p.gamma = [q(0), q(0), q(0)];
        let back = SpencerParams::from_beta(&rep, &[p.beta(&rep, 0), p.beta(&rep, 1)]);
        assert_eq!(back, p);
    }

    #[test]
    fn doc_serialises_fractions() {
        let res = solve_H22(&flat(SignatureKind::Riemannian02, 1));
        let text = serde_json::to_string(&res.to_doc()).unwrap();
        assert!(text.contains("\"dimension\":1"));
        assert!(text.contains("\"rank\":10"));
        assert!(text.contains("\"condition\":2"));
    }
}
