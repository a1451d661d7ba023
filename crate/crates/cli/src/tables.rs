//! The bilinear tables and the summary table, every cell computed.

use ksa_core::bilinears::{classify_bilinear, enumerate_admissible, AdmissibilityReport};
use ksa_core::spencer::solve_H22;
use ksa_core::superalgebra::{build_deformation, build_flat_model, classify_even_part};
use ksa_core::rational::q;
use ksa_core::{build_gamma_rep, BilinearForm, GammaRep, Mat2, ModuleChoice, SignatureKind, Q};
use num_traits::Zero;
use serde::Serialize;

pub const MINUS: &str = "−";
pub const NOT_APPLICABLE: &str = "—";

pub fn sign_cell(s: Option<i8>) -> String {
    match s {
        Some(1) => "+".into(),
        Some(-1) => MINUS.into(),
        _ => NOT_APPLICABLE.into(),
    }
}

pub fn bilinear_label(b: &BilinearForm) -> String {
    let m = &b.matrix;
    let name = if *m == Mat2::sigma1() {
        "σ₁"
    } else if *m == Mat2::omega() {
        "Ω"
    } else if *m == Mat2::identity() {
        ""
    } else {
        "B"
    };
    format!("εᵀ{name}ε′")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BilinearRow {
    pub form: String,
    pub cells: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BilinearTable {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<BilinearRow>,
}

fn report_cells(rep: &GammaRep, r: &AdmissibilityReport) -> Vec<String> {
    if rep.signature.is_lorentzian() {
        [r.symmetry, r.type_sign, r.isotropy, r.current_symmetry, r.current_isotropy].map(sign_cell).to_vec()
    } else {
        [r.symmetry, r.type_sign, r.current_symmetry].map(sign_cell).to_vec()
    }
}

pub fn bilinear_table(kind: SignatureKind) -> BilinearTable {
    let rep = build_gamma_rep(kind);
    let headers: Vec<&str> = if rep.signature.is_lorentzian() {
        vec!["B(ε,ε′)", "ς_B", "τ_B", "ι_B", "ς_κ", "ι_κ"]
    } else {
        vec!["B(ε,ε′)", "ς_B", "τ_B", "ς_κ"]
    };
    let rows = enumerate_admissible(&rep)
        .iter()
        .map(|b| {
            let r = classify_bilinear(&rep, b).expect("canonical forms are nonzero");
            BilinearRow { form: bilinear_label(b), cells: report_cells(&rep, &r) }
        })
        .collect();
    BilinearTable {
        title: format!("Admissible bilinears and their Dirac currents in signature {kind}"),
        headers: headers.into_iter().map(String::from).collect(),
        rows,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummaryRow {
    pub signature: String,
    pub module: String,
    pub bilinear: String,
    pub cohomology: String,
    pub killing_spinors: String,
    pub geometry: String,
}

impl SummaryRow {
    pub fn cells(&self) -> [&str; 6] {
        [&self.signature, &self.module, &self.bilinear, &self.cohomology, &self.killing_spinors, &self.geometry]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummaryTable {
    pub headers: Vec<String>,
    pub rows: Vec<SummaryRow>,
}

pub const SUMMARY_HEADERS: [&str; 6] = ["Signature", "S", "B", "H²,²", "Killing spinors", "Max. SUSY geom."];

/// The odd part as a spin module: irreducible, split into chiral halves, or
/// one chiral half.
fn module_cell(rep: &GammaRep, module: ModuleChoice) -> String {
    // Γ_* squares to +1 exactly when it has real eigenspaces S±
    let splits = &rep.gamma_star * &rep.gamma_star == Mat2::identity();
    match (module, splits) {
        (ModuleChoice::ChiralPlus, _) => "S±".into(),
        (ModuleChoice::Full, true) => "S=S₊⊕S₋".into(),
        (ModuleChoice::Full, false) => "S₁=S".into(),
    }
}

/// `ς_B = ±` when `B` survives on the odd part, otherwise not applicable.
fn bilinear_cell(b: &BilinearForm, module: ModuleChoice, sigma_b: i8) -> String {
    let survives = match module {
        ModuleChoice::Full => !b.matrix.is_zero(),
        ModuleChoice::ChiralPlus => !b.matrix.entry(0, 0).is_zero(),
    };
    if survives {
        format!("ς_B = {}", sign_cell(Some(sigma_b)))
    } else {
        NOT_APPLICABLE.into()
    }
}

fn cohomology_cell(dim: usize) -> String {
    match dim {
        0 => "0".into(),
        1 => "ℝ".into(),
        n => format!("ℝ^{n}"),
    }
}

/// `Some(c)` if `m[μ] = c · n[μ]` for both μ with a common `c ≠ 0`.
fn common_ratio(m: &[Mat2; 2], n: &[Mat2; 2]) -> Option<Q> {
    let mut ratio: Option<Q> = None;
    for mu in 0..2 {
        for (x, y) in m[mu].0.iter().flatten().zip(n[mu].0.iter().flatten()) {
            if y.is_zero() {
                if !x.is_zero() {
                    return None;
                }
                continue;
            }
            let c = x / y;
            match &ratio {
                Some(r) if *r != c => return None,
                None => ratio = Some(c),
                _ => {}
            }
        }
    }
    ratio.filter(|c| !c.is_zero())
}

/// Read off the Killing spinor equation `∇_Xε = β_X ε` from the
/// normalised cohomology generator.
fn killing_spinor_cell(rep: &GammaRep, generator: Option<&ksa_core::spencer::SpencerParams>) -> String {
    let Some(p) = generator else {
        return "∇_Xε=0".into();
    };
    let beta = [p.beta(rep, 0), p.beta(rep, 1)];
    let clifford = [rep.gamma[0].clone(), rep.gamma[1].clone()];
    // (*X)·ε for X = e_μ is ε_{μν}Γ^ν
    let hodge = [0, 1].map(|mu| {
        (0..2).fold(Mat2::zero(), |acc, nu| &acc + &rep.gamma_upper(nu).scale(&q(rep.eps(mu, nu))))
    });
    let coefficient = |c: Q| if c == q(1) { "b".to_string() } else { format!("({c})b") };
    if let Some(c) = common_ratio(&beta, &clifford) {
        format!("∇_Xε={}X·ε", coefficient(c))
    } else if let Some(c) = common_ratio(&beta, &hodge) {
        format!("∇_Xε={}(*X)·ε", coefficient(c))
    } else {
        "∇_Xε=β_Xε".into()
    }
}

pub fn summary_row(kind: SignatureKind, module: ModuleChoice, sigma_b: i8) -> SummaryRow {
    let rep = build_gamma_rep(kind);
    let b = ksa_core::bilinears::bilinear_with_symmetry(&rep, sigma_b);
    let flat = build_flat_model(&rep, &b, module).expect("canonical flat model");
    let h22 = solve_H22(&flat);
    let killing_spinors = killing_spinor_cell(&rep, h22.canonical_rep.as_ref());
    let geometry = match build_deformation(&flat, &q(1)) {
        Ok(def) => {
            let (label, _) = classify_even_part(&def);
            label.name().to_string()
        }
        Err(_) => NOT_APPLICABLE.into(),
    };
    SummaryRow {
        signature: kind.name().to_string(),
        module: module_cell(&rep, module),
        bilinear: bilinear_cell(&b, module, sigma_b),
        cohomology: cohomology_cell(h22.dimension),
        killing_spinors,
        geometry,
    }
}

pub fn summary_table() -> SummaryTable {
    use ModuleChoice::*;
    use SignatureKind::*;
    let mut rows = vec![
        summary_row(Riemannian02, Full, 1),
        summary_row(Riemannian02, Full, -1),
        summary_row(Lorentzian11, Full, 1),
        summary_row(Lorentzian11, Full, -1),
    ];
    // the restricted currents agree, so one row covers both choices of B
    let chiral = [1, -1].map(|s| summary_row(Lorentzian11, ChiralPlus, s));
    if chiral[0] == chiral[1] {
        rows.push(chiral[0].clone());
    } else {
        rows.extend(chiral);
    }
    SummaryTable { headers: SUMMARY_HEADERS.iter().map(|s| s.to_string()).collect(), rows }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tables {
    pub lorentzian: BilinearTable,
    pub riemannian: BilinearTable,
    pub summary: SummaryTable,
}

pub fn all_tables() -> Tables {
    Tables {
        lorentzian: bilinear_table(SignatureKind::Lorentzian11),
        riemannian: bilinear_table(SignatureKind::Riemannian02),
        summary: summary_table(),
    }
}

fn markdown_table(out: &mut String, headers: &[&str], rows: &[Vec<&str>]) {
    let line = |cells: &[&str]| format!("| {} |\n", cells.join(" | "));
    out.push_str(&line(headers));
    out.push_str(&format!("|{}\n", "---|".repeat(headers.len())));
    for r in rows {
        out.push_str(&line(r));
    }
}

impl Tables {
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        for (n, t) in [(1, &self.lorentzian), (2, &self.riemannian)] {
            out.push_str(&format!("Table {n}: {}\n\n", t.title));
            let headers: Vec<&str> = t.headers.iter().map(String::as_str).collect();
            let rows: Vec<Vec<&str>> = t
                .rows
                .iter()
                .map(|r| std::iter::once(r.form.as_str()).chain(r.cells.iter().map(String::as_str)).collect())
                .collect();
            markdown_table(&mut out, &headers, &rows);
            out.push('\n');
        }
        out.push_str("Table 3: Summary\n\n");
        let headers: Vec<&str> = self.summary.headers.iter().map(String::as_str).collect();
        let rows: Vec<Vec<&str>> = self.summary.rows.iter().map(|r| r.cells().to_vec()).collect();
        markdown_table(&mut out, &headers, &rows);
        out
    }

    /// One record per cell: `table,row,column,value`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["table", "row", "column", "value"]).expect("in-memory write");
        for (n, t) in [("1", &self.lorentzian), ("2", &self.riemannian)] {
            for r in &t.rows {
                for (h, c) in t.headers.iter().skip(1).zip(&r.cells) {
                    w.write_record([n, r.form.as_str(), h, c]).expect("in-memory write");
                }
            }
        }
        for (i, r) in self.summary.rows.iter().enumerate() {
            let row = (i + 1).to_string();
            for (h, c) in self.summary.headers.iter().zip(r.cells()) {
                w.write_record(["3", row.as_str(), h, c]).expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }
}
