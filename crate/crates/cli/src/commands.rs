//! Command implementations. Each returns an exit code and the rendered
//! output so that they can be driven from tests without a process.

use ksa_core::bilinears::{causal_character, classify_bilinear, fierz_decompose};
use ksa_core::clifford::verify_gamma_identities;
use ksa_core::geometry::connection::{curvature_RD, killing_spinor_dimension, AdmissibleConnection, KillingSpinorEstimate};
use ksa_core::geometry::killing::assemble_killing_superalgebra;
use ksa_core::geometry::{model_space, perturbed_h2, sample_grid, scalar_curvature, GeometryKind, ModelGeometry};
use ksa_core::integrability::{check_integrability, compute_theta, deformation_from_cocycle, expected_rotation};
use ksa_core::rational::{frac, q, to_f64, to_fraction_string};
use ksa_core::spencer::{canonical_cocycle, solve_H22};
use ksa_core::superalgebra::{
    build_deformation, build_flat_model, classify_even_part, corrupted_fixture, super_jacobi_check, GeometryDoc,
};
use ksa_core::{build_gamma_rep, AlgebraError, ModuleChoice, Spinor, StructureConstants, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{ConfigError, ConfigSummary, Fixture, Format, RunConfig};
use crate::tables::{all_tables, sign_cell};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

pub const FIERZ_SAMPLES: usize = 128;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Largest numeric defect, when the check has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    pub detail: String,
}

impl Check {
    fn exact(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, residual: None, detail: detail.into() }
    }

    fn bounded(name: &str, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            passed: residual.is_finite() && residual < tolerance,
            residual: Some(residual),
            detail: format!("tolerance {tolerance:e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: ConfigSummary,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn config_error(e: AlgebraError) -> ConfigError {
    ConfigError::Unsupported(e.to_string())
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Q {
    let num: i64 = rng.random_range(-9..=9);
    let den: i64 = rng.random_range(1..=7);
    frac(num, den)
}

pub fn random_spinor<R: Rng>(rng: &mut R) -> Spinor {
    Spinor::new(random_rational(rng), random_rational(rng))
}

/// Fierz reconstruction and the causality identity on seeded random pairs.
pub fn fierz_suite(cfg: &RunConfig, samples: usize, seed: u64) -> Result<Check, ConfigError> {
    let rep = build_gamma_rep(cfg.signature);
    let b = cfg.bilinear_form();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..samples {
        let (e, f) = (random_spinor(&mut rng), random_spinor(&mut rng));
        let fierz = fierz_decompose(&rep, &b, &e, &f).map_err(config_error)?;
        let causal = causal_character(&rep, &b, &e).map_err(config_error)?;
        if !fierz.reconstructs || causal.norm_direct != causal.norm_fierz || causal.character != causal.predicted {
            failures += 1;
        }
    }
    Ok(Check::exact("fierz", failures == 0, format!("{failures} of {samples} random pairs failed")))
}

fn flat_model(cfg: &RunConfig) -> Result<StructureConstants, ConfigError> {
    let rep = build_gamma_rep(cfg.signature);
    build_flat_model(&rep, &cfg.bilinear_form(), cfg.module).map_err(config_error)
}

fn deformation(cfg: &RunConfig, flat: &StructureConstants) -> Result<StructureConstants, ConfigError> {
    build_deformation(flat, &cfg.b).map_err(|e| match e {
        AlgebraError::ChiralDeformation(b) => ConfigError::ChiralObstruction(b),
        other => config_error(other),
    })
}

pub fn algebra_checks(cfg: &RunConfig) -> Result<Vec<Check>, ConfigError> {
    let rep = build_gamma_rep(cfg.signature);
    let b = cfg.bilinear_form();
    let mut checks = Vec::new();

    let ids = verify_gamma_identities(&rep);
    let failed: Vec<&str> = ids.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    checks.push(Check::exact("gamma_identities", failed.is_empty(), format!("{} identities, failed: {failed:?}", ids.checks.len())));

    let report = classify_bilinear(&rep, &b).map_err(config_error)?;
    checks.push(Check::exact(
        "bilinear_admissible",
        report.admissible,
        format!("σ_B = {}, τ_B = {}", sign_cell(report.symmetry), sign_cell(report.type_sign)),
    ));
    if !report.admissible {
        return Err(ConfigError::Unsupported("the selected bilinear is not admissible".into()));
    }
    checks.push(fierz_suite(cfg, FIERZ_SAMPLES, 0)?);

    let flat = flat_model(cfg)?;
    let h22 = solve_H22(&flat);
    let expected_dim = match cfg.module {
        ModuleChoice::Full => 1,
        ModuleChoice::ChiralPlus => 0,
    };
    checks.push(Check::exact(
        "cohomology_dimension",
        h22.dimension == expected_dim,
        format!("dim H²,² = {} (expected {expected_dim})", h22.dimension),
    ));
    if cfg.module == ModuleChoice::Full {
        let closed = canonical_cocycle(&flat, &q(1));
        let matches = h22.canonical_rep.as_ref() == Some(&closed);
        checks.push(Check::exact("cohomology_generator", matches, "normalised generator against the closed form"));

        let cocycle = canonical_cocycle(&flat, &cfg.b);
        match compute_theta(&cocycle, &flat) {
            Ok(theta) => {
                let integ = check_integrability(&theta, &cocycle, &flat);
                let t01 = theta.rotation[0][1].clone();
                let expected = expected_rotation(&flat, &cfg.b);
                checks.push(Check::exact(
                    "integrability",
                    integ.passed() && t01 == expected,
                    format!("θ_01 = {} (expected {})", to_fraction_string(&t01), to_fraction_string(&expected)),
                ));
                let from_cocycle = deformation_from_cocycle(&flat, &cocycle, &theta);
                let direct = deformation(cfg, &flat)?;
                checks.push(Check::exact(
                    "deformation_matches_cocycle",
                    from_cocycle == direct,
                    "brackets from (θ, β, γ) against the closed-form deformation",
                ));
            }
            Err(e) => checks.push(Check::exact("integrability", false, e.to_string())),
        }
    }

    let mut def = deformation(cfg, &flat)?;
    if cfg.fixture == Some(Fixture::CorruptedBracket) {
        def = corrupted_fixture(&def);
    }
    let jacobi = super_jacobi_check(&def);
    checks.push(Check::exact(
        "super_jacobi",
        jacobi.is_empty(),
        format!("{} violations in {} triples", jacobi.violations.len(), jacobi.triples_checked),
    ));
    Ok(checks)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeometryReport {
    pub geometry: String,
    pub chart: String,
    pub sigma_b: i8,
    pub b: f64,
    pub points: usize,
    pub scalar_curvature_target: Option<f64>,
    pub max_curvature_error: Option<f64>,
    pub max_fd_error: f64,
    pub max_rd_component: f64,
    pub max_obstruction: f64,
    pub killing_spinors: KillingSpinorEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub superalgebra: Option<SuperalgebraSummary>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuperalgebraSummary {
    pub closure_residual: f64,
    pub jacobi_residual: f64,
    pub even_alignment_residual: f64,
    pub full_alignment_residual: f64,
}

pub const GEOMETRY_POINTS: usize = 20;

fn build_geometry(cfg: &RunConfig, kind: GeometryKind) -> Result<ModelGeometry, ConfigError> {
    let b = to_f64(&cfg.b);
    let geom = if cfg.fixture == Some(Fixture::PerturbedMetric) {
        perturbed_h2(b, 0.3)
    } else {
        model_space(kind, cfg.signature, b)
    };
    geom.map_err(|e| ConfigError::Unsupported(e.to_string()))
}

pub fn geometry_suite(cfg: &RunConfig, kind: GeometryKind) -> Result<GeometryReport, ConfigError> {
    let geom = build_geometry(cfg, kind)?;
    let sigma_b = classify_bilinear(&build_gamma_rep(cfg.signature), &cfg.bilinear_form())
        .map_err(config_error)?
        .symmetry
        .ok_or_else(|| ConfigError::Unsupported("bilinear has no definite symmetry".into()))?;
    let conn = AdmissibleConnection::canonical(geom.clone(), sigma_b);
    let tol = &cfg.tolerances;
    let points = sample_grid(&geom, GEOMETRY_POINTS, 0.6);
    let fail = |e: ksa_core::GeometryError| ConfigError::Unsupported(e.to_string());

    let target = geom.scalar_curvature_target;
    let (mut curv_err, mut fd_err, mut rd_max, mut obs_max) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &p in &points {
        let s = scalar_curvature(&geom, p).map_err(fail)?;
        if let Some(t) = target {
            curv_err = curv_err.max((s.closed_form - t).abs());
        }
        fd_err = fd_err.max((s.finite_difference - s.closed_form).abs());
        let rd = curvature_RD(&conn, p).map_err(fail)?;
        rd_max = rd_max.max(rd.max_component);
        obs_max = obs_max.max(rd.obstruction.abs());
    }
    let mut checks = Vec::new();
    if target.is_some() {
        checks.push(Check::bounded("scalar_curvature", curv_err, tol.curvature));
    }
    checks.push(Check::bounded("scalar_curvature_fd", fd_err, tol.finite_difference));
    checks.push(Check::bounded("rd_vanishes", rd_max, tol.rd));
    checks.push(Check::bounded("determinant_obstruction", obs_max, tol.obstruction));

    let base = geom.base_point();
    let killing = killing_spinor_dimension(&conn, base, &sample_grid(&geom, 9, 0.4), &[0.05]).map_err(fail)?;
    checks.push(Check::exact("killing_spinor_dimension", killing.dimension == 2, format!("dimension {}", killing.dimension)));

    let superalgebra = match assemble_killing_superalgebra(&conn) {
        Ok(ksa) => {
            checks.push(Check::bounded("killing_closure", ksa.closure_residual, tol.closure));
            checks.push(Check::bounded("killing_jacobi", ksa.jacobi_residual, tol.jacobi));
            checks.push(Check::bounded("killing_alignment_even", ksa.alignment.even_residual, tol.alignment));
            checks.push(Check::bounded("killing_alignment_full", ksa.alignment.full_residual, tol.alignment));
            Some(SuperalgebraSummary {
                closure_residual: ksa.closure_residual,
                jacobi_residual: ksa.jacobi_residual,
                even_alignment_residual: ksa.alignment.even_residual,
                full_alignment_residual: ksa.alignment.full_residual,
            })
        }
        Err(e) => {
            checks.push(Check::exact("killing_superalgebra", false, e.to_string()));
            None
        }
    };
    Ok(GeometryReport {
        geometry: geom.kind.name().into(),
        chart: geom.chart.into(),
        sigma_b,
        b: geom.scale,
        points: points.len(),
        scalar_curvature_target: target,
        max_curvature_error: target.map(|_| curv_err),
        max_fd_error: fd_err,
        max_rd_component: rd_max,
        max_obstruction: obs_max,
        killing_spinors: killing,
        superalgebra,
        checks,
    })
}

pub fn run_verify(cfg: &RunConfig) -> Result<VerifyReport, ConfigError> {
    let mut checks = algebra_checks(cfg)?;
    if let Some(kind) = cfg.geometry {
        let g = geometry_suite(cfg, kind)?;
        checks.extend(g.checks.into_iter().map(|mut c| {
            c.name = format!("geometry.{}", c.name);
            c
        }));
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { config: cfg.summary(), passed, checks })
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
    s.push('\n');
    s
}

fn checks_csv(checks: &[Check]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["name", "passed", "residual", "detail"]).expect("in-memory write");
    for c in checks {
        let residual = c.residual.map(|r| format!("{r:e}")).unwrap_or_default();
        w.write_record([c.name.as_str(), if c.passed { "true" } else { "false" }, &residual, &c.detail])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn checks_markdown(checks: &[Check]) -> String {
    let mut out = String::from("| check | status | residual | detail |\n|---|---|---|---|\n");
    for c in checks {
        let residual = c.residual.map(|r| format!("{r:.3e}")).unwrap_or_else(|| "—".into());
        out.push_str(&format!("| {} | {} | {residual} | {} |\n", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail));
    }
    out
}

fn render_checks<T: Serialize>(format: Format, doc: &T, checks: &[Check]) -> String {
    match format {
        Format::Json => json(doc),
        Format::Csv => checks_csv(checks),
        Format::Markdown => checks_markdown(checks),
    }
}

pub fn cmd_tables(cfg: &RunConfig) -> (i32, String) {
    let tables = all_tables();
    let out = match cfg.format.unwrap_or(Format::Markdown) {
        Format::Markdown => tables.to_markdown(),
        Format::Csv => tables.to_csv(),
        Format::Json => json(&tables),
    };
    (EXIT_PASS, out)
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<(i32, String), ConfigError> {
    let report = run_verify(cfg)?;
    let code = if report.passed { EXIT_PASS } else { EXIT_CHECK_FAILED };
    Ok((code, render_checks(cfg.format.unwrap_or(Format::Json), &report, &report.checks)))
}

pub fn deformation_doc(cfg: &RunConfig) -> Result<ksa_core::superalgebra::StructureConstantsDoc, ConfigError> {
    let flat = flat_model(cfg)?;
    let def = deformation(cfg, &flat)?;
    let (label, r) = classify_even_part(&def);
    let mut doc = def.to_doc();
    doc.geometry = Some(GeometryDoc { label, scalar_curvature: to_fraction_string(&r) });
    Ok(doc)
}

pub fn cmd_deform(cfg: &RunConfig) -> Result<(i32, String), ConfigError> {
    let doc = deformation_doc(cfg)?;
    let out = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => json(&doc),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["left", "right", "element", "coefficient"]).expect("in-memory write");
            for e in &doc.brackets {
                for (k, v) in &e.result {
                    w.write_record([&e.left, &e.right, k, v]).expect("in-memory write");
                }
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        Format::Markdown => {
            let mut out = String::from("| bracket | value |\n|---|---|\n");
            for e in &doc.brackets {
                let terms: Vec<String> = e.result.iter().map(|(k, v)| format!("({v}) {k}")).collect();
                out.push_str(&format!("| [{}, {}] | {} |\n", e.left, e.right, terms.join(" + ")));
            }
            if let Some(g) = &doc.geometry {
                out.push_str(&format!("\ngeometry: {} (R = {})\n", g.label.name(), g.scalar_curvature));
            }
            out
        }
    };
    Ok((EXIT_PASS, out))
}

pub fn cmd_cohomology(cfg: &RunConfig) -> Result<(i32, String), ConfigError> {
    let flat = flat_model(cfg)?;
    let doc = solve_H22(&flat).to_doc();
    let out = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => json(&doc),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["vector", "parameter", "value"]).expect("in-memory write");
            for (i, v) in doc.basis.iter().enumerate() {
                for (k, x) in v.entries() {
                    w.write_record([i.to_string().as_str(), k, &x]).expect("in-memory write");
                }
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        Format::Markdown => {
            let mut out = format!("dim H²,² = {} (rank {} on {} unknowns)\n", doc.dimension, doc.rank, doc.columns.len());
            if let Some(c) = &doc.canonical_rep {
                out.push_str("\n| parameter | value |\n|---|---|\n");
                for (k, x) in c.entries() {
                    out.push_str(&format!("| {k} | {x} |\n"));
                }
            }
            out
        }
    };
    Ok((EXIT_PASS, out))
}

pub fn cmd_geometry(cfg: &RunConfig) -> Result<(i32, String), ConfigError> {
    let kind = cfg
        .geometry
        .ok_or_else(|| ConfigError::Unsupported("the geometry command needs --geometry".into()))?;
    let report = geometry_suite(cfg, kind)?;
    let passed = report.checks.iter().all(|c| c.passed);
    let code = if passed { EXIT_PASS } else { EXIT_CHECK_FAILED };
    Ok((code, render_checks(cfg.format.unwrap_or(Format::Json), &report, &report.checks)))
}

/// `b = 0` flat model JSON has no deformation terms.
pub fn is_flat_doc(doc: &ksa_core::superalgebra::StructureConstantsDoc) -> bool {
    doc.deformation_parameter == "0"
        && doc.brackets.iter().all(|e| !(e.left.starts_with('P') && (e.right.starts_with('P') || e.right.starts_with('Q'))))
}
