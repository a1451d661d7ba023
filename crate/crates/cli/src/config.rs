//! Run configuration: a TOML file layered under command-line flags.

use std::collections::BTreeMap;
use std::path::Path;

use ksa_core::bilinears::bilinear_with_symmetry;
use ksa_core::geometry::GeometryKind;
use ksa_core::rational::{parse_rational, q, to_fraction_string};
use ksa_core::{build_gamma_rep, BilinearForm, Mat2, ModuleChoice, SignatureKind, Q};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("malformed config file: {0}")]
    Toml(String),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },
    #[error("unknown tolerance `{0}`")]
    UnknownTolerance(String),
    #[error(
        "the chiral module S₊ has H²,² = 0, so there is no filtered deformation with b = {0}; use b = 0 or the full module"
    )]
    ChiralObstruction(String),
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl Format {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        match text.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(ConfigError::Invalid { key: "format", reason: format!("expected json, csv or markdown, got {other:?}") }),
        }
    }
}

/// Deliberately broken inputs used as negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fixture {
    /// Flip the sign of one bracket of the deformed tensor.
    CorruptedBracket,
    /// Replace the H² chart by one with a non-constant curvature.
    PerturbedMetric,
}

impl Fixture {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        match text.trim() {
            "corrupted-bracket" => Ok(Fixture::CorruptedBracket),
            "perturbed-metric" => Ok(Fixture::PerturbedMetric),
            other => Err(ConfigError::Invalid {
                key: "fixture",
                reason: format!("expected corrupted-bracket or perturbed-metric, got {other:?}"),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BilinearSelector {
    Symmetry(i8),
    Matrix(Mat2),
}

impl BilinearSelector {
    /// Accepts `+`, `-`, `−`, `+1`, `-1`, or four rationals `a,b;c,d`.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let t = text.trim();
        match t {
            "+" | "+1" | "1" | "plus" | "symmetric" => return Ok(BilinearSelector::Symmetry(1)),
            "-" | "−" | "-1" | "minus" | "skew" => return Ok(BilinearSelector::Symmetry(-1)),
            _ => {}
        }
        let entries: Vec<&str> = t.split([',', ';']).collect();
        if entries.len() != 4 {
            return Err(ConfigError::Invalid {
                key: "bilinear",
                reason: format!("expected +, - or a matrix `a,b;c,d`, got {t:?}"),
            });
        }
        let mut vals = Vec::with_capacity(4);
        for e in entries {
            vals.push(parse_rational(e).map_err(|reason| ConfigError::Invalid { key: "bilinear", reason })?);
        }
        let [a, b, c, d]: [Q; 4] = vals.try_into().expect("four entries");
        Ok(BilinearSelector::Matrix(Mat2::new(a, b, c, d)))
    }

    pub fn resolve(&self, signature: SignatureKind) -> BilinearForm {
        match self {
            BilinearSelector::Symmetry(s) => bilinear_with_symmetry(&build_gamma_rep(signature), *s),
            BilinearSelector::Matrix(m) => BilinearForm::new(m.clone()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            BilinearSelector::Symmetry(1) => "+".into(),
            BilinearSelector::Symmetry(_) => "-".into(),
            BilinearSelector::Matrix(m) => {
                let e: Vec<String> = m.0.iter().flatten().map(to_fraction_string).collect();
                format!("{},{};{},{}", e[0], e[1], e[2], e[3])
            }
        }
    }
}

pub fn parse_signature(text: &str) -> Result<SignatureKind, ConfigError> {
    let t: String = text.chars().filter(|c| !c.is_whitespace() && *c != '(' && *c != ')').collect();
    match t.to_ascii_lowercase().as_str() {
        "1,1" | "lorentzian" | "lorentzian11" => Ok(SignatureKind::Lorentzian11),
        "0,2" | "riemannian" | "riemannian02" => Ok(SignatureKind::Riemannian02),
        _ => Err(ConfigError::Invalid { key: "signature", reason: format!("expected (1,1) or (0,2), got {text:?}") }),
    }
}

pub fn parse_module(text: &str) -> Result<ModuleChoice, ConfigError> {
    match text.trim().to_ascii_lowercase().as_str() {
        "full" | "s" => Ok(ModuleChoice::Full),
        "chiral" | "chiral-plus" | "s+" => Ok(ModuleChoice::ChiralPlus),
        other => Err(ConfigError::Invalid { key: "module", reason: format!("expected full or chiral, got {other:?}") }),
    }
}

/// `none` clears a geometry set in a config file.
pub fn parse_geometry(text: &str) -> Result<Option<GeometryKind>, ConfigError> {
    if text.trim().eq_ignore_ascii_case("none") {
        return Ok(None);
    }
    GeometryKind::parse(text).map(Some).ok_or_else(|| ConfigError::Invalid {
        key: "geometry",
        reason: format!("expected flat, H2, dS2, AdS2 or none, got {text:?}"),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Closed-form scalar curvature against `±8b²`.
    pub curvature: f64,
    /// Closed-form scalar curvature against its finite-difference estimate.
    pub finite_difference: f64,
    /// Entries of `R^D`.
    pub rd: f64,
    pub obstruction: f64,
    pub closure: f64,
    pub jacobi: f64,
    pub alignment: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { curvature: 1e-6, finite_difference: 1e-4, rd: 1e-8, obstruction: 1e-10, closure: 1e-4, jacobi: 1e-3, alignment: 1e-3 }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 7] = ["curvature", "finite_difference", "rd", "obstruction", "closure", "jacobi", "alignment"];

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), ConfigError> {
        if !(value.is_finite() && value > 0.0) {
            return Err(ConfigError::Invalid { key: "tolerance", reason: format!("{name} must be positive, got {value}") });
        }
        let slot = match name.trim().replace('-', "_").as_str() {
            "curvature" => &mut self.curvature,
            "finite_difference" => &mut self.finite_difference,
            "rd" => &mut self.rd,
            "obstruction" => &mut self.obstruction,
            "closure" => &mut self.closure,
            "jacobi" => &mut self.jacobi,
            "alignment" => &mut self.alignment,
            _ => return Err(ConfigError::UnknownTolerance(name.to_string())),
        };
        *slot = value;
        Ok(())
    }
}

/// `name=value` as given to `--tolerance`.
pub fn parse_tolerance_flag(text: &str) -> Result<(String, f64), ConfigError> {
    let (name, value) = text.split_once('=').ok_or_else(|| ConfigError::Invalid {
        key: "tolerance",
        reason: format!("expected name=value, got {text:?}"),
    })?;
    let value: f64 = value.trim().parse().map_err(|_| ConfigError::Invalid {
        key: "tolerance",
        reason: format!("bad number in {text:?}"),
    })?;
    Ok((name.trim().to_string(), value))
}

/// One layer of settings; unset fields fall through to the layer below.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub signature: Option<String>,
    pub bilinear: Option<String>,
    pub module: Option<String>,
    pub b: Option<String>,
    pub geometry: Option<String>,
    pub format: Option<String>,
    pub fixture: Option<String>,
    pub tolerances: Vec<(String, f64)>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    signature: Option<String>,
    bilinear: Option<toml::Value>,
    module: Option<String>,
    b: Option<toml::Value>,
    geometry: Option<String>,
    format: Option<String>,
    fixture: Option<String>,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
}

fn scalar_text(key: &'static str, v: toml::Value) -> Result<String, ConfigError> {
    match v {
        toml::Value::String(s) => Ok(s),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        other => Err(ConfigError::Invalid { key, reason: format!("expected a string or number, got {other}") }),
    }
}

impl Overrides {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let file: FileConfig = toml::from_str(text).map_err(|e| ConfigError::Toml(e.message().to_string()))?;
        Ok(Overrides {
            signature: file.signature,
            bilinear: file.bilinear.map(|v| scalar_text("bilinear", v)).transpose()?,
            module: file.module,
            b: file.b.map(|v| scalar_text("b", v)).transpose()?,
            geometry: file.geometry,
            format: file.format,
            fixture: file.fixture,
            tolerances: file.tolerances.into_iter().collect(),
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), reason: e.to_string() })?;
        Self::from_toml(&text)
    }

    /// `self` on top of `below`.
    pub fn over(self, below: Overrides) -> Overrides {
        let mut tolerances = below.tolerances;
        tolerances.extend(self.tolerances);
        Overrides {
            signature: self.signature.or(below.signature),
            bilinear: self.bilinear.or(below.bilinear),
            module: self.module.or(below.module),
            b: self.b.or(below.b),
            geometry: self.geometry.or(below.geometry),
            format: self.format.or(below.format),
            fixture: self.fixture.or(below.fixture),
            tolerances,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub signature: SignatureKind,
    pub bilinear: BilinearSelector,
    pub module: ModuleChoice,
    pub b: Q,
    pub geometry: Option<GeometryKind>,
    pub tolerances: Tolerances,
    /// `None` lets each command pick its natural format.
    pub format: Option<Format>,
    pub fixture: Option<Fixture>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            signature: SignatureKind::Lorentzian11,
            bilinear: BilinearSelector::Symmetry(-1),
            module: ModuleChoice::Full,
            b: q(1),
            geometry: None,
            tolerances: Tolerances::default(),
            format: None,
            fixture: None,
        }
    }
}

impl RunConfig {
    pub fn from_overrides(o: Overrides) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        if let Some(s) = &o.signature {
            cfg.signature = parse_signature(s)?;
        }
        if let Some(s) = &o.bilinear {
            cfg.bilinear = BilinearSelector::parse(s)?;
        }
        if let Some(s) = &o.module {
            cfg.module = parse_module(s)?;
        }
        if let Some(s) = &o.b {
            cfg.b = parse_rational(s).map_err(|reason| ConfigError::Invalid { key: "b", reason })?;
        }
        if let Some(s) = &o.geometry {
            cfg.geometry = parse_geometry(s)?;
        }
        if let Some(s) = &o.format {
            cfg.format = Some(Format::parse(s)?);
        }
        if let Some(s) = &o.fixture {
            cfg.fixture = if s.trim() == "none" { None } else { Some(Fixture::parse(s)?) };
        }
        for (name, value) in &o.tolerances {
            cfg.tolerances.set(name, *value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Flags on top of an optional config file.
    pub fn load(file: Option<&Path>, flags: Overrides) -> Result<Self, ConfigError> {
        let base = match file {
            Some(p) => Overrides::from_file(p)?,
            None => Overrides::default(),
        };
        Self::from_overrides(flags.over(base))
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.module == ModuleChoice::ChiralPlus {
            if self.signature != SignatureKind::Lorentzian11 {
                return Err(ConfigError::Unsupported("the chiral module exists only in signature (1,1)".into()));
            }
            if !self.b.is_zero() {
                return Err(ConfigError::ChiralObstruction(to_fraction_string(&self.b)));
            }
            if self.geometry.is_some() {
                return Err(ConfigError::Unsupported("the geometric suite needs the full module".into()));
            }
        }
        if let Some(g) = self.geometry {
            let needed = match g {
                GeometryKind::Flat => None,
                GeometryKind::H2 => Some(SignatureKind::Riemannian02),
                GeometryKind::DS2 | GeometryKind::AdS2 => Some(SignatureKind::Lorentzian11),
            };
            if needed.is_some_and(|n| n != self.signature) {
                return Err(ConfigError::Unsupported(format!("{} needs signature {}", g.name(), needed.unwrap())));
            }
            if g != GeometryKind::Flat && self.b.is_zero() {
                return Err(ConfigError::Unsupported(format!("{} needs b ≠ 0", g.name())));
            }
        }
        if self.fixture == Some(Fixture::PerturbedMetric) && self.geometry != Some(GeometryKind::H2) {
            return Err(ConfigError::Unsupported("the perturbed-metric fixture needs geometry = H2".into()));
        }
        Ok(())
    }

    pub fn bilinear_form(&self) -> BilinearForm {
        self.bilinear.resolve(self.signature)
    }

    pub fn summary(&self) -> ConfigSummary {
        ConfigSummary {
            signature: self.signature.name().to_string(),
            bilinear: self.bilinear.describe(),
            module: self.module,
            b: to_fraction_string(&self.b),
            geometry: self.geometry.map(|g| g.name().to_string()),
            fixture: self.fixture,
            tolerances: self.tolerances.clone(),
        }
    }
}

/// Echo of the resolved configuration inside reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigSummary {
    pub signature: String,
    pub bilinear: String,
    pub module: ModuleChoice,
    pub b: String,
    pub geometry: Option<String>,
    pub fixture: Option<Fixture>,
    pub tolerances: Tolerances,
}

#[cfg(test)]
mod tests {
    use super::*;
    use ksa_core::rational::frac;

    #[test]
    fn defaults() {
        let cfg = RunConfig::from_overrides(Overrides::default()).unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.bilinear_form().matrix, Mat2::omega());
    }

    #[test]
    fn file_then_flags() {
        let file = Overrides::from_toml(
            "# comment\nsignature = \"0,2\"\nbilinear = \"+\"\nb = \"1/2\"\ngeometry = \"H2\"\n[tolerances]\nrd = 1e-9\n",
        )
        .unwrap();
        let flags = Overrides { bilinear: Some("-".into()), tolerances: vec![("jacobi".into(), 1e-2)], ..Default::default() };
        let cfg = RunConfig::from_overrides(flags.over(file)).unwrap();
        assert_eq!(cfg.signature, SignatureKind::Riemannian02);
        assert_eq!(cfg.bilinear, BilinearSelector::Symmetry(-1));
        assert_eq!(cfg.b, frac(1, 2));
        assert_eq!(cfg.geometry, Some(GeometryKind::H2));
        assert_eq!(cfg.tolerances.rd, 1e-9);
        assert_eq!(cfg.tolerances.jacobi, 1e-2);
    }

    #[test]
    fn numeric_b_in_file() {
        let o = Overrides::from_toml("b = 3\n").unwrap();
        assert_eq!(RunConfig::from_overrides(o).unwrap().b, q(3));
        let o = Overrides::from_toml("b = 0.25\n").unwrap();
        assert_eq!(RunConfig::from_overrides(o).unwrap().b, frac(1, 4));
    }

    #[test]
    fn explicit_matrix() {
        let s = BilinearSelector::parse("0,1;1,0").unwrap();
        assert_eq!(s, BilinearSelector::Matrix(Mat2::sigma1()));
        assert_eq!(s.describe(), "0,1;1,0");
        assert!(BilinearSelector::parse("1,2,3").is_err());
    }

    #[test]
    fn errors() {
        assert!(matches!(Overrides::from_toml("signature = "), Err(ConfigError::Toml(_))));
        assert!(matches!(Overrides::from_toml("colour = \"red\""), Err(ConfigError::Toml(_))));
        let chiral = Overrides { module: Some("chiral".into()), ..Default::default() };
        let err = RunConfig::from_overrides(chiral).unwrap_err();
        assert_eq!(err, ConfigError::ChiralObstruction("1".into()));
        assert!(err.to_string().contains("H²,² = 0"));
        let chiral0 = Overrides { module: Some("chiral".into()), b: Some("0".into()), ..Default::default() };
        assert!(RunConfig::from_overrides(chiral0).is_ok());
        let bad_geom = Overrides { geometry: Some("H2".into()), ..Default::default() };
        assert!(matches!(RunConfig::from_overrides(bad_geom), Err(ConfigError::Unsupported(_))));
        let tol = Overrides { tolerances: vec![("nope".into(), 1.0)], ..Default::default() };
        assert_eq!(RunConfig::from_overrides(tol), Err(ConfigError::UnknownTolerance("nope".into())));
        assert!(parse_tolerance_flag("rd").is_err());
        assert_eq!(parse_tolerance_flag("rd=1e-3").unwrap(), ("rd".into(), 1e-3));
    }
}
