use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("bilinear form is zero")]
    ZeroBilinear,
    #[error("bilinear form is not admissible")]
    NotAdmissible,
    #[error("chiral spinor modules exist only in Lorentzian signature")]
    ChiralInRiemannian,
    #[error("the chiral flat model has H^{{2,2}} = 0 and admits no deformation with b = {0}")]
    ChiralDeformation(String),
    #[error("parameters do not satisfy the normalised cocycle conditions")]
    NotACocycle,
    #[error("Θ does not vanish on the Dirac kernel, so it does not factor through κ")]
    NoFactorisation,
    #[error("malformed structure constants: {0}")]
    Malformed(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("{kind} requires {needed} signature")]
    IncompatibleSignature { kind: &'static str, needed: &'static str },
    #[error("curved model spaces need b != 0")]
    ZeroCurvatureScale,
    #[error("point ({0}, {1}) lies outside the chart")]
    OutOfChart(f64, f64),
    #[error("non-finite spinor during transport")]
    NonFiniteState,
    #[error("geometry is not maximally supersymmetric (Killing spinor dimension {0})")]
    NotMaxSusy(usize),
    #[error("supplied Killing vectors are linearly dependent at the base point")]
    BasisDegenerate,
}
