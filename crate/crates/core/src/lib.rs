//! Exact algebra and numeric geometry for Killing superalgebras of
//! two-dimensional pseudo-Riemannian spin manifolds.

pub mod bilinears;
pub mod clifford;
pub mod error;
pub mod geometry;
pub mod integrability;
pub mod linalg;
pub mod rational;
pub mod spencer;
pub mod superalgebra;

pub use bilinears::{BilinearForm, DiracCurrent, Spinor};
pub use clifford::{build_gamma_rep, GammaRep, Mat2, SignatureKind};
pub use error::{AlgebraError, GeometryError};
pub use rational::Q;
pub use superalgebra::{GeometryLabel, ModuleChoice, StructureConstants};
