//! Exact higher-order partial derivatives of tangent-bundle fields.
//!
//! Fields are written once against [`Scalar`] and evaluated on truncated
//! multivariate Taylor series ([`Jet`]). Every mixed partial up to the jet
//! order comes out of one evaluation, at round-off accuracy, so curvature
//! formulas that chain six derivative orders stay clean.

mod field;
pub mod fd;
mod jet;
mod scalar;
mod space;

pub use field::{
    homogeneity_check, homogeneity_residual, jet_of, partial, seed, EvalPoint, MultiIndex,
    TangentField, Var,
};
pub use jet::Jet;
pub use scalar::Scalar;
pub use space::{JetSpace, MAX_ORDER};
