//! Numerical engine for static, spherically-structured Finsler spacetimes:
//! exact jets of `F^2`, spray and curvature, a catalog of solutions with
//! closed-form references, Killing symmetry counting, and the Laplacian on
//! the Randers sphere.

pub mod catalog;
pub mod error;
pub mod geometry;
pub mod jets;
pub mod spectral;
pub mod symmetry;

pub use catalog::{build_ansatz, Ansatz, ProfileKind, RadialProfile, Surface, TwoDBase};
pub use error::{Error, Result};
pub use geometry::FundamentalFunction;
pub use jets::{EvalPoint, Scalar, TangentField};
