//! Verification campaigns over the Finsler spacetime catalog: suite
//! configuration, pointwise checks, spectra and reports.

pub mod config;
pub mod error;
pub mod grid;
pub mod report;
pub mod spectrum;
pub mod tools;
pub mod verify;

pub use config::{Format, SuiteConfig};
pub use error::{HarnessError, Result};
pub use report::{CheckRecord, Verdict, VerificationReport};
pub use spectrum::run_spectrum;
pub use tools::{run_geodesic, run_volume};
pub use verify::{run_killing, run_verify};
