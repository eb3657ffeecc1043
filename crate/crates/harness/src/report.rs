//! Machine-readable campaign reports.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::SuiteConfig;

/// Bumped whenever a field of [`VerificationReport`] changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// At least one point could not be evaluated.
    Error,
}

/// Whether a check asserts small residuals or, as a negative test, large ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    /// Pass iff `max_residual <= tolerance`.
    AtMost,
    /// Pass iff `min_residual > tolerance`.
    Exceeds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub expectation: Expectation,
    pub n_points: usize,
    pub n_errors: usize,
    #[serde(deserialize_with = "nullable_f64")]
    pub max_residual: f64,
    #[serde(deserialize_with = "nullable_f64")]
    pub min_residual: f64,
    #[serde(deserialize_with = "nullable_f64")]
    pub tolerance: f64,
    pub verdict: Verdict,
    /// First per-point error, or extra context such as a measured rank.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    /// Folds per-point residuals into a record.
    pub fn from_residuals<E: std::fmt::Display>(
        name: &str,
        expectation: Expectation,
        tolerance: f64,
        residuals: Vec<Result<f64, E>>,
    ) -> Self {
        let n_points = residuals.len();
        let mut max_residual = f64::NEG_INFINITY;
        let mut min_residual = f64::INFINITY;
        let mut n_errors = 0;
        let mut note = None;
        for r in residuals {
            match r {
                Ok(v) => {
                    // NaN must not slip past the bound
                    let v = if v.is_nan() { f64::INFINITY } else { v };
                    max_residual = max_residual.max(v);
                    min_residual = min_residual.min(v);
                }
                Err(e) => {
                    n_errors += 1;
                    note.get_or_insert_with(|| e.to_string());
                }
            }
        }
        let n_ok = n_points - n_errors;
        let verdict = if n_errors > 0 || n_ok == 0 {
            Verdict::Error
        } else {
            let ok = match expectation {
                Expectation::AtMost => max_residual <= tolerance,
                Expectation::Exceeds => min_residual > tolerance,
            };
            if ok {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        };
        if n_ok == 0 {
            max_residual = f64::NAN;
            min_residual = f64::NAN;
        }
        CheckRecord {
            name: name.to_string(),
            expectation,
            n_points,
            n_errors,
            max_residual,
            min_residual,
            tolerance,
            verdict,
            note,
        }
    }

    /// A record for a single scalar measurement.
    pub fn single(name: &str, residual: f64, tolerance: f64) -> Self {
        Self::from_residuals::<String>(name, Expectation::AtMost, tolerance, vec![Ok(residual)])
    }

    /// A record for a measurement that could not be made at all.
    pub fn failed(name: &str, tolerance: f64, err: impl std::fmt::Display) -> Self {
        Self::from_residuals(name, Expectation::AtMost, tolerance, vec![Err::<f64, _>(err)])
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    pub os: String,
    pub arch: String,
    pub threads: usize,
}

impl Environment {
    pub fn current() -> Self {
        Environment {
            version: env!("CARGO_PKG_VERSION").to_string(),
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
            threads: rayon::current_num_threads(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub command: String,
    pub checks: Vec<CheckRecord>,
    pub config: SuiteConfig,
    pub environment: Environment,
    pub wall_time_s: f64,
    /// SHA-256 over schema, command, checks, config (less its output
    /// section) and crate version; equal for reruns of the same configuration
    /// whatever the machine, timing or destination.
    pub payload_hash: String,
}

#[derive(Serialize)]
struct Payload<'a> {
    schema_version: u32,
    version: &'a str,
    command: &'a str,
    checks: &'a [CheckRecord],
    config: &'a SuiteConfig,
}

impl VerificationReport {
    pub fn new(command: &str, checks: Vec<CheckRecord>, config: &SuiteConfig, wall_time_s: f64) -> Self {
        let environment = Environment::current();
        // where the artifact goes does not change what it says
        let hashed = SuiteConfig {
            output: Default::default(),
            ..config.clone()
        };
        let payload = Payload {
            schema_version: SCHEMA_VERSION,
            version: &environment.version,
            command,
            checks: &checks,
            config: &hashed,
        };
        let bytes = serde_json::to_vec(&payload).expect("report payload serializes");
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            payload_hash: hex::encode(Sha256::digest(&bytes)),
            checks,
            config: config.clone(),
            environment,
            wall_time_s,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One row per check, columns as in the header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,n_points,n_errors,max_residual,min_residual,tolerance,verdict\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{:e},{:e},{:e},{}\n",
                c.name,
                c.n_points,
                c.n_errors,
                c.max_residual,
                c.min_residual,
                c.tolerance,
                verdict_label(c.verdict)
            ));
        }
        out
    }
}

/// JSON has no NaN or infinity; serde_json writes them as `null`.
fn nullable_f64<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

pub fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Error => "error",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_tolerance() {
        let r = CheckRecord::from_residuals::<String>("a", Expectation::AtMost, 1e-8, vec![Ok(1e-9), Ok(1e-8)]);
        assert_eq!(r.verdict, Verdict::Pass);
        let r = CheckRecord::from_residuals::<String>("a", Expectation::AtMost, 1e-8, vec![Ok(2e-8)]);
        assert_eq!(r.verdict, Verdict::Fail);
        let r = CheckRecord::from_residuals::<String>("a", Expectation::AtMost, 1e-8, vec![Ok(f64::NAN)]);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn negative_checks_need_every_point_above() {
        let r = CheckRecord::from_residuals::<String>("n", Expectation::Exceeds, 1e-3, vec![Ok(0.1), Ok(0.01)]);
        assert_eq!(r.verdict, Verdict::Pass);
        let r = CheckRecord::from_residuals::<String>("n", Expectation::Exceeds, 1e-3, vec![Ok(0.1), Ok(1e-4)]);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn point_errors_downgrade() {
        let r = CheckRecord::from_residuals("e", Expectation::AtMost, 1.0, vec![Ok(0.0), Err("off chart")]);
        assert_eq!(r.verdict, Verdict::Error);
        assert_eq!(r.n_errors, 1);
        assert_eq!(r.note.as_deref(), Some("off chart"));
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn hash_ignores_timing() {
        let c = SuiteConfig::default();
        let a = VerificationReport::new("verify", vec![CheckRecord::single("x", 0.0, 1.0)], &c, 1.0);
        let b = VerificationReport::new("verify", vec![CheckRecord::single("x", 0.0, 1.0)], &c, 9.0);
        assert_eq!(a.payload_hash, b.payload_hash);
        let d = VerificationReport::new("verify", vec![CheckRecord::single("x", 0.5, 1.0)], &c, 1.0);
        assert_ne!(a.payload_hash, d.payload_hash);
    }
}
