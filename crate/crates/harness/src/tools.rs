//! The `volume` and `geodesic` campaigns.

use std::f64::consts::PI;
use std::time::Instant;

use finsler_core::geometry::{integrate_geodesic, Trajectory};
use finsler_core::spectral::{bh_volume, ht_volume, ht_volume_closed};
use finsler_core::{Ansatz, Error, EvalPoint, TangentField};
use serde::{Deserialize, Serialize};

use crate::config::{GeodesicConfig, SuiteConfig};
use crate::error::{HarnessError, Result};
use crate::report::{CheckRecord, Expectation, VerificationReport};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeRow {
    pub epsilon: f64,
    pub ht_quadrature: f64,
    pub ht_closed: f64,
    pub bh_quadrature: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeArtifact {
    pub report: VerificationReport,
    pub rows: Vec<VolumeRow>,
}

impl VolumeArtifact {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epsilon,ht_quadrature,ht_closed,bh_quadrature\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.epsilon, r.ht_quadrature, r.ht_closed, r.bh_quadrature));
        }
        out
    }
}

/// Holmes-Thompson and Busemann-Hausdorff areas of the Finslerian sphere for
/// every configured epsilon.
pub fn run_volume(config: &SuiteConfig) -> Result<VolumeArtifact> {
    let start = Instant::now();
    config.validate()?;
    let rows: Vec<VolumeRow> = config
        .spectral
        .epsilons
        .iter()
        .map(|&e| VolumeRow {
            epsilon: e,
            ht_quadrature: ht_volume(e),
            ht_closed: ht_volume_closed(e),
            bh_quadrature: bh_volume(e),
        })
        .collect();
    let rel = |a: f64, b: f64| Ok::<f64, String>((a - b).abs() / b);
    let checks = vec![
        CheckRecord::from_residuals(
            "ht_volume",
            Expectation::AtMost,
            config.tolerance("ht_volume"),
            rows.iter().map(|r| rel(r.ht_quadrature, r.ht_closed)).collect(),
        ),
        CheckRecord::from_residuals(
            "bh_volume",
            Expectation::AtMost,
            config.tolerance("bh_volume"),
            rows.iter().map(|r| rel(r.bh_quadrature, 4.0 * PI)).collect(),
        ),
    ];
    Ok(VolumeArtifact {
        report: VerificationReport::new("volume", checks, config, start.elapsed().as_secs_f64()),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSample {
    pub tau: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub lagrangian: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicArtifact {
    pub report: VerificationReport,
    pub initial: GeodesicSample,
    pub samples: Vec<GeodesicSample>,
}

impl GeodesicArtifact {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tau,t,r,theta,phi,y_t,y_r,y_theta,y_phi,lagrangian\n");
        for s in &self.samples {
            let cols: Vec<String> = std::iter::once(s.tau)
                .chain(s.x.iter().copied())
                .chain(s.y.iter().copied())
                .chain(std::iter::once(s.lagrangian))
                .map(|v| v.to_string())
                .collect();
            out.push_str(&cols.join(","));
            out.push('\n');
        }
        out
    }
}

/// Timelike circular orbit at `(r, theta)` in the plane `y^theta = 0`,
/// normalized to `L = -1`.
pub fn circular_orbit(a: &Ansatz, r: f64, theta: f64) -> Result<EvalPoint> {
    let p = &a.profile;
    let (f, df) = (p.f(r), p.df(r));
    let denom = f - 0.5 * r * df;
    if !(f > 0.0 && df > 0.0 && denom > 0.0) {
        return Err(HarnessError::config(format!(
            "no timelike circular orbit at r = {r}; give geodesic.x0 and geodesic.y0"
        )));
    }
    let yt = denom.recip().sqrt();
    let base = a.base.lagrangian(&theta, &0.0, &1.0);
    let y_phi = (df / (2.0 * r) / base).sqrt() * yt;
    Ok(EvalPoint::new(vec![0.0, r, theta, 0.0], vec![yt, 0.0, 0.0, y_phi])?)
}

fn initial_state(a: &Ansatz, g: &GeodesicConfig) -> Result<EvalPoint> {
    match (g.x0, g.y0) {
        (Some(x), Some(y)) => Ok(EvalPoint::new(x.to_vec(), y.to_vec())?),
        _ => circular_orbit(a, g.r, g.theta),
    }
}

fn resample(a: &Ansatz, t: &Trajectory, count: usize) -> Vec<GeodesicSample> {
    let end = t.final_tau();
    (0..count)
        .filter_map(|i| {
            let tau = end * i as f64 / (count - 1) as f64;
            let p = t.interpolate(tau)?;
            let lagrangian = a.value_at(&p).unwrap_or(f64::NAN);
            Some(GeodesicSample {
                tau,
                x: p.x,
                y: p.y,
                lagrangian,
            })
        })
        .collect()
}

/// Integrates one geodesic and checks conservation of `L` along it; an
/// integration failure keeps the partial trajectory and marks the check as
/// an error.
pub fn run_geodesic(config: &SuiteConfig) -> Result<GeodesicArtifact> {
    let start = Instant::now();
    config.validate()?;
    let g = &config.geodesic;
    let a = config.solution.ansatz()?;
    let initial = initial_state(&a, g)?;
    let tol = config.tolerance("geodesic_drift");
    let (check, samples) = match integrate_geodesic(&a, &initial, g.span, g.tol) {
        Ok(t) => {
            let drift = t.max_relative_drift(&a);
            let check = CheckRecord::from_residuals("geodesic_drift", Expectation::AtMost, tol, vec![drift]);
            (check, resample(&a, &t, g.samples))
        }
        Err(Error::Integration { tau, reason, partial }) => {
            let samples = resample(&a, &partial, g.samples);
            let err = format!("integration stopped at tau = {tau}: {reason}");
            (CheckRecord::failed("geodesic_drift", tol, err), samples)
        }
        Err(e) => (CheckRecord::failed("geodesic_drift", tol, e), Vec::new()),
    };
    Ok(GeodesicArtifact {
        report: VerificationReport::new("geodesic", vec![check], config, start.elapsed().as_secs_f64()),
        initial: GeodesicSample {
            tau: 0.0,
            lagrangian: a.value_at(&initial)?,
            x: initial.x,
            y: initial.y,
        },
        samples,
    })
}
