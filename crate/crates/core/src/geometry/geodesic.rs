//! Adaptive integration of the geodesic equation `x'' = -2 G(x, x')`.
//!
//! Dormand-Prince 5(4) with FSAL, mixed absolute/relative error control,
//! and cubic Hermite dense output between accepted steps.

use crate::error::{Error, Result};
use crate::jets::EvalPoint;

use super::{spray, FundamentalFunction};

#[derive(Clone, Debug)]
pub struct GeodesicOptions {
    /// Absolute and relative local error tolerance.
    pub tol: f64,
    /// First trial step; defaults to `1e-3 * span`.
    pub initial_step: Option<f64>,
    /// Step size below which integration gives up.
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for GeodesicOptions {
    fn default() -> Self {
        GeodesicOptions {
            tol: 1e-10,
            initial_step: None,
            min_step: 1e-12,
            max_steps: 1_000_000,
        }
    }
}

/// One accepted state `(x, y)` and its rate `(y, -2G)`.
#[derive(Clone, Debug)]
pub struct TrajectorySample {
    pub tau: f64,
    pub state: Vec<f64>,
    pub rate: Vec<f64>,
}

#[derive(Clone)]
pub struct Trajectory {
    pub dim: usize,
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn final_tau(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.tau)
    }

    pub fn point(&self, index: usize) -> EvalPoint {
        let s = &self.samples[index].state;
        EvalPoint {
            x: s[..self.dim].to_vec(),
            y: s[self.dim..].to_vec(),
        }
    }

    pub fn last_point(&self) -> EvalPoint {
        self.point(self.samples.len() - 1)
    }

    /// Cubic Hermite interpolation of the state at `tau`.
    pub fn interpolate(&self, tau: f64) -> Option<EvalPoint> {
        let first = self.samples.first()?;
        if tau < first.tau || tau > self.final_tau() {
            return None;
        }
        let k = self
            .samples
            .partition_point(|s| s.tau <= tau)
            .clamp(1, self.samples.len().max(2) - 1);
        if self.samples.len() == 1 {
            return Some(self.point(0));
        }
        let (a, b) = (&self.samples[k - 1], &self.samples[k]);
        let h = b.tau - a.tau;
        let t = (tau - a.tau) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        let state: Vec<f64> = (0..a.state.len())
            .map(|i| {
                h00 * a.state[i] + h10 * h * a.rate[i] + h01 * b.state[i] + h11 * h * b.rate[i]
            })
            .collect();
        Some(EvalPoint {
            x: state[..self.dim].to_vec(),
            y: state[self.dim..].to_vec(),
        })
    }

    /// `max |L(tau) - L(0)| / |L(0)|` over the accepted samples.
    pub fn max_relative_drift<F: FundamentalFunction + ?Sized>(&self, field: &F) -> Result<f64> {
        let l0 = field.value_at(&self.point(0))?;
        let mut worst = 0.0f64;
        for i in 1..self.samples.len() {
            let l = field.value_at(&self.point(i))?;
            worst = worst.max((l - l0).abs() / l0.abs());
        }
        Ok(worst)
    }
}

impl std::fmt::Debug for Trajectory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let last = self.samples.last().map(|s| &s.state);
        f.debug_struct("Trajectory")
            .field("dim", &self.dim)
            .field("samples", &self.samples.len())
            .field("final_tau", &self.final_tau())
            .field("final_state", &last)
            .finish()
    }
}

fn rate<F: FundamentalFunction + ?Sized>(field: &F, state: &[f64], dim: usize) -> Result<Vec<f64>> {
    let at = EvalPoint {
        x: state[..dim].to_vec(),
        y: state[dim..].to_vec(),
    };
    let g = spray(field, &at)?;
    let mut out = Vec::with_capacity(2 * dim);
    out.extend_from_slice(&state[dim..]);
    out.extend(g.iter().map(|v| -2.0 * v));
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("non-finite spray"));
    }
    Ok(out)
}

/// Stage coefficients; the last row is also the fifth-order solution, so the
/// seventh stage is evaluated at the step end point (FSAL).
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates the geodesic through `initial` for affine length `span` with
/// the default options at tolerance `tol`.
pub fn integrate_geodesic<F: FundamentalFunction + ?Sized>(
    field: &F,
    initial: &EvalPoint,
    span: f64,
    tol: f64,
) -> Result<Trajectory> {
    integrate_geodesic_with(
        field,
        initial,
        span,
        &GeodesicOptions {
            tol,
            ..GeodesicOptions::default()
        },
    )
}

pub fn integrate_geodesic_with<F: FundamentalFunction + ?Sized>(
    field: &F,
    initial: &EvalPoint,
    span: f64,
    opts: &GeodesicOptions,
) -> Result<Trajectory> {
    if !(opts.tol > 0.0) {
        return Err(Error::config("geodesic tolerance must be positive"));
    }
    if !(span > 0.0) {
        return Err(Error::config("geodesic span must be positive"));
    }
    let dim = initial.dim();
    let mut state: Vec<f64> = initial.x.iter().chain(initial.y.iter()).copied().collect();
    let mut k0 = rate(field, &state, dim)?;
    let mut traj = Trajectory {
        dim,
        samples: vec![TrajectorySample {
            tau: 0.0,
            state: state.clone(),
            rate: k0.clone(),
        }],
    };

    let m = state.len();
    let mut tau = 0.0;
    let mut h = opts.initial_step.unwrap_or(1e-3 * span).min(span);
    let mut steps = 0usize;
    let mut k = vec![vec![0.0; m]; 7];
    let mut trial = vec![0.0; m];

    while tau < span {
        if steps >= opts.max_steps {
            return Err(Error::Integration {
                tau,
                reason: format!("step budget {} exhausted", opts.max_steps),
                partial: Box::new(traj),
            });
        }
        if h < opts.min_step {
            return Err(Error::Integration {
                tau,
                reason: format!("step size {h:e} underflow"),
                partial: Box::new(traj),
            });
        }
        h = h.min(span - tau);
        steps += 1;

        k[0].copy_from_slice(&k0);
        let mut failed = false;
        for stage in 1..7 {
            for i in 0..m {
                let mut acc = 0.0;
                for j in 0..stage {
                    acc += A[stage][j] * k[j][i];
                }
                trial[i] = state[i] + h * acc;
            }
            match rate(field, &trial, dim) {
                Ok(r) => k[stage] = r,
                Err(_) => {
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            h *= 0.25;
            continue;
        }

        // trial now holds the fifth-order solution (stage 7 abscissa is 1)
        let mut err_sq = 0.0;
        for i in 0..m {
            let mut e = 0.0;
            for (s, ks) in k.iter().enumerate() {
                e += E[s] * ks[i];
            }
            let scale = opts.tol * (1.0 + state[i].abs().max(trial[i].abs()));
            err_sq += (h * e / scale).powi(2);
        }
        let err = (err_sq / m as f64).sqrt();

        if err <= 1.0 {
            tau += h;
            state.copy_from_slice(&trial);
            k0.copy_from_slice(&k[6]);
            traj.samples.push(TrajectorySample {
                tau,
                state: state.clone(),
                rate: k0.clone(),
            });
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    Ok(traj)
}
