//! Shared helpers for the integration tests: sampling grids and a textbook
//! Riemannian curvature oracle for `-f dt^2 + dr^2/f + r^2 dOmega^2`.

#![allow(dead_code)]

use std::f64::consts::TAU;

use finsler_core::{EvalPoint, RadialProfile, TangentField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `r` log-spaced in `[r_lo, r_hi]`, random angles and `per_x` random
/// directions at each position; points the field rejects are skipped.
pub fn radial_grid<F: TangentField>(
    field: &F,
    r_lo: f64,
    r_hi: f64,
    radii: usize,
    per_x: usize,
    seed: u64,
) -> Vec<EvalPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for i in 0..radii {
        let r = r_lo * (r_hi / r_lo).powf(i as f64 / (radii - 1).max(1) as f64);
        let x = vec![
            rng.gen_range(-5.0..5.0),
            r,
            rng.gen_range(0.15..std::f64::consts::PI - 0.15),
            rng.gen_range(0.0..std::f64::consts::TAU),
        ];
        let mut accepted = 0;
        while accepted < per_x {
            let y: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let p = EvalPoint::new(x.clone(), y).unwrap();
            let l = field.value_at(&p);
            if let Ok(l) = l {
                if l.abs() > 1e-3 * p.y_norm_sq() {
                    out.push(p);
                    accepted += 1;
                }
            }
        }
    }
    out
}

/// Random admissible `(theta, phi, y)` on a two-dimensional base.
pub fn surface_grid<F: TangentField>(field: &F, count: usize, seed: u64) -> Vec<EvalPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let p = EvalPoint::new(
            vec![rng.gen_range(0.05..3.09), rng.gen_range(0.0..TAU)],
            vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
        )
        .unwrap();
        if field.value_at(&p).is_ok_and(|l| l > 1e-4) {
            out.push(p);
        }
    }
    out
}

pub fn rel_err(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(1e-300)
}

/// Riemannian curvature of the static spherically symmetric metric
/// `diag(-f, 1/f, r^2, r^2 sin^2 theta)`, from Christoffel symbols and
/// their derivatives coded directly from the diagonal metric.
pub struct Textbook {
    pub g: [f64; 4],
    pub gamma: [[[f64; 4]; 4]; 4],
    /// `riemann[a][b][c][d] = R^a_{bcd}`.
    pub riemann: [[[[f64; 4]; 4]; 4]; 4],
    pub ricci: [[f64; 4]; 4],
    pub scalar: f64,
}

impl Textbook {
    pub fn new(p: &RadialProfile, r: f64, theta: f64) -> Self {
        let (f, df, d2f) = (p.f(r), p.df(r), p.d2f(r));
        let (s, c) = theta.sin_cos();
        let g = [-f, 1.0 / f, r * r, r * r * s * s];
        // dg[k][a] = d g_aa / dx^k, d2g[k][l][a]
        let mut dg = [[0.0; 4]; 4];
        let mut d2g = [[[0.0; 4]; 4]; 4];
        dg[1] = [-df, -df / (f * f), 2.0 * r, 2.0 * r * s * s];
        dg[2][3] = 2.0 * r * r * s * c;
        d2g[1][1] = [
            -d2f,
            -d2f / (f * f) + 2.0 * df * df / (f * f * f),
            2.0,
            2.0 * s * s,
        ];
        d2g[1][2][3] = 4.0 * r * s * c;
        d2g[2][1][3] = 4.0 * r * s * c;
        d2g[2][2][3] = 2.0 * r * r * (c * c - s * s);

        // Gamma^a_bc = 1/(2 g_aa) (d_b g_ac + d_c g_ab - d_a g_bc) for diagonal g
        let first = |a: usize, b: usize, cc: usize| -> f64 {
            let mut v = 0.0;
            if a == cc {
                v += dg[b][a];
            }
            if a == b {
                v += dg[cc][a];
            }
            if b == cc {
                v -= dg[a][b];
            }
            0.5 * v
        };
        let first_d = |k: usize, a: usize, b: usize, cc: usize| -> f64 {
            let mut v = 0.0;
            if a == cc {
                v += d2g[k][b][a];
            }
            if a == b {
                v += d2g[k][cc][a];
            }
            if b == cc {
                v -= d2g[k][a][b];
            }
            0.5 * v
        };
        let mut gamma = [[[0.0; 4]; 4]; 4];
        let mut dgamma = [[[[0.0; 4]; 4]; 4]; 4]; // dgamma[k][a][b][c]
        for a in 0..4 {
            for b in 0..4 {
                for cc in 0..4 {
                    gamma[a][b][cc] = first(a, b, cc) / g[a];
                    for k in 0..4 {
                        dgamma[k][a][b][cc] = first_d(k, a, b, cc) / g[a]
                            - first(a, b, cc) * dg[k][a] / (g[a] * g[a]);
                    }
                }
            }
        }
        let mut riemann = [[[[0.0; 4]; 4]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for cc in 0..4 {
                    for d in 0..4 {
                        let mut v = dgamma[cc][a][d][b] - dgamma[d][a][cc][b];
                        for e in 0..4 {
                            v += gamma[a][cc][e] * gamma[e][d][b] - gamma[a][d][e] * gamma[e][cc][b];
                        }
                        riemann[a][b][cc][d] = v;
                    }
                }
            }
        }
        let mut ricci = [[0.0; 4]; 4];
        for b in 0..4 {
            for d in 0..4 {
                ricci[b][d] = (0..4).map(|a| riemann[a][b][a][d]).sum();
            }
        }
        let scalar = (0..4).map(|a| ricci[a][a] / g[a]).sum();
        Textbook {
            g,
            gamma,
            riemann,
            ricci,
            scalar,
        }
    }

    pub fn spray(&self, y: &[f64]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    out[a] += 0.5 * self.gamma[a][b][c] * y[b] * y[c];
                }
            }
        }
        out
    }

    /// `R^a_{b c d} y^b y^d`, the Riemannian form of `F^2 R^a_c`.
    pub fn predecessor(&self, y: &[f64]) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for a in 0..4 {
            for c in 0..4 {
                for b in 0..4 {
                    for d in 0..4 {
                        out[a][c] += self.riemann[a][b][c][d] * y[b] * y[d];
                    }
                }
            }
        }
        out
    }

    pub fn lagrangian(&self, y: &[f64]) -> f64 {
        (0..4).map(|a| self.g[a] * y[a] * y[a]).sum()
    }

    pub fn einstein(&self) -> [[f64; 4]; 4] {
        let mut out = self.ricci;
        for a in 0..4 {
            out[a][a] -= 0.5 * self.g[a] * self.scalar;
        }
        out
    }
}

/// Timelike start with `L = -1` at radius `r`: a circular orbit when the
/// profile allows one (`f' > 0`, outside the photon sphere), otherwise a slow
/// drift. The angular direction is mostly azimuthal so the orbit stays away
/// from the poles; `kick` adds a small radial velocity.
pub fn bound_orbit(
    a: &finsler_core::Ansatz,
    r: f64,
    theta: f64,
    tilt: f64,
    kick: f64,
) -> EvalPoint {
    let p = &a.profile;
    let (f, df) = (p.f(r), p.df(r));
    let yt_sq_coeff = f - 0.5 * r * df;
    let rest = 1.0 + kick * kick / f;
    let (omega_sq, yt) = if df > 0.0 && yt_sq_coeff > 0.0 {
        (df / (2.0 * r), (rest / yt_sq_coeff).sqrt())
    } else {
        (1e-6, (rest / (f - r * r * 1e-6)).sqrt())
    };
    let base = a.base.lagrangian(&theta, &tilt, &1.0);
    let scale = (omega_sq / base).sqrt() * yt;
    EvalPoint::new(
        vec![0.0, r, theta, 0.0],
        vec![yt, kick, tilt * scale, scale],
    )
    .unwrap()
}
