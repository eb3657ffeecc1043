//! Deterministic sample points for a campaign.

use std::f64::consts::TAU;

use finsler_core::{EvalPoint, TangentField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::GridConfig;
use crate::error::{HarnessError, Result};

/// Directions with `|L| <= NULL_MARGIN |y|^2` are redrawn so that checks
/// which divide by `F^2` stay well conditioned.
pub const NULL_MARGIN: f64 = 1e-3;

const MAX_DRAWS: usize = 10_000;

/// `radial x angular x directions` points, radii log-spaced, angles and
/// directions drawn from a ChaCha stream seeded by `seed`.
pub fn sample<F: TangentField>(field: &F, grid: &GridConfig, seed: u64) -> Result<Vec<EvalPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let [r_lo, r_hi] = grid.r_range;
    let [th_lo, th_hi] = grid.theta_range;
    let mut out = Vec::with_capacity(grid.len());
    for i in 0..grid.radial {
        let r = r_lo * (r_hi / r_lo).powf(i as f64 / (grid.radial - 1).max(1) as f64);
        for _ in 0..grid.angular {
            let x = vec![
                rng.gen_range(-5.0..=5.0),
                r,
                rng.gen_range(th_lo..=th_hi),
                rng.gen_range(0.0..TAU),
            ];
            let mut accepted = 0;
            let mut draws = 0;
            while accepted < grid.directions {
                draws += 1;
                if draws > MAX_DRAWS {
                    return Err(HarnessError::config(format!(
                        "no admissible directions at x = {x:?}; check r_range against horizons"
                    )));
                }
                let y: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                let p = EvalPoint { x: x.clone(), y };
                if let Ok(l) = field.value_at(&p) {
                    if l.abs() > NULL_MARGIN * p.y_norm_sq() {
                        out.push(p);
                        accepted += 1;
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use finsler_core::{build_ansatz, RadialProfile, TwoDBase};

    #[test]
    fn reproducible_and_sized() {
        let a = build_ansatz(RadialProfile::schwarzschild(1, 1.0), TwoDBase::finsler_sphere(0.3)).unwrap();
        let g = GridConfig::default();
        let p = sample(&a, &g, 3).unwrap();
        assert_eq!(p.len(), g.len());
        assert_eq!(p, sample(&a, &g, 3).unwrap());
        assert_ne!(p, sample(&a, &g, 4).unwrap());
    }

    #[test]
    fn horizon_only_ranges_are_rejected() {
        // f = 1 - 2/r vanishes at r = 2 and the guard refuses that radius
        let a = build_ansatz(RadialProfile::schwarzschild(1, 1.0), TwoDBase::RiemannSphere).unwrap();
        let g = GridConfig {
            r_range: [2.0, 2.0],
            ..GridConfig::default()
        };
        assert!(sample(&a, &g, 1).is_err());
    }
}
