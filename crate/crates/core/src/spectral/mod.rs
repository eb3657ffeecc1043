//! The Laplacian of the Randers sphere `F_FS` acting on spherical-harmonic
//! expansions: pointwise evaluation, Galerkin blocks per azimuthal number,
//! eigen-solutions, the small-`eps` perturbative spectrum, areas and the
//! radial factor of three-dimensional harmonic functions.

mod block;
mod legendre;
mod quadrature;
mod radial;
mod volume;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::Complex;

use crate::error::{Error, Result};

pub use block::{
    assemble_block, default_interior, eigen_residual, eigen_solve, perturbative_coefficients,
    perturbative_eigenpair, perturbative_eigenvalue, solve_block, Eigenpair, SpectralBlock,
};
pub use legendre::{legendre_theta, normalized_legendre, LegendreTheta};
pub use quadrature::gauss_legendre;
pub use radial::{radial_exponents, radial_solution, RadialSolution};
pub use volume::{bh_volume, ht_volume, ht_volume_closed, indicatrix_area};

/// Finite expansion `sum c_lm Y_l^m` in complex orthonormal harmonics.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SphereFunction {
    coefficients: BTreeMap<(usize, i32), Complex<f64>>,
}

impl SphereFunction {
    pub fn new() -> Self {
        SphereFunction::default()
    }

    /// The single harmonic `Y_l^m`.
    pub fn harmonic(l: usize, m: i32) -> Self {
        let mut f = SphereFunction::new();
        f.insert(l, m, Complex::new(1.0, 0.0));
        f
    }

    /// Sets `c_lm`; panics if `|m| > l`.
    pub fn insert(&mut self, l: usize, m: i32, c: Complex<f64>) {
        assert!(m.unsigned_abs() as usize <= l, "|m| must not exceed l");
        self.coefficients.insert((l, m), c);
    }

    pub fn get(&self, l: usize, m: i32) -> Complex<f64> {
        self.coefficients
            .get(&(l, m))
            .copied()
            .unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, i32), Complex<f64>)> + '_ {
        self.coefficients.iter().map(|(&k, &v)| (k, v))
    }

    pub fn l_max(&self) -> usize {
        self.coefficients.keys().map(|k| k.0).max().unwrap_or(0)
    }

    /// Norm under the round-sphere inner product.
    pub fn norm(&self) -> f64 {
        self.coefficients.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    fn by_m(&self) -> BTreeMap<i32, Vec<(usize, Complex<f64>)>> {
        let mut out: BTreeMap<i32, Vec<_>> = BTreeMap::new();
        for (&(l, m), &c) in &self.coefficients {
            out.entry(m).or_default().push((l, c));
        }
        out
    }

    pub fn eval(&self, theta: f64, phi: f64) -> Complex<f64> {
        let x = theta.cos();
        self.by_m()
            .into_iter()
            .map(|(m, terms)| {
                let l_max = terms.iter().map(|t| t.0).max().unwrap_or(0);
                let p = normalized_legendre(l_max, m, x);
                let radial: Complex<f64> = terms.iter().map(|&(l, c)| c * p[l]).sum();
                radial * Complex::from_polar(1.0, m as f64 * phi)
            })
            .sum()
    }
}

/// Coefficients `(c_phiphi, c_thetatheta, c_theta)` of
/// `c_phiphi d^2/dphi^2 + c_thetatheta d^2/dtheta^2 + c_theta d/dtheta`.
pub fn operator_coefficients(eps: f64, theta: f64) -> [f64; 3] {
    let (s, c) = theta.sin_cos();
    let s2 = s * s;
    let w = (1.0 - eps * eps * s2).sqrt();
    [
        2.0 * w * w * w / (s2 * (1.0 + w)),
        2.0 * w * w / (1.0 + w),
        2.0 * c * (eps * eps * s2 + w) / (s * (1.0 + w)),
    ]
}

/// The same coefficients expanded to first order in `eps^2`.
pub fn expanded_coefficients(eps: f64, theta: f64) -> [f64; 3] {
    let (s, c) = theta.sin_cos();
    let e2s2 = eps * eps * s * s;
    [
        (4.0 - 5.0 * e2s2) / (4.0 * s * s),
        1.0 - 0.75 * e2s2,
        c / s * (1.0 + 0.75 * e2s2),
    ]
}

fn check_interior(eps: f64, theta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::domain(format!("epsilon {eps} outside [0, 1)")));
    }
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::domain(format!(
            "theta = {theta} is not an interior point of (0, pi)"
        )));
    }
    Ok(())
}

fn apply_with(coeffs: [f64; 3], f: &SphereFunction, theta: f64, phi: f64) -> Complex<f64> {
    f.by_m()
        .into_iter()
        .map(|(m, terms)| {
            let l_max = terms.iter().map(|t| t.0).max().unwrap_or(0);
            let lt = legendre_theta(l_max, m, theta);
            let mf = m as f64;
            let radial: Complex<f64> = terms
                .iter()
                .map(|&(l, c)| {
                    c * (-mf * mf * coeffs[0] * lt.p[l] + coeffs[1] * lt.d2p[l] + coeffs[2] * lt.dp[l])
                })
                .sum();
            radial * Complex::from_polar(1.0, mf * phi)
        })
        .sum()
}

/// The full Laplacian of the Randers sphere applied to `f` at `(theta, phi)`.
pub fn laplacian_apply(eps: f64, f: &SphereFunction, theta: f64, phi: f64) -> Result<Complex<f64>> {
    check_interior(eps, theta)?;
    Ok(apply_with(operator_coefficients(eps, theta), f, theta, phi))
}

/// The Laplacian truncated at order `eps^2`.
pub fn laplacian_apply_expanded(
    eps: f64,
    f: &SphereFunction,
    theta: f64,
    phi: f64,
) -> Result<Complex<f64>> {
    check_interior(eps, theta)?;
    Ok(apply_with(expanded_coefficients(eps, theta), f, theta, phi))
}
