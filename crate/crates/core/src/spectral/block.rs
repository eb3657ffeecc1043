//! Galerkin matrices of the Laplacian in the harmonics of one azimuthal
//! number `m`, their eigen-decomposition, and the `O(eps^2)` perturbative
//! eigenpairs they are compared with.

use nalgebra::{Complex, DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};

use super::legendre::legendre_theta;
use super::quadrature::gauss_legendre;
use super::{laplacian_apply, operator_coefficients, SphereFunction};

/// Relative size of an imaginary part above which an eigenvalue is flagged.
pub const COMPLEX_FLAG: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct Eigenpair {
    /// Degree of the round-sphere harmonic this mode continues.
    pub l: usize,
    pub m: i32,
    pub lambda: f64,
    pub imaginary: f64,
    /// Imaginary part exceeded `COMPLEX_FLAG * |lambda|`.
    pub complex: bool,
    /// Coefficients on `Y_{|m|}^m .. Y_{l_max}^m`, with the one on `Y_l^m`
    /// fixed to one.
    pub coefficients: Vec<f64>,
}

impl Eigenpair {
    pub fn function(&self) -> SphereFunction {
        let ma = self.m.unsigned_abs() as usize;
        let mut f = SphereFunction::new();
        for (i, &c) in self.coefficients.iter().enumerate() {
            if c != 0.0 {
                f.insert(ma + i, self.m, Complex::new(c, 0.0));
            }
        }
        f
    }
}

/// `A_{l' l} = <Y_{l'}^m, Laplacian Y_l^m>` for `|m| <= l, l' <= l_max`.
#[derive(Clone, Debug)]
pub struct SpectralBlock {
    pub m: i32,
    pub eps: f64,
    pub l_max: usize,
    pub matrix: DMatrix<f64>,
    pub eigenpairs: Vec<Eigenpair>,
}

impl SpectralBlock {
    /// Matrix entry for degrees `(l', l)`.
    pub fn entry(&self, l_row: usize, l_col: usize) -> f64 {
        let ma = self.m.unsigned_abs() as usize;
        self.matrix[(l_row - ma, l_col - ma)]
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<usize> {
        self.m.unsigned_abs() as usize..=self.l_max
    }
}

/// Assembles the block with `quad_order` Gauss-Legendre nodes in `cos(theta)`;
/// the `phi` integral is done analytically.
pub fn assemble_block(eps: f64, m: i32, l_max: usize, quad_order: usize) -> Result<SpectralBlock> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::config(format!("epsilon {eps} outside [0, 1)")));
    }
    let ma = m.unsigned_abs() as usize;
    if l_max < ma + 4 {
        return Err(Error::config(format!(
            "l_max = {l_max} must be at least |m| + 4 = {}",
            ma + 4
        )));
    }
    if quad_order < 2 * l_max + 16 {
        return Err(Error::config(format!(
            "quadrature order {quad_order} below 2 l_max + 16 = {}",
            2 * l_max + 16
        )));
    }
    let n = l_max - ma + 1;
    let (nodes, weights) = gauss_legendre(quad_order);
    let mf = m as f64;

    // Weak form: integrating c_tt P'' + c_t P' by parts against the test
    // function leaves -c_tt dP_row dP_col + d P_row dP_col with
    // d = c_t - (c_tt sin)'/sin = 6 eps^2 sin cos / (1 + w), which avoids the
    // cancellation between P'' and the pole terms of the strong form.
    let tables: Vec<(Vec<f64>, Vec<f64>)> = nodes
        .par_iter()
        .zip(weights.par_iter())
        .map(|(&x, &wq)| {
            let theta = x.acos();
            let (s, c) = theta.sin_cos();
            let w = (1.0 - eps * eps * s * s).sqrt();
            let d = 6.0 * eps * eps * s * c / (1.0 + w);
            let lt = legendre_theta(l_max, m, theta);
            let [cpp, ctt, _] = operator_coefficients(eps, theta);
            let scale = 2.0 * std::f64::consts::PI * wq;
            let degrees = ma..=l_max;
            let test: Vec<f64> = degrees
                .clone()
                .map(|l| scale * lt.p[l])
                .chain(degrees.clone().map(|l| -scale * ctt * lt.dp[l]))
                .collect();
            let image: Vec<f64> = degrees
                .clone()
                .map(|l| d * lt.dp[l] - mf * mf * cpp * lt.p[l])
                .chain(degrees.map(|l| lt.dp[l]))
                .collect();
            (test, image)
        })
        .collect();

    let q = nodes.len();
    let test = DMatrix::from_fn(n, 2 * q, |i, k| tables[k / 2].0[i + (k % 2) * n]);
    let image = DMatrix::from_fn(2 * q, n, |k, j| tables[k / 2].1[j + (k % 2) * n]);
    Ok(SpectralBlock {
        m,
        eps,
        l_max,
        matrix: test * image,
        eigenpairs: Vec::new(),
    })
}

/// Number of modes reported by default: those with `l <= l_max - 4`.
pub fn default_interior(block: &SpectralBlock) -> usize {
    block.l_max - block.m.unsigned_abs() as usize - 3
}

/// Eigenvalues from a real Schur form, sorted from the top of the spectrum so
/// that the `k`-th value continues `-l(l+1)` with `l = |m| + k`. Eigenvectors
/// come from inverse iteration and refine the real part. Only the first `interior_count` modes are
/// returned.
pub fn eigen_solve(block: &SpectralBlock, interior_count: usize) -> Result<Vec<Eigenpair>> {
    let ma = block.m.unsigned_abs() as usize;
    let n = block.matrix.nrows();
    if interior_count + 2 > block.l_max - ma {
        return Err(Error::config(format!(
            "interior count {interior_count} exceeds l_max - |m| - 2 = {}",
            block.l_max - ma - 2
        )));
    }
    let mut values: Vec<Complex<f64>> = block.matrix.complex_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| b.re.total_cmp(&a.re));

    let scale = block.matrix.amax().max(1.0);
    values
        .iter()
        .take(interior_count)
        .enumerate()
        .map(|(k, lam)| {
            let l = ma + k;
            let shift = lam.re + 1e-10 * scale;
            let shifted = &block.matrix - DMatrix::identity(n, n) * shift;
            let lu = shifted.lu();
            let mut v = DVector::from_fn(n, |i, _| if i == k { 1.0 } else { 1e-3 });
            for _ in 0..4 {
                let next = lu.solve(&v).ok_or(Error::Singular { det: 0.0 })?;
                v = &next / next.amax();
            }
            let pivot = v[k];
            if pivot.abs() < 1e-12 {
                return Err(Error::domain(format!(
                    "mode l = {l}, m = {} has no weight on its own harmonic",
                    block.m
                )));
            }
            // one Rayleigh correction sharpens the Schur value to the accuracy
            // of the assembled matrix
            let residual = &block.matrix * &v - &v * lam.re;
            let lambda = lam.re + v.dot(&residual) / v.dot(&v);
            Ok(Eigenpair {
                l,
                m: block.m,
                lambda,
                imaginary: lam.im,
                complex: lam.im.abs() > COMPLEX_FLAG * lam.re.abs().max(1.0),
                coefficients: (v / pivot).iter().copied().collect(),
            })
        })
        .collect()
}

/// Assembles with the minimal quadrature order and solves for the default
/// interior modes.
pub fn solve_block(eps: f64, m: i32, l_max: usize) -> Result<SpectralBlock> {
    let mut block = assemble_block(eps, m, l_max, 2 * l_max + 16)?;
    block.eigenpairs = eigen_solve(&block, default_interior(&block))?;
    Ok(block)
}

/// `max |Laplacian f - lambda f| / max |f|` over the interior Gauss nodes.
pub fn eigen_residual(eps: f64, pair: &Eigenpair, nodes: usize) -> Result<f64> {
    let f = pair.function();
    let (xs, _) = gauss_legendre(nodes);
    let mut worst: f64 = 0.0;
    let mut peak: f64 = 0.0;
    for x in xs {
        let theta = x.acos();
        let value = f.eval(theta, 0.0);
        let lap = laplacian_apply(eps, &f, theta, 0.0)?;
        worst = worst.max((lap - value * pair.lambda).norm());
        peak = peak.max(value.norm());
    }
    Ok(worst / peak)
}

/// `-l(l+1) + eps^2 [3(l-1)l(l+1)(l+2) / (2(2l-1)(2l+3))
///  + m^2 (14l^3 + 21l^2 + 19l + 6) / (2(2l+1)(2l-1)(2l+3))]`.
pub fn perturbative_eigenvalue(l: usize, m: i32, eps: f64) -> f64 {
    let lf = l as f64;
    let m2 = (m as f64).powi(2);
    let axial = 3.0 * (lf - 1.0) * lf * (lf + 1.0) * (lf + 2.0)
        / (2.0 * (2.0 * lf - 1.0) * (2.0 * lf + 3.0));
    let azimuthal = m2 * (14.0 * lf.powi(3) + 21.0 * lf * lf + 19.0 * lf + 6.0)
        / (2.0 * (2.0 * lf + 1.0) * (2.0 * lf - 1.0) * (2.0 * lf + 3.0));
    -lf * (lf + 1.0) + eps * eps * (axial + azimuthal)
}

/// `(C_{l+2}^m, C_{l-2}^m)`; the second vanishes when `l - 2 < |m|`.
pub fn perturbative_coefficients(l: usize, m: i32) -> (f64, f64) {
    let lf = l as f64;
    let mf = m as f64;
    let up = -3.0 * lf * (lf - 1.0) / (8.0 * (2.0 * lf + 3.0).powi(2))
        * ((lf + mf + 1.0) * (lf - mf + 1.0) * (lf + mf + 2.0) * (lf - mf + 2.0)
            / ((2.0 * lf + 1.0) * (2.0 * lf + 5.0)))
            .sqrt();
    let down = if l < 2 || l - 2 < m.unsigned_abs() as usize {
        0.0
    } else {
        3.0 * (lf + 1.0) * (lf + 2.0) / (8.0 * (2.0 * lf - 1.0).powi(2))
            * ((lf + mf) * (lf - mf) * (lf + mf - 1.0) * (lf - mf - 1.0)
                / ((2.0 * lf + 1.0) * (2.0 * lf - 3.0)))
                .sqrt()
    };
    (up, down)
}

/// Eigenvalue and eigenfunction `Y_l^m + eps^2 (C_{l+2} Y_{l+2}^m + C_{l-2} Y_{l-2}^m)`,
/// normalized so the coefficient on `Y_l^m` is one.
pub fn perturbative_eigenpair(l: usize, m: i32, eps: f64) -> Result<(f64, SphereFunction)> {
    if m.unsigned_abs() as usize > l {
        return Err(Error::config(format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    let (up, down) = perturbative_coefficients(l, m);
    let e2 = eps * eps;
    let mut f = SphereFunction::harmonic(l, m);
    if up != 0.0 {
        f.insert(l + 2, m, Complex::new(e2 * up, 0.0));
    }
    if down != 0.0 {
        f.insert(l - 2, m, Complex::new(e2 * down, 0.0));
    }
    Ok((perturbative_eigenvalue(l, m, eps), f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_block_is_diagonal() {
        let b = assemble_block(0.0, 0, 8, 32).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let expected = if i == j { -((i * (i + 1)) as f64) } else { 0.0 };
                assert!((b.matrix[(i, j)] - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn parity_structure() {
        let b = assemble_block(0.1, 0, 10, 36).unwrap();
        assert!(b.entry(2, 1).abs() < 1e-12);
        assert!(b.entry(1, 3).abs() > 1e-3);
        // Y_1^0 is an exact eigenfunction, so its column has no coupling
        assert!(b.entry(3, 1).abs() < 1e-12);
    }

    #[test]
    fn preconditions() {
        assert!(matches!(assemble_block(0.1, 2, 5, 40), Err(Error::Config(_))));
        assert!(matches!(assemble_block(0.1, 0, 8, 31), Err(Error::Config(_))));
        let b = assemble_block(0.1, 0, 8, 32).unwrap();
        assert!(matches!(eigen_solve(&b, 7), Err(Error::Config(_))));
    }

    #[test]
    fn first_azimuthal_mode_is_exact() {
        let b = solve_block(0.1, 1, 12).unwrap();
        assert!((b.eigenpairs[0].lambda + 1.98).abs() < 1e-10);
    }

    #[test]
    fn perturbative_coefficient_values() {
        let (up, down) = perturbative_coefficients(2, 0);
        assert!((up + 0.027_38).abs() < 1e-5);
        assert!((down - 0.447_21).abs() < 1e-5);
        let (_, down) = perturbative_coefficients(1, 0);
        assert_eq!(down, 0.0);
        assert!((perturbative_eigenvalue(2, 0, 0.1) - (-6.0 + 0.01 * 72.0 / 42.0)).abs() < 1e-14);
        assert!((perturbative_eigenvalue(1, 1, 0.3) - (-2.0 + 2.0 * 0.09)).abs() < 1e-14);
        assert_eq!(perturbative_eigenvalue(1, 0, 0.3), -2.0);
    }
}
