//! Areas of the Randers sphere under the two standard Finsler volume forms.

use std::f64::consts::PI;

use crate::catalog::TwoDBase;

use super::quadrature::gauss_legendre;

const TOL: f64 = 1e-14;
const MAX_NODES: usize = 1 << 14;

/// Gauss-Legendre on `[a, b]` with node doubling until two successive
/// estimates agree to `TOL` relative.
fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let rule = |n: usize| {
        let (x, w) = gauss_legendre(n);
        half * x.iter().zip(&w).map(|(x, w)| w * f(mid + half * x)).sum::<f64>()
    };
    let mut n = 16;
    let mut prev = rule(n);
    while n < MAX_NODES {
        n *= 2;
        let next = rule(n);
        if (next - prev).abs() <= TOL * next.abs() {
            return next;
        }
        prev = next;
    }
    prev
}

/// Holmes-Thompson area `int sin(theta) (1 - eps^2 sin^2 theta)^{-3/2}`,
/// evaluated by quadrature in `cos(theta)`.
pub fn ht_volume(eps: f64) -> f64 {
    let e2 = eps * eps;
    2.0 * PI * integrate(|x| (1.0 - e2 * (1.0 - x * x)).powf(-1.5), -1.0, 1.0)
}

/// `4 pi / (1 - eps^2)`.
pub fn ht_volume_closed(eps: f64) -> f64 {
    4.0 * PI / (1.0 - eps * eps)
}

/// Coordinate area of the indicatrix `{y : F(theta, y) < 1}`, from
/// `1/2 oint F(cos psi, sin psi)^{-2} dpsi` with the periodic trapezoid rule.
pub fn indicatrix_area(eps: f64, theta: f64) -> f64 {
    let base = TwoDBase::finsler_sphere(eps);
    let rule = |n: usize| {
        let h = 2.0 * PI / n as f64;
        0.5 * h
            * (0..n)
                .map(|k| {
                    let (s, c) = (k as f64 * h).sin_cos();
                    1.0 / base.lagrangian(&theta, &c, &s)
                })
                .sum::<f64>()
    };
    let mut n = 64;
    let mut prev = rule(n);
    while n < MAX_NODES {
        n *= 2;
        let next = rule(n);
        if (next - prev).abs() <= TOL * next.abs() {
            return next;
        }
        prev = next;
    }
    prev
}

/// Busemann-Hausdorff area: the density is `pi / area(indicatrix)`.
pub fn bh_volume(eps: f64) -> f64 {
    2.0 * PI * integrate(|theta| PI / indicatrix_area(eps, theta), 0.0, PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_sphere_areas() {
        assert!((ht_volume(0.0) - 4.0 * PI).abs() < 1e-13);
        assert!((bh_volume(0.0) - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn indicatrix_of_round_metric() {
        // ellipse with semi-axes 1 and 1/sin(theta)
        let theta: f64 = 0.7;
        assert!((indicatrix_area(0.0, theta) - PI / theta.sin()).abs() < 1e-12);
    }

    #[test]
    fn holmes_thompson_closed_form() {
        for eps in [0.5, 0.9] {
            let rel = (ht_volume(eps) - ht_volume_closed(eps)).abs() / ht_volume_closed(eps);
            assert!(rel < 1e-10);
        }
    }
}
