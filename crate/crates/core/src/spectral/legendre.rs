//! Fully normalized associated Legendre functions `Pbar_l^m(cos theta)`, with
//! `Y_l^m = Pbar_l^m(cos theta) e^{i m phi}` orthonormal on the unit sphere
//! and the Condon-Shortley phase included.

use std::f64::consts::PI;

/// `Pbar_l^m(x)` for `l = 0..=l_max` (zero for `l < |m|`).
pub fn normalized_legendre(l_max: usize, m: i32, x: f64) -> Vec<f64> {
    let ma = m.unsigned_abs() as usize;
    let mut p = vec![0.0; l_max + 1];
    if ma > l_max {
        return p;
    }
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    for k in 1..=ma {
        pmm *= -((2 * k + 1) as f64 / (2 * k) as f64).sqrt() * s;
    }
    p[ma] = pmm;
    if ma < l_max {
        p[ma + 1] = ((2 * ma + 3) as f64).sqrt() * x * pmm;
    }
    for l in ma + 2..=l_max {
        let (lf, mf) = (l as f64, ma as f64);
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
        p[l] = a * (x * p[l - 1] - b * p[l - 2]);
    }
    if m < 0 && ma % 2 == 1 {
        p.iter_mut().for_each(|v| *v = -*v);
    }
    p
}

/// `Pbar_l^m(cos theta)` and its first two `theta` derivatives.
#[derive(Clone, Debug)]
pub struct LegendreTheta {
    pub p: Vec<f64>,
    pub dp: Vec<f64>,
    pub d2p: Vec<f64>,
}

/// Values and `theta` derivatives for `0 < theta < pi`. The first derivative
/// comes from the degree-lowering recurrence, the second from the Legendre
/// equation itself.
pub fn legendre_theta(l_max: usize, m: i32, theta: f64) -> LegendreTheta {
    let (s, x) = theta.sin_cos();
    let p = normalized_legendre(l_max, m, x);
    let ma = m.unsigned_abs() as usize;
    let mf = ma as f64;
    let mut dp = vec![0.0; l_max + 1];
    let mut d2p = vec![0.0; l_max + 1];
    for l in ma..=l_max {
        let lf = l as f64;
        let lower = if l > ma {
            ((2.0 * lf + 1.0) * (lf - mf) * (lf + mf) / (2.0 * lf - 1.0)).sqrt() * p[l - 1]
        } else {
            0.0
        };
        dp[l] = (lf * x * p[l] - lower) / s;
        d2p[l] = -x / s * dp[l] - (lf * (lf + 1.0) - mf * mf / (s * s)) * p[l];
    }
    LegendreTheta { p, dp, d2p }
}
