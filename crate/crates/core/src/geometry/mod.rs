//! Pointwise Finsler tensor calculus built on the fundamental function
//! `L = F^2`.
//!
//! Everything is derived from jets of `L`; no formula ever takes `F` itself,
//! so Lorentzian signatures (negative `L` on timelike directions) need no
//! special treatment. Divisions by `L` are guarded against null directions.

pub mod geodesic;
mod tensors;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::jets::{EvalPoint, Jet, TangentField};

use tensors::{scaled_predecessor_jets, spray_jets, values, Expansion};

pub use geodesic::{integrate_geodesic, integrate_geodesic_with, GeodesicOptions, Trajectory};

/// A Finsler fundamental function `L(x, y) = F^2(x, y)`.
///
/// `L` must be positively homogeneous of degree two in `y`; the admissible
/// domain is whatever [`TangentField::check`] accepts.
pub trait FundamentalFunction: TangentField {
    fn label(&self) -> String;
}

/// Relative null-direction guard: `|L| > NULL_GUARD * |y|^2`.
pub const NULL_GUARD: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct MetricData {
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    pub det: f64,
}

/// All pointwise curvature data at one `(x, y)`.
#[derive(Clone, Debug)]
pub struct CurvatureState {
    /// `L = F^2` at the point.
    pub lagrangian: f64,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    pub spray: DVector<f64>,
    /// Ricci scalar `Ric = R^mu_mu`.
    pub ric: f64,
    /// `R^mu_nu` with the `F^2` factor divided out.
    pub r_pred: DMatrix<f64>,
    /// `F^2 R^mu_nu`.
    pub r_pred_scaled: DMatrix<f64>,
    /// Akbar-Zadeh Ricci tensor, the `y`-Hessian of `F^2 Ric / 2`.
    pub ric_tensor: DMatrix<f64>,
    /// `S = g^{mu nu} Ric_{mu nu}`.
    pub scalar_curvature: f64,
    /// `Ric_{mu nu} - g_{mu nu} S / 2`.
    pub einstein: DMatrix<f64>,
}

impl CurvatureState {
    /// `T_{mu nu} = G_{mu nu} / (2 V G_N)` where `V` is the volume of the
    /// two-dimensional factor (so `2V` plays the role of `8 pi`).
    pub fn energy_momentum(&self, base_volume: f64, newton_g: f64) -> DMatrix<f64> {
        &self.einstein / (2.0 * base_volume * newton_g)
    }
}

fn guard_null(lagrangian: f64, at: &EvalPoint) -> Result<()> {
    let guard = NULL_GUARD * at.y_norm_sq();
    if lagrangian.abs() > guard {
        Ok(())
    } else {
        Err(Error::NullDirection {
            value: lagrangian.abs(),
            guard,
        })
    }
}

/// `g_{mu nu} = 1/2 d^2 L / dy^mu dy^nu`, its inverse and determinant.
pub fn metric<F: FundamentalFunction + ?Sized>(field: &F, at: &EvalPoint) -> Result<MetricData> {
    let e = Expansion::new(field, at, 2)?;
    let g = values(&e.metric(&e.dl_dy()));
    let det = g.determinant();
    if !(det.abs() > tensors::DET_FLOOR) {
        return Err(Error::Singular { det: det.abs() });
    }
    let g_inv = g
        .clone()
        .try_inverse()
        .ok_or(Error::Singular { det: det.abs() })?;
    Ok(MetricData { g, g_inv, det })
}

/// Geodesic spray coefficients `G^mu`.
pub fn spray<F: FundamentalFunction + ?Sized>(field: &F, at: &EvalPoint) -> Result<DVector<f64>> {
    let e = Expansion::new(field, at, 2)?;
    let s = spray_jets(&e)?;
    Ok(DVector::from_iterator(
        e.n,
        s.spray.iter().map(|j| j.value()),
    ))
}

/// Jets of the metric components and spray, valid to `order` in `(x, y)`.
///
/// Used for homogeneity checks of derived quantities.
pub fn derived_jets<F: FundamentalFunction + ?Sized>(
    field: &F,
    at: &EvalPoint,
    order: usize,
) -> Result<(Vec<Vec<Jet>>, Vec<Jet>)> {
    let e = Expansion::new(field, at, order + 2)?;
    let s = spray_jets(&e)?;
    Ok((s.g, s.spray))
}

/// `F^2 R^mu_nu` (no division, defined on null directions too).
pub fn scaled_curvature_predecessor<F: FundamentalFunction + ?Sized>(
    field: &F,
    at: &EvalPoint,
) -> Result<DMatrix<f64>> {
    let e = Expansion::new(field, at, 4)?;
    let s = spray_jets(&e)?;
    Ok(values(&scaled_predecessor_jets(&e, &s.spray)))
}

/// `R^mu_nu`, the curvature predecessor with `F^2` divided out.
pub fn curvature_predecessor<F: FundamentalFunction + ?Sized>(
    field: &F,
    at: &EvalPoint,
) -> Result<DMatrix<f64>> {
    let e = Expansion::new(field, at, 4)?;
    let l = e.lagrangian.value();
    guard_null(l, at)?;
    let s = spray_jets(&e)?;
    Ok(values(&scaled_predecessor_jets(&e, &s.spray)) / l)
}

/// Ricci scalar `Ric = R^mu_mu`.
pub fn ricci_scalar<F: FundamentalFunction + ?Sized>(field: &F, at: &EvalPoint) -> Result<f64> {
    let e = Expansion::new(field, at, 4)?;
    let l = e.lagrangian.value();
    guard_null(l, at)?;
    let s = spray_jets(&e)?;
    let r = scaled_predecessor_jets(&e, &s.spray);
    Ok((0..e.n).map(|mu| r[mu][mu].value()).sum::<f64>() / l)
}

/// Max-norm deviation of `F^2 R^mu_nu` from the constant-flag-curvature form
/// `K (F^2 delta^mu_nu - y^mu/2 dF^2/dy^nu)`.
pub fn flag_residual<F: FundamentalFunction + ?Sized>(
    field: &F,
    at: &EvalPoint,
    curvature: f64,
) -> Result<f64> {
    let e = Expansion::new(field, at, 4)?;
    let l = e.lagrangian.value();
    guard_null(l, at)?;
    let s = spray_jets(&e)?;
    let r = values(&scaled_predecessor_jets(&e, &s.spray));
    let n = e.n;
    let mut worst = 0.0f64;
    for mu in 0..n {
        for nu in 0..n {
            let delta = if mu == nu { 1.0 } else { 0.0 };
            let model = curvature * (l * delta - 0.5 * at.y[mu] * s.dl_dy[nu].value());
            worst = worst.max((r[(mu, nu)] - model).abs());
        }
    }
    Ok(worst)
}

/// Full curvature state, including the Akbar-Zadeh Ricci tensor and the
/// modified Einstein tensor. Needs sixth-order jets of `L`.
pub fn einstein_tensor<F: FundamentalFunction + ?Sized>(
    field: &F,
    at: &EvalPoint,
) -> Result<CurvatureState> {
    let e = Expansion::new(field, at, 6)?;
    let n = e.n;
    let l = e.lagrangian.value();
    guard_null(l, at)?;
    let s = spray_jets(&e)?;
    let r = scaled_predecessor_jets(&e, &s.spray);

    let mut trace = r[0][0].clone();
    for mu in 1..n {
        trace = trace + &r[mu][mu];
    }
    // Ric_{mu nu} = d^2 (F^2 Ric / 2) / dy^mu dy^nu
    let ric_tensor = DMatrix::from_fn(n, n, |mu, nu| 0.5 * trace.d2(e.y_var(mu), e.y_var(nu)));

    let g = values(&s.g);
    let g_inv = values(&s.g_inv);
    let scalar_curvature = g_inv.component_mul(&ric_tensor).sum();
    let einstein = &ric_tensor - &g * (0.5 * scalar_curvature);
    let r_pred_scaled = values(&r);

    Ok(CurvatureState {
        lagrangian: l,
        spray: DVector::from_iterator(n, s.spray.iter().map(|j| j.value())),
        ric: trace.value() / l,
        r_pred: &r_pred_scaled / l,
        r_pred_scaled,
        ric_tensor,
        scalar_curvature,
        einstein,
        g,
        g_inv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::Scalar;

    struct Minkowski2;

    impl TangentField for Minkowski2 {
        fn dim(&self) -> usize {
            2
        }
        fn eval<S: Scalar>(&self, _x: &[S], y: &[S]) -> S {
            -y[0].square() + y[1].square()
        }
    }

    impl FundamentalFunction for Minkowski2 {
        fn label(&self) -> String {
            "minkowski-2".into()
        }
    }

    struct Degenerate;

    impl TangentField for Degenerate {
        fn dim(&self) -> usize {
            2
        }
        fn eval<S: Scalar>(&self, _x: &[S], y: &[S]) -> S {
            (y[0].clone() + y[1].clone()).square()
        }
    }

    impl FundamentalFunction for Degenerate {
        fn label(&self) -> String {
            "degenerate".into()
        }
    }

    fn pt(x: [f64; 2], y: [f64; 2]) -> EvalPoint {
        EvalPoint::new(x.to_vec(), y.to_vec()).unwrap()
    }

    #[test]
    fn flat_spray_vanishes() {
        let s = spray(&Minkowski2, &pt([0.3, 2.0], [1.0, 0.4])).unwrap();
        assert!(s.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn flat_metric_is_minkowski() {
        let m = metric(&Minkowski2, &pt([0.0, 1.0], [2.0, 1.0])).unwrap();
        assert_eq!(m.g[(0, 0)], -1.0);
        assert_eq!(m.g[(1, 1)], 1.0);
        assert_eq!(m.g[(0, 1)], 0.0);
        assert!((m.det + 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_metric_reports_determinant() {
        let err = metric(&Degenerate, &pt([0.0, 1.0], [1.0, 2.0])).unwrap_err();
        assert!(matches!(err, Error::Singular { det } if det < 1e-12));
        assert!(matches!(
            spray(&Degenerate, &pt([0.0, 1.0], [1.0, 2.0])),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn null_direction_guard() {
        let at = pt([0.0, 1.0], [1.0, 1.0]);
        assert!(matches!(
            ricci_scalar(&Minkowski2, &at),
            Err(Error::NullDirection { .. })
        ));
        // the undivided predecessor is still defined there
        let r = scaled_curvature_predecessor(&Minkowski2, &at).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-15));
    }
}
