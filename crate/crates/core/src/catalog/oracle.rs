//! Hand-derived closed forms for the ansatz, coded without the jet engine so
//! they can serve as independent references for [`crate::geometry`].

use nalgebra::{DMatrix, DVector};

use super::{Ansatz, BaseLocal, RadialProfile, TwoDBase};
use crate::error::{Error, Result};
use crate::geometry::NULL_GUARD;
use crate::jets::{EvalPoint, TangentField};

struct Local {
    r: f64,
    f: f64,
    df: f64,
    d2f: f64,
    y: [f64; 4],
    base: BaseLocal,
    k: f64,
}

fn local(profile: &RadialProfile, base: &TwoDBase, at: &EvalPoint) -> Result<Local> {
    if at.dim() != 4 {
        return Err(Error::config("ansatz oracles need a four-dimensional point"));
    }
    Ansatz {
        profile: *profile,
        base: *base,
    }
    .check(at)?;
    let r = at.x[1];
    let y = [at.y[0], at.y[1], at.y[2], at.y[3]];
    Ok(Local {
        r,
        f: profile.f(r),
        df: profile.df(r),
        d2f: profile.d2f(r),
        y,
        base: base.local(at.x[2], y[2], y[3]),
        k: base.curvature() as f64,
    })
}

impl Local {
    fn lagrangian(&self) -> f64 {
        let [yt, yr, _, _] = self.y;
        -self.f * yt * yt + yr * yr / self.f + self.r * self.r * self.base.lagrangian
    }

    fn guard(&self) -> Result<f64> {
        let l = self.lagrangian();
        let guard = NULL_GUARD * self.y.iter().map(|v| v * v).sum::<f64>();
        if l.abs() > guard {
            Ok(l)
        } else {
            Err(Error::NullDirection {
                value: l.abs(),
                guard,
            })
        }
    }
}

/// Spray of the ansatz:
/// `G^t = f'/(2f) y^t y^r`,
/// `G^r = -f'/(4f) (y^r)^2 + f f'/4 (y^t)^2 - r f Fbar^2 / 2`,
/// `G^i = y^i y^r / r + Gbar^i`.
pub fn oracle_spray(profile: &RadialProfile, base: &TwoDBase, at: &EvalPoint) -> Result<DVector<f64>> {
    let s = local(profile, base, at)?;
    let [yt, yr, yth, yph] = s.y;
    let (r, f, df) = (s.r, s.f, s.df);
    Ok(DVector::from_vec(vec![
        df / (2.0 * f) * yt * yr,
        -df / (4.0 * f) * yr * yr + f * df / 4.0 * yt * yt - 0.5 * r * f * s.base.lagrangian,
        yth * yr / r + s.base.spray[0],
        yph * yr / r + s.base.spray[1],
    ]))
}

/// `F^2 Ric = [f f''/2 + f f'/r] (y^t)^2 + [-f''/(2f) - f'/(r f)] (y^r)^2
///  + [k - f - r f'] Fbar^2`.
pub fn oracle_scaled_ricci(profile: &RadialProfile, base: &TwoDBase, at: &EvalPoint) -> Result<f64> {
    let s = local(profile, base, at)?;
    let [yt, yr, _, _] = s.y;
    let (r, f, df, d2f) = (s.r, s.f, s.df, s.d2f);
    Ok((f * d2f / 2.0 + f * df / r) * yt * yt
        + (-d2f / (2.0 * f) - df / (r * f)) * yr * yr
        + (s.k - f - r * df) * s.base.lagrangian)
}

/// Ricci scalar from the closed form, divided by `F^2`.
pub fn oracle_ricci(profile: &RadialProfile, base: &TwoDBase, at: &EvalPoint) -> Result<f64> {
    let l = local(profile, base, at)?.guard()?;
    Ok(oracle_scaled_ricci(profile, base, at)? / l)
}

/// Charged form `F^2 Ric = q/r^4 (f (y^t)^2 - (y^r)^2/f + r^2 Fbar^2)` with
/// `q` the charge term of the profile.
pub fn charged_scaled_ricci(profile: &RadialProfile, base: &TwoDBase, at: &EvalPoint) -> Result<f64> {
    let s = local(profile, base, at)?;
    let [yt, yr, _, _] = s.y;
    let (r, f) = (s.r, s.f);
    Ok(profile.q2_term / r.powi(4) * (f * yt * yt - yr * yr / f + r * r * s.base.lagrangian))
}

/// `F^2 R^mu_nu` of the ansatz over a constant-curvature base, for which
/// `Fbar^2 Rbar^i_j = k (Fbar^2 delta^i_j - y^i/2 dFbar^2/dy^j)`.
pub fn oracle_scaled_predecessor(
    profile: &RadialProfile,
    base: &TwoDBase,
    at: &EvalPoint,
) -> Result<DMatrix<f64>> {
    let s = local(profile, base, at)?;
    let [yt, yr, _, _] = s.y;
    let (r, f, df, d2f, k) = (s.r, s.f, s.df, s.d2f, s.k);
    let lb = s.base.lagrangian;
    let dlb = s.base.dl_dy;
    let mut m = DMatrix::zeros(4, 4);

    m[(0, 0)] = -d2f / (2.0 * f) * yr * yr - r * df / 2.0 * lb;
    m[(0, 1)] = d2f / (2.0 * f) * yt * yr;
    m[(1, 0)] = -f * d2f / 2.0 * yr * yt;
    m[(1, 1)] = f * d2f / 2.0 * yt * yt - r * df / 2.0 * lb;
    for i in 0..2 {
        let yi = s.y[2 + i];
        m[(0, 2 + i)] = r * df / 4.0 * yt * dlb[i];
        m[(1, 2 + i)] = r * df / 4.0 * yr * dlb[i];
        m[(2 + i, 0)] = -f * df / (2.0 * r) * yi * yt;
        m[(2 + i, 1)] = df / (2.0 * r * f) * yi * yr;
        for j in 0..2 {
            let delta = if i == j { 1.0 } else { 0.0 };
            let base_part = k * (lb * delta - 0.5 * yi * dlb[j]);
            m[(2 + i, 2 + j)] = base_part
                + (f * df / (2.0 * r) * yt * yt - df / (2.0 * r * f) * yr * yr - f * lb) * delta
                + f / 2.0 * yi * dlb[j];
        }
    }
    Ok(m)
}

/// `Ric_{mu nu} = G_{mu nu} = q/r^4 diag(f, -1/f, r^2 gbar_ij)` for the
/// charged profile.
pub fn charged_einstein(profile: &RadialProfile, base: &TwoDBase, at: &EvalPoint) -> Result<DMatrix<f64>> {
    charged_diagonal(profile, base, at, profile.q2_term)
}

/// `T_{mu nu} = Q^2/(2 r^4) diag(f, -1/f, r^2 gbar_ij)`.
pub fn charged_energy_momentum(
    profile: &RadialProfile,
    base: &TwoDBase,
    at: &EvalPoint,
    charge_squared: f64,
) -> Result<DMatrix<f64>> {
    charged_diagonal(profile, base, at, 0.5 * charge_squared)
}

fn charged_diagonal(
    profile: &RadialProfile,
    base: &TwoDBase,
    at: &EvalPoint,
    scale: f64,
) -> Result<DMatrix<f64>> {
    let s = local(profile, base, at)?;
    let (r, f) = (s.r, s.f);
    let c = scale / r.powi(4);
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 0)] = c * f;
    m[(1, 1)] = -c / f;
    for i in 0..2 {
        for j in 0..2 {
            m[(2 + i, 2 + j)] = c * r * r * s.base.metric[i][j];
        }
    }
    Ok(m)
}
