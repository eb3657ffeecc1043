//! Static spherically-structured Finsler spacetimes
//! `L = -f(r) (y^t)^2 + (y^r)^2 / f(r) + r^2 Lbar(theta, phi, y^theta, y^phi)`
//! and the two-dimensional bases `Lbar` they are built from.

pub mod oracle;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::FundamentalFunction;
use crate::jets::{EvalPoint, Scalar, TangentField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileKind {
    Schwarzschild,
    SchwarzschildDeSitter,
    ReissnerNordstrom,
    DeSitter,
    Custom,
}

/// `f(r) = k - 2GM/r - b r^2 + q/r^2`, with `q` the charge term `4 pi_F G Q^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialProfile {
    pub kind: ProfileKind,
    pub k: i32,
    pub gm: f64,
    pub b: f64,
    pub q2_term: f64,
}

impl RadialProfile {
    pub fn schwarzschild(k: i32, gm: f64) -> Self {
        RadialProfile {
            kind: ProfileKind::Schwarzschild,
            k,
            gm,
            b: 0.0,
            q2_term: 0.0,
        }
    }

    pub fn schwarzschild_de_sitter(k: i32, gm: f64, b: f64) -> Self {
        RadialProfile {
            kind: ProfileKind::SchwarzschildDeSitter,
            k,
            gm,
            b,
            q2_term: 0.0,
        }
    }

    pub fn reissner_nordstrom(k: i32, gm: f64, q2_term: f64) -> Self {
        RadialProfile {
            kind: ProfileKind::ReissnerNordstrom,
            k,
            gm,
            b: 0.0,
            q2_term,
        }
    }

    pub fn de_sitter(k: i32, b: f64) -> Self {
        RadialProfile {
            kind: ProfileKind::DeSitter,
            k,
            gm: 0.0,
            b,
            q2_term: 0.0,
        }
    }

    pub fn custom(k: i32, gm: f64, b: f64, q2_term: f64) -> Self {
        RadialProfile {
            kind: ProfileKind::Custom,
            k,
            gm,
            b,
            q2_term,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(-1..=1).contains(&self.k) {
            return Err(Error::config(format!("k must be -1, 0 or 1, got {}", self.k)));
        }
        if !(self.gm.is_finite() && self.b.is_finite() && self.q2_term.is_finite()) {
            return Err(Error::config("non-finite profile parameter"));
        }
        if self.gm < 0.0 {
            return Err(Error::config("GM must be non-negative"));
        }
        if self.q2_term < 0.0 {
            return Err(Error::config("charge term must be non-negative"));
        }
        let unused = match self.kind {
            ProfileKind::Schwarzschild => self.b != 0.0 || self.q2_term != 0.0,
            ProfileKind::SchwarzschildDeSitter => self.q2_term != 0.0,
            ProfileKind::ReissnerNordstrom => self.b != 0.0,
            ProfileKind::DeSitter => self.gm != 0.0 || self.q2_term != 0.0,
            ProfileKind::Custom => false,
        };
        if unused {
            return Err(Error::config(format!(
                "{:?} profile carries a parameter it does not use",
                self.kind
            )));
        }
        Ok(())
    }

    pub fn eval<S: Scalar>(&self, r: &S) -> S {
        let inv = r.recip();
        let mut f = inv.clone() * (-2.0 * self.gm) + self.k as f64;
        if self.b != 0.0 {
            f = f - r.square() * self.b;
        }
        if self.q2_term != 0.0 {
            f = f + inv.square() * self.q2_term;
        }
        f
    }

    pub fn f(&self, r: f64) -> f64 {
        self.k as f64 - 2.0 * self.gm / r - self.b * r * r + self.q2_term / (r * r)
    }

    pub fn df(&self, r: f64) -> f64 {
        2.0 * self.gm / (r * r) - 2.0 * self.b * r - 2.0 * self.q2_term / (r * r * r)
    }

    pub fn d2f(&self, r: f64) -> f64 {
        -4.0 * self.gm / (r * r * r) - 2.0 * self.b + 6.0 * self.q2_term / r.powi(4)
    }

    /// `Q^2` recovered from the charge term `q = V G Q^2`, where `V` stands for
    /// `4 pi_F`, the volume of the two-dimensional factor.
    pub fn charge_squared(&self, newton_g: f64, base_volume: f64) -> f64 {
        self.q2_term / (newton_g * base_volume)
    }
}

/// Two-dimensional factor of the ansatz, in coordinates `(theta, phi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TwoDBase {
    /// Unit round sphere.
    RiemannSphere,
    /// Randers sphere of constant flag curvature one, `0 <= eps < 1`.
    FinslerSphere { eps: f64 },
    /// Hyperbolic plane in geodesic polar coordinates, `theta > 0`.
    Hyperbolic,
    /// Euclidean plane in Cartesian coordinates.
    Flat,
}

/// Closed-form local data of a base at `(theta, y)`, evaluated without jets.
#[derive(Clone, Copy, Debug)]
pub struct BaseLocal {
    /// `Lbar = Fbar^2`.
    pub lagrangian: f64,
    /// `dLbar/dy^i`.
    pub dl_dy: [f64; 2],
    /// `gbar_ij`.
    pub metric: [[f64; 2]; 2],
    /// `Gbar^i`.
    pub spray: [f64; 2],
}

impl TwoDBase {
    pub fn finsler_sphere(eps: f64) -> Self {
        TwoDBase::FinslerSphere { eps }
    }

    /// Constant (flag) curvature, which is also the base Ricci scalar.
    pub fn curvature(&self) -> i32 {
        match self {
            TwoDBase::RiemannSphere | TwoDBase::FinslerSphere { .. } => 1,
            TwoDBase::Hyperbolic => -1,
            TwoDBase::Flat => 0,
        }
    }

    pub fn label(&self) -> String {
        match self {
            TwoDBase::RiemannSphere => "riemann_sphere".into(),
            TwoDBase::FinslerSphere { eps } => format!("finsler_sphere(eps={eps})"),
            TwoDBase::Hyperbolic => "hyperbolic".into(),
            TwoDBase::Flat => "flat".into(),
        }
    }

    pub fn epsilon(&self) -> f64 {
        match self {
            TwoDBase::FinslerSphere { eps } => *eps,
            _ => 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let TwoDBase::FinslerSphere { eps } = self {
            if !(0.0..1.0).contains(eps) {
                return Err(Error::config(format!("epsilon must lie in [0, 1), got {eps}")));
            }
        }
        Ok(())
    }

    /// Closed-form Holmes-Thompson area, where finite.
    pub fn ht_volume(&self) -> Option<f64> {
        match self {
            TwoDBase::RiemannSphere => Some(4.0 * PI),
            TwoDBase::FinslerSphere { eps } => Some(4.0 * PI / (1.0 - eps * eps)),
            _ => None,
        }
    }

    pub fn lagrangian<S: Scalar>(&self, theta: &S, y_theta: &S, y_phi: &S) -> S {
        match self {
            TwoDBase::RiemannSphere => y_theta.square() + theta.sin().square() * y_phi.square(),
            TwoDBase::FinslerSphere { eps } => {
                let s2 = theta.sin().square();
                let u = s2.clone() * (-eps * eps) + 1.0;
                let root = u.clone() * y_theta.square() + s2.clone() * y_phi.square();
                let f = (root.sqrt() - s2 * y_phi.clone() * *eps) / u;
                f.square()
            }
            TwoDBase::Hyperbolic => y_theta.square() + theta.sinh().square() * y_phi.square(),
            TwoDBase::Flat => y_theta.square() + y_phi.square(),
        }
    }

    /// Randers root term `(1 - eps^2 sin^2) y_theta^2 + sin^2 y_phi^2` (or the
    /// quadratic form itself for Riemannian bases).
    pub fn root_term(&self, theta: f64, y_theta: f64, y_phi: f64) -> f64 {
        match self {
            TwoDBase::FinslerSphere { eps } => {
                let s2 = theta.sin().powi(2);
                (1.0 - eps * eps * s2) * y_theta * y_theta + s2 * y_phi * y_phi
            }
            _ => self.lagrangian(&theta, &y_theta, &y_phi),
        }
    }

    pub fn check(&self, theta: f64, y_theta: f64, y_phi: f64) -> Result<()> {
        match self {
            TwoDBase::RiemannSphere | TwoDBase::FinslerSphere { .. } => {
                if !(theta > 0.0 && theta < PI) {
                    return Err(Error::domain(format!(
                        "theta = {theta} outside the chart (0, pi)"
                    )));
                }
            }
            TwoDBase::Hyperbolic => {
                if !(theta > 0.0) {
                    return Err(Error::domain(format!(
                        "polar radius {theta} must be positive"
                    )));
                }
            }
            TwoDBase::Flat => {}
        }
        if let TwoDBase::FinslerSphere { eps } = self {
            if !(0.0..1.0).contains(eps) {
                return Err(Error::domain(format!("epsilon {eps} outside [0, 1)")));
            }
            let root = self.root_term(theta, y_theta, y_phi);
            if !(root > 0.0) {
                return Err(Error::domain(format!(
                    "Randers root term {root:e} is not positive"
                )));
            }
        }
        Ok(())
    }

    /// Hand-derived local data; independent of the jet engine.
    pub fn local(&self, theta: f64, y_theta: f64, y_phi: f64) -> BaseLocal {
        let y = [y_theta, y_phi];
        match self {
            TwoDBase::RiemannSphere | TwoDBase::Hyperbolic | TwoDBase::Flat => {
                // Lbar = y_theta^2 + w(theta) y_phi^2
                let (w, dw) = match self {
                    TwoDBase::RiemannSphere => {
                        let (s, c) = theta.sin_cos();
                        (s * s, 2.0 * s * c)
                    }
                    TwoDBase::Hyperbolic => {
                        let (s, c) = (theta.sinh(), theta.cosh());
                        (s * s, 2.0 * s * c)
                    }
                    _ => (1.0, 0.0),
                };
                BaseLocal {
                    lagrangian: y_theta * y_theta + w * y_phi * y_phi,
                    dl_dy: [2.0 * y_theta, 2.0 * w * y_phi],
                    metric: [[1.0, 0.0], [0.0, w]],
                    spray: [
                        -0.25 * dw * y_phi * y_phi,
                        if w == 1.0 && dw == 0.0 {
                            0.0
                        } else {
                            0.5 * dw / w * y_theta * y_phi
                        },
                    ],
                }
            }
            TwoDBase::FinslerSphere { eps } => randers_sphere_local(*eps, theta, y),
        }
    }
}

/// Randers data `F = alpha + beta` with
/// `alpha^2 = y_theta^2 / u + sin^2 y_phi^2 / u^2`, `beta = -eps sin^2 y_phi / u`,
/// `u = 1 - eps^2 sin^2`.
fn randers_sphere_local(eps: f64, theta: f64, y: [f64; 2]) -> BaseLocal {
    let (s, c) = theta.sin_cos();
    let e2 = eps * eps;
    let u = 1.0 - e2 * s * s;
    let du = -2.0 * e2 * s * c;

    // Riemannian part a_ij = diag(A, B)
    let a_tt = 1.0 / u;
    let a_pp = s * s / (u * u);
    let da_tt = -du / (u * u);
    let da_pp = 2.0 * s * c / (u * u) - 2.0 * s * s * du / (u * u * u);

    // one-form b = (0, beta)
    let beta = -eps * s * s / u;
    let dbeta = -eps * (2.0 * s * c / u - s * s * du / (u * u));

    let alpha = (a_tt * y[0] * y[0] + a_pp * y[1] * y[1]).sqrt();
    let f = alpha + beta * y[1];

    // alpha_i = a_ij y^j / alpha, F_i = alpha_i + b_i
    let alpha_i = [a_tt * y[0] / alpha, a_pp * y[1] / alpha];
    let f_i = [alpha_i[0], alpha_i[1] + beta];
    let a = [[a_tt, 0.0], [0.0, a_pp]];
    let mut metric = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            metric[i][j] = f / alpha * (a[i][j] - alpha_i[i] * alpha_i[j]) + f_i[i] * f_i[j];
        }
    }

    // Christoffel symbols of a (depends on theta only)
    let gam_t_tt = da_tt / (2.0 * a_tt);
    let gam_t_pp = -da_pp / (2.0 * a_tt);
    let gam_p_tp = da_pp / (2.0 * a_pp);
    let g_alpha = [
        0.5 * (gam_t_tt * y[0] * y[0] + gam_t_pp * y[1] * y[1]),
        gam_p_tp * y[0] * y[1],
    ];

    // covariant derivatives b_{i|j}
    let b_t_p = -gam_p_tp * beta;
    let b_p_t = dbeta - gam_p_tp * beta;
    let r_tp = 0.5 * (b_t_p + b_p_t);
    let s_tp = 0.5 * (b_t_p - b_p_t);
    let s_pt = -s_tp;
    let r00 = 2.0 * r_tp * y[0] * y[1];
    // s^i_j = a^{ih} s_hj, s_j = b^i s_ij, b^phi = beta / a_pp
    let s_up_t_p = s_tp / a_tt;
    let s_up_p_t = s_pt / a_pp;
    let s_t = beta / a_pp * s_pt;
    let s0 = s_t * y[0];
    let s_up_0 = [s_up_t_p * y[1], s_up_p_t * y[0]];

    // e_00 = r_00 + 2 beta s_0
    let e00 = r00 + 2.0 * beta * y[1] * s0;
    let common = e00 / (2.0 * f) - s0;
    let spray = [
        g_alpha[0] + common * y[0] + alpha * s_up_0[0],
        g_alpha[1] + common * y[1] + alpha * s_up_0[1],
    ];

    BaseLocal {
        lagrangian: f * f,
        dl_dy: [2.0 * f * f_i[0], 2.0 * f * f_i[1]],
        metric,
        spray,
    }
}

/// The base on its own, as a two-dimensional Finsler structure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Surface(pub TwoDBase);

impl TangentField for Surface {
    fn dim(&self) -> usize {
        2
    }

    fn eval<S: Scalar>(&self, x: &[S], y: &[S]) -> S {
        self.0.lagrangian(&x[0], &y[0], &y[1])
    }

    fn check(&self, at: &EvalPoint) -> Result<()> {
        self.0.check(at.x[0], at.y[0], at.y[1])
    }
}

impl FundamentalFunction for Surface {
    fn label(&self) -> String {
        self.0.label()
    }
}

/// Horizon guard: `|f(r)|` must exceed this for a point to be admissible.
pub const HORIZON_GUARD: f64 = 1e-12;

/// `L = -f (y^t)^2 + (y^r)^2 / f + r^2 Lbar` in coordinates `(t, r, theta, phi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ansatz {
    pub profile: RadialProfile,
    pub base: TwoDBase,
}

impl TangentField for Ansatz {
    fn dim(&self) -> usize {
        4
    }

    fn eval<S: Scalar>(&self, x: &[S], y: &[S]) -> S {
        let r = &x[1];
        let f = self.profile.eval(r);
        let base = self.base.lagrangian(&x[2], &y[2], &y[3]);
        -(f.clone() * y[0].square()) + y[1].square() / f + r.square() * base
    }

    fn check(&self, at: &EvalPoint) -> Result<()> {
        let r = at.x[1];
        if !(r > 0.0) {
            return Err(Error::domain(format!("r = {r} must be positive")));
        }
        let f = self.profile.f(r);
        if !(f.abs() > HORIZON_GUARD) {
            return Err(Error::domain(format!("f(r = {r}) = {f:e} at a horizon")));
        }
        self.base.check(at.x[2], at.y[2], at.y[3])
    }
}

impl FundamentalFunction for Ansatz {
    fn label(&self) -> String {
        format!(
            "{:?}(k={}, GM={}, b={}, q={}) x {}",
            self.profile.kind,
            self.profile.k,
            self.profile.gm,
            self.profile.b,
            self.profile.q2_term,
            self.base.label()
        )
    }
}

/// Composes a radial profile with a two-dimensional base.
pub fn build_ansatz(profile: RadialProfile, base: TwoDBase) -> Result<Ansatz> {
    profile.validate()?;
    base.validate()?;
    if profile.k != base.curvature() {
        return Err(Error::config(format!(
            "profile has k = {} but base {} has curvature {}",
            profile.k,
            base.label(),
            base.curvature()
        )));
    }
    Ok(Ansatz { profile, base })
}
