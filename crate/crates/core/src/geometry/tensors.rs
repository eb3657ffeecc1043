//! Jet-level tensor algebra shared by the pointwise geometry operations.

use crate::error::{Error, Result};
use crate::jets::{seed, EvalPoint, Jet, MAX_ORDER};

use super::FundamentalFunction;

pub(crate) type JetMatrix = Vec<Vec<Jet>>;

/// `L = F^2` expanded about a point, with the direction variables at hand.
pub(crate) struct Expansion {
    pub n: usize,
    pub lagrangian: Jet,
    pub ys: Vec<Jet>,
}

impl Expansion {
    pub fn new<F: FundamentalFunction + ?Sized>(
        field: &F,
        at: &EvalPoint,
        order: usize,
    ) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::Capability {
                requested: order,
                max: MAX_ORDER,
            });
        }
        if at.dim() != field.dim() {
            return Err(Error::config(format!(
                "point has dimension {}, {} expects {}",
                at.dim(),
                field.label(),
                field.dim()
            )));
        }
        field.check(at)?;
        let (_, xs, ys) = seed(at, order)?;
        let lagrangian = field.eval(&xs, &ys);
        if !lagrangian.value().is_finite() {
            return Err(Error::domain(format!(
                "{} is not finite at {:?}",
                field.label(),
                at
            )));
        }
        Ok(Expansion {
            n: at.dim(),
            lagrangian,
            ys,
        })
    }

    pub fn x_var(&self, i: usize) -> usize {
        i
    }

    pub fn y_var(&self, i: usize) -> usize {
        self.n + i
    }

    /// `dL/dy^nu` for every `nu`.
    pub fn dl_dy(&self) -> Vec<Jet> {
        (0..self.n)
            .map(|nu| self.lagrangian.derivative(self.y_var(nu)))
            .collect()
    }

    /// `g_{mu nu} = 1/2 d^2 L / dy^mu dy^nu`, from precomputed `dL/dy`.
    pub fn metric(&self, dl_dy: &[Jet]) -> JetMatrix {
        let n = self.n;
        let mut g: JetMatrix = Vec::with_capacity(n);
        for mu in 0..n {
            let mut row = Vec::with_capacity(n);
            for nu in 0..n {
                if nu < mu {
                    row.push(g[nu][mu].clone());
                } else {
                    row.push(dl_dy[nu].derivative(self.y_var(mu)) * 0.5);
                }
            }
            g.push(row);
        }
        g
    }
}

pub(crate) fn values(m: &JetMatrix) -> nalgebra::DMatrix<f64> {
    let n = m.len();
    nalgebra::DMatrix::from_fn(n, n, |i, j| m[i][j].value())
}

/// Gauss-Jordan inverse on jets, pivoting on the constant terms.
pub(crate) fn invert(m: &JetMatrix) -> Result<JetMatrix> {
    let n = m.len();
    let det = values(m).determinant();
    if !(det.abs() > DET_FLOOR) {
        return Err(Error::Singular { det: det.abs() });
    }
    let zero = m[0][0].constant_like(0.0);
    let one = m[0][0].constant_like(1.0);
    let mut a: JetMatrix = m.to_vec();
    let mut inv: JetMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { one.clone() } else { zero.clone() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| {
                a[p][col]
                    .value()
                    .abs()
                    .total_cmp(&a[q][col].value().abs())
            })
            .unwrap();
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = a[col][col].recip();
        for j in 0..n {
            a[col][j] = &a[col][j] * &scale;
            inv[col][j] = &inv[col][j] * &scale;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = a[row][col].clone();
            if factor.value() == 0.0 && factor.order() == 0 {
                continue;
            }
            for j in 0..n {
                a[row][j] = &a[row][j] - &(&factor * &a[col][j]);
                inv[row][j] = &inv[row][j] - &(&factor * &inv[col][j]);
            }
        }
    }
    Ok(inv)
}

/// Metric determinant floor below which the metric counts as degenerate.
pub(crate) const DET_FLOOR: f64 = 1e-12;

/// Spray jets `G^mu` together with the metric and its inverse.
pub(crate) struct SprayJets {
    pub g: JetMatrix,
    pub g_inv: JetMatrix,
    pub spray: Vec<Jet>,
    pub dl_dy: Vec<Jet>,
}

/// `G^mu = 1/4 g^{mu nu} (y^lambda d^2L/dx^lambda dy^nu - dL/dx^nu)`.
pub(crate) fn spray_jets(e: &Expansion) -> Result<SprayJets> {
    let n = e.n;
    let dl_dy = e.dl_dy();
    let g = e.metric(&dl_dy);
    let g_inv = invert(&g)?;
    let rhs: Vec<Jet> = (0..n)
        .map(|nu| {
            let mut acc = -e.lagrangian.derivative(e.x_var(nu));
            for lambda in 0..n {
                acc = acc + &e.ys[lambda] * &dl_dy[nu].derivative(e.x_var(lambda));
            }
            acc
        })
        .collect();
    let spray = (0..n)
        .map(|mu| {
            let mut acc = &g_inv[mu][0] * &rhs[0];
            for nu in 1..n {
                acc = acc + &g_inv[mu][nu] * &rhs[nu];
            }
            acc * 0.25
        })
        .collect();
    Ok(SprayJets {
        g,
        g_inv,
        spray,
        dl_dy,
    })
}

/// `F^2 R^mu_nu` jets:
/// `2 dG^mu/dx^nu - y^l d^2G^mu/dx^l dy^nu + 2 G^l d^2G^mu/dy^l dy^nu
///  - dG^mu/dy^l dG^l/dy^nu`.
pub(crate) fn scaled_predecessor_jets(e: &Expansion, spray: &[Jet]) -> JetMatrix {
    let n = e.n;
    let dgy: JetMatrix = spray
        .iter()
        .map(|gm| (0..n).map(|l| gm.derivative(e.y_var(l))).collect())
        .collect();
    let dgx: JetMatrix = spray
        .iter()
        .map(|gm| (0..n).map(|l| gm.derivative(e.x_var(l))).collect())
        .collect();
    (0..n)
        .map(|mu| {
            (0..n)
                .map(|nu| {
                    let mut acc = &dgx[mu][nu] * 2.0;
                    for l in 0..n {
                        let mixed = dgx[mu][l].derivative(e.y_var(nu));
                        acc = acc - &e.ys[l] * &mixed;
                        let hess = dgy[mu][l].derivative(e.y_var(nu));
                        acc = acc + &(&spray[l] * &hess) * 2.0;
                        acc = acc - &dgy[mu][l] * &dgy[l][nu];
                    }
                    acc
                })
                .collect()
        })
        .collect()
}
