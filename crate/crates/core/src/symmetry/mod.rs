//! Killing vectors of a Finsler structure: pointwise residual of the Lie
//! derivative of `g_{mu nu}(x, y)` and numerical null-space counting over a
//! finite candidate family.

mod candidates;
mod sampling;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{derived_jets, FundamentalFunction};
use crate::jets::{EvalPoint, Jet, JetSpace, Scalar};

pub use candidates::{spacetime_family, surface_family, CandidateField, FamilyOptions, Factor};
pub use sampling::{halton, SampleRegion};

/// A vector field `V^mu(x)` on the base manifold.
pub trait VectorField: Sync {
    fn dim(&self) -> usize;

    fn label(&self) -> String;

    fn components<S: Scalar>(&self, x: &[S]) -> Vec<S>;
}

/// Coordinate field `d/dx^index`.
#[derive(Clone, Copy, Debug)]
pub struct CoordinateField {
    pub dim: usize,
    pub index: usize,
}

impl VectorField for CoordinateField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn label(&self) -> String {
        format!("d/dx{}", self.index)
    }

    fn components<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        (0..self.dim)
            .map(|mu| x[0].constant_like(if mu == self.index { 1.0 } else { 0.0 }))
            .collect()
    }
}

/// Rotation generators of the round sphere, acting on the last two
/// coordinates `(theta, phi)` of a chart of dimension `dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rotation {
    X,
    Y,
    Z,
}

#[derive(Clone, Copy, Debug)]
pub struct RotationField {
    pub dim: usize,
    pub axis: Rotation,
}

impl VectorField for RotationField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn label(&self) -> String {
        format!("rotation {:?}", self.axis)
    }

    fn components<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        let n = self.dim;
        let (theta, phi) = (&x[n - 2], &x[n - 1]);
        let mut v: Vec<S> = (0..n).map(|_| x[0].constant_like(0.0)).collect();
        match self.axis {
            Rotation::Z => v[n - 1] = x[0].constant_like(1.0),
            Rotation::X => {
                let cot = theta.cos() / theta.sin();
                v[n - 2] = -phi.sin();
                v[n - 1] = -(cot * phi.cos());
            }
            Rotation::Y => {
                let cot = theta.cos() / theta.sin();
                v[n - 2] = phi.cos();
                v[n - 1] = -(cot * phi.sin());
            }
        }
        v
    }
}

/// `a V + b W`.
#[derive(Clone, Copy, Debug)]
pub struct Combination<V, W> {
    pub a: f64,
    pub first: V,
    pub b: f64,
    pub second: W,
}

impl<V: VectorField, W: VectorField> VectorField for Combination<V, W> {
    fn dim(&self) -> usize {
        self.first.dim()
    }

    fn label(&self) -> String {
        format!("{} * ({}) + {} * ({})", self.a, self.first.label(), self.b, self.second.label())
    }

    fn components<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        let u = self.first.components(x);
        let w = self.second.components(x);
        u.into_iter()
            .zip(w)
            .map(|(p, q)| p * self.a + q * self.b)
            .collect()
    }
}

/// Values `V^mu` and Jacobian `dV^mu/dx^nu` (row `mu`, column `nu`).
pub fn jacobian<V: VectorField + ?Sized>(field: &V, x: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = x.len();
    let space = JetSpace::get(n, 1)?;
    let xs: Vec<Jet> = (0..n).map(|i| Jet::variable(&space, i, x[i])).collect();
    let comps = field.components(&xs);
    if comps.len() != n {
        return Err(Error::config(format!(
            "vector field {} has {} components in a {n}-dimensional chart",
            field.label(),
            comps.len()
        )));
    }
    let values: Vec<f64> = comps.iter().map(|c| c.value()).collect();
    let jac = DMatrix::from_fn(n, n, |mu, nu| comps[mu].d1(nu));
    if values.iter().chain(jac.iter()).any(|v| !v.is_finite()) {
        return Err(Error::domain(format!(
            "vector field {} is singular at {x:?}",
            field.label()
        )));
    }
    Ok((values, jac))
}

/// The metric and its first derivatives at one point.
#[derive(Clone, Debug)]
pub struct MetricJet {
    pub y: Vec<f64>,
    pub g: DMatrix<f64>,
    /// `dg/dx^mu` for each `mu`.
    pub dg_dx: Vec<DMatrix<f64>>,
    /// `dg/dy^mu` for each `mu`.
    pub dg_dy: Vec<DMatrix<f64>>,
}

impl MetricJet {
    pub fn new<F: FundamentalFunction + ?Sized>(field: &F, at: &EvalPoint) -> Result<Self> {
        let (g, _) = derived_jets(field, at, 1)?;
        let n = at.dim();
        let part = |var: usize| DMatrix::from_fn(n, n, |a, b| g[a][b].d1(var));
        Ok(MetricJet {
            y: at.y.clone(),
            g: DMatrix::from_fn(n, n, |a, b| g[a][b].value()),
            dg_dx: (0..n).map(part).collect(),
            dg_dy: (0..n).map(|mu| part(n + mu)).collect(),
        })
    }

    /// `K_{ab} = V^m dg_ab/dx^m + g_al dV^l/dx^b + g_lb dV^l/dx^a
    ///  + y^n dV^m/dx^n dg_ab/dy^m`.
    pub fn lie_derivative(&self, v: &[f64], dv: &DMatrix<f64>) -> DMatrix<f64> {
        let n = v.len();
        let gdv = &self.g * dv;
        let mut k = &gdv + gdv.transpose();
        for mu in 0..n {
            let lift: f64 = (0..n).map(|nu| self.y[nu] * dv[(mu, nu)]).sum();
            k += &self.dg_dx[mu] * v[mu] + &self.dg_dy[mu] * lift;
        }
        k
    }
}

/// Max-norm of the Killing-equation residual of `v` at `at`.
pub fn killing_residual<F, V>(field: &F, v: &V, at: &EvalPoint) -> Result<f64>
where
    F: FundamentalFunction + ?Sized,
    V: VectorField + ?Sized,
{
    if v.dim() != at.dim() {
        return Err(Error::config("vector field and point dimensions differ"));
    }
    let geo = MetricJet::new(field, at)?;
    let (values, jac) = jacobian(v, &at.x)?;
    Ok(geo.lie_derivative(&values, &jac).amax())
}

/// Default relative singular-value threshold for null vectors.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// Minimum ratio of scalar equations to unknowns.
pub const OVERSAMPLING: usize = 10;

#[derive(Clone, Debug)]
pub struct KillingAnalysis {
    /// Dimension of the numerical null space.
    pub rank: usize,
    /// Singular values of the column-normalized system, descending.
    pub singular_values: Vec<f64>,
    pub equations: usize,
    pub unknowns: usize,
    /// Null-space basis in candidate coordinates (unnormalized columns).
    pub null_vectors: Vec<Vec<f64>>,
}

/// Assembles the Killing system for `family` over `sample` and returns its
/// numerical null-space dimension.
pub fn killing_rank<F, V>(field: &F, family: &[V], sample: &[EvalPoint]) -> Result<usize>
where
    F: FundamentalFunction + ?Sized,
    V: VectorField,
{
    Ok(killing_analysis(field, family, sample, RANK_THRESHOLD)?.rank)
}

pub fn killing_analysis<F, V>(
    field: &F,
    family: &[V],
    sample: &[EvalPoint],
    threshold: f64,
) -> Result<KillingAnalysis>
where
    F: FundamentalFunction + ?Sized,
    V: VectorField,
{
    let unknowns = family.len();
    if unknowns == 0 {
        return Err(Error::config("empty candidate family"));
    }
    let n = field.dim();
    let per_point = n * (n + 1) / 2;
    let equations = per_point * sample.len();
    if equations < OVERSAMPLING * unknowns {
        return Err(Error::config(format!(
            "{equations} equations for {unknowns} unknowns; need at least {}x",
            OVERSAMPLING
        )));
    }
    if family.iter().any(|v| v.dim() != n) {
        return Err(Error::config("candidate dimension does not match the field"));
    }

    let blocks: Vec<DMatrix<f64>> = sample
        .par_iter()
        .map(|at| -> Result<DMatrix<f64>> {
            let geo = MetricJet::new(field, at)?;
            let mut block = DMatrix::zeros(per_point, unknowns);
            for (col, v) in family.iter().enumerate() {
                let (values, jac) = jacobian(v, &at.x)?;
                let k = geo.lie_derivative(&values, &jac);
                let mut row = 0;
                for a in 0..n {
                    for b in a..n {
                        block[(row, col)] = k[(a, b)];
                        row += 1;
                    }
                }
            }
            Ok(block)
        })
        .collect::<Result<_>>()?;

    let mut system = DMatrix::zeros(equations, unknowns);
    for (i, b) in blocks.iter().enumerate() {
        system.rows_mut(i * per_point, per_point).copy_from(b);
    }
    let scales: Vec<f64> = (0..unknowns)
        .map(|c| {
            let norm = system.column(c).norm();
            if norm > 0.0 {
                norm
            } else {
                1.0
            }
        })
        .collect();
    for (c, s) in scales.iter().enumerate() {
        system.column_mut(c).scale_mut(1.0 / s);
    }

    let svd = system.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let cutoff = threshold * singular_values[0];
    let null: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| svd.singular_values[i] < cutoff)
        .collect();
    let null_vectors = null
        .iter()
        .map(|&i| (0..unknowns).map(|c| v_t[(i, c)] / scales[c]).collect())
        .collect();

    Ok(KillingAnalysis {
        rank: null.len(),
        singular_values,
        equations,
        unknowns,
        null_vectors,
    })
}
