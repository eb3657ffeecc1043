use std::sync::Arc;

use super::jet::Jet;
use super::scalar::Scalar;
use super::space::{JetSpace, MAX_ORDER};
use crate::error::{Error, Result};

/// A point `(x, y)` of the slit tangent bundle in a coordinate chart.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl EvalPoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::config(format!(
                "position has {} components, direction has {}",
                x.len(),
                y.len()
            )));
        }
        if !(2..=4).contains(&x.len()) {
            return Err(Error::config(format!(
                "unsupported chart dimension {}",
                x.len()
            )));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::domain("non-finite coordinate"));
        }
        Ok(EvalPoint { x, y })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Same base point, direction scaled by `lambda`.
    pub fn scaled(&self, lambda: f64) -> EvalPoint {
        EvalPoint {
            x: self.x.clone(),
            y: self.y.iter().map(|v| v * lambda).collect(),
        }
    }

    pub fn y_norm_sq(&self) -> f64 {
        self.y.iter().map(|v| v * v).sum()
    }
}

/// A scalar field on the tangent bundle, written once over [`Scalar`].
///
/// Variables are ordered `x^0..x^{n-1}, y^0..y^{n-1}` whenever a joint
/// index over both is needed.
pub trait TangentField: Sync {
    fn dim(&self) -> usize;

    fn eval<S: Scalar>(&self, x: &[S], y: &[S]) -> S;

    /// Admissibility of a point; evaluation is only attempted after this passes.
    fn check(&self, _at: &EvalPoint) -> Result<()> {
        Ok(())
    }

    fn value_at(&self, at: &EvalPoint) -> Result<f64> {
        self.check(at)?;
        Ok(self.eval(&at.x, &at.y))
    }
}

/// Coordinate jets `x + dz`, `y + dz` about a point.
pub fn seed(at: &EvalPoint, order: usize) -> Result<(Arc<JetSpace>, Vec<Jet>, Vec<Jet>)> {
    let n = at.dim();
    let space = JetSpace::get(2 * n, order)?;
    let xs = (0..n)
        .map(|i| Jet::variable(&space, i, at.x[i]))
        .collect();
    let ys = (0..n)
        .map(|i| Jet::variable(&space, n + i, at.y[i]))
        .collect();
    Ok((space, xs, ys))
}

/// Taylor jet of `field` about `at`, valid through total order `order`.
pub fn jet_of<F: TangentField + ?Sized>(field: &F, at: &EvalPoint, order: usize) -> Result<Jet> {
    if order > MAX_ORDER {
        return Err(Error::Capability {
            requested: order,
            max: MAX_ORDER,
        });
    }
    if at.dim() != field.dim() {
        return Err(Error::config(format!(
            "point has dimension {}, field expects {}",
            at.dim(),
            field.dim()
        )));
    }
    field.check(at)?;
    let (_, xs, ys) = seed(at, order)?;
    Ok(field.eval(&xs, &ys))
}

/// Which coordinate a derivative is taken in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X(usize),
    Y(usize),
}

/// Derivative request: exponent per joint `(x, y)` variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiIndex {
    dim: usize,
    counts: Vec<u8>,
}

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        MultiIndex {
            dim,
            counts: vec![0; 2 * dim],
        }
    }

    /// One entry per differentiation, in any order.
    pub fn from_vars(dim: usize, vars: &[Var]) -> Result<Self> {
        let mut m = MultiIndex::zero(dim);
        for &v in vars {
            let slot = match v {
                Var::X(i) if i < dim => i,
                Var::Y(i) if i < dim => dim + i,
                _ => return Err(Error::config(format!("variable {v:?} out of range"))),
            };
            m.counts[slot] += 1;
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn counts(&self) -> &[u8] {
        &self.counts
    }
}

/// Exact mixed partial of `field` at `at`.
pub fn partial<F: TangentField + ?Sized>(
    field: &F,
    at: &EvalPoint,
    index: &MultiIndex,
) -> Result<f64> {
    if index.dim() != at.dim() {
        return Err(Error::config("multi-index dimension does not match point"));
    }
    let jet = jet_of(field, at, index.order())?;
    jet.partial(index.counts())
}

/// `|y^mu d(field)/dy^mu - degree * field|` at the expansion point of `jet`.
///
/// `jet` must be a first-order (or higher) jet in the joint `(x, y)` variables.
pub fn homogeneity_residual(jet: &Jet, y: &[f64], degree: i32) -> f64 {
    let n = y.len();
    let euler: f64 = (0..n).map(|mu| y[mu] * jet.d1(n + mu)).sum();
    (euler - degree as f64 * jet.value()).abs()
}

/// Euler-theorem residual for positive homogeneity of the given degree in `y`.
pub fn homogeneity_check<F: TangentField + ?Sized>(
    field: &F,
    at: &EvalPoint,
    degree: i32,
) -> Result<f64> {
    let jet = jet_of(field, at, 1)?;
    Ok(homogeneity_residual(&jet, &at.y, degree))
}

#[cfg(test)]
mod tests {
    use super::*;

    struct RoundSphere;

    impl TangentField for RoundSphere {
        fn dim(&self) -> usize {
            2
        }
        fn eval<S: Scalar>(&self, x: &[S], y: &[S]) -> S {
            let s = x[0].sin();
            y[0].square() + s.square() * y[1].square()
        }
    }

    fn at(theta: f64, yt: f64, yp: f64) -> EvalPoint {
        EvalPoint::new(vec![theta, 0.4], vec![yt, yp]).unwrap()
    }

    #[test]
    fn quadratic_form_second_derivative() {
        let p = at(1.1, 0.3, -0.7);
        let idx = MultiIndex::from_vars(2, &[Var::Y(0), Var::Y(0)]).unwrap();
        assert_eq!(partial(&RoundSphere, &p, &idx).unwrap(), 2.0);
    }

    #[test]
    fn third_y_derivatives_vanish() {
        let p = at(0.9, 1.3, 0.2);
        let combos = [
            [Var::Y(0), Var::Y(0), Var::Y(0)],
            [Var::Y(0), Var::Y(1), Var::Y(1)],
            [Var::Y(1), Var::Y(1), Var::Y(1)],
            [Var::Y(1), Var::Y(0), Var::Y(1)],
        ];
        for c in combos {
            let idx = MultiIndex::from_vars(2, &c).unwrap();
            assert_eq!(partial(&RoundSphere, &p, &idx).unwrap(), 0.0);
        }
    }

    #[test]
    fn order_overflow_is_capability_error() {
        let p = at(1.0, 1.0, 1.0);
        let idx = MultiIndex::from_vars(2, &[Var::X(0); 9]).unwrap();
        assert!(matches!(
            partial(&RoundSphere, &p, &idx),
            Err(Error::Capability { requested: 9, .. })
        ));
    }

    #[test]
    fn euler_residual_for_quadratic() {
        let p = at(0.6, -0.4, 2.0);
        assert!(homogeneity_check(&RoundSphere, &p, 2).unwrap() < 1e-14);
        assert!(homogeneity_check(&RoundSphere, &p, 1).unwrap() > 1e-3);
    }

    #[test]
    fn rejects_bad_points() {
        assert!(EvalPoint::new(vec![1.0], vec![1.0]).is_err());
        assert!(EvalPoint::new(vec![1.0, 2.0], vec![1.0]).is_err());
        assert!(EvalPoint::new(vec![1.0, f64::NAN], vec![1.0, 0.0]).is_err());
    }
}
