use crate::error::{Error, Result};

/// `W(r) = A r^{n1} + B r^{n2}` solving `r^{-2} (r^2 W')' + lambda W / r^2 = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialSolution {
    pub n1: f64,
    pub n2: f64,
    pub a: f64,
    pub b: f64,
}

impl RadialSolution {
    pub fn eval(&self, r: f64) -> f64 {
        self.a * r.powf(self.n1) + self.b * r.powf(self.n2)
    }
}

/// Exponents `n = (-1 +- sqrt(1 - 4 lambda)) / 2`.
pub fn radial_exponents(lambda: f64) -> Result<(f64, f64)> {
    if !(lambda <= 0.0) {
        return Err(Error::config(format!(
            "eigenvalue {lambda} must be non-positive"
        )));
    }
    let root = (1.0 - 4.0 * lambda).sqrt();
    Ok((0.5 * (-1.0 + root), 0.5 * (-1.0 - root)))
}

/// Fits `A`, `B` to two boundary values `W(r_i) = w_i`.
pub fn radial_solution(lambda: f64, boundary: [(f64, f64); 2]) -> Result<RadialSolution> {
    let (n1, n2) = radial_exponents(lambda)?;
    let [(r1, w1), (r2, w2)] = boundary;
    if !(r1 > 0.0 && r2 > 0.0 && r1.is_finite() && r2.is_finite()) {
        return Err(Error::config("boundary radii must be positive and finite"));
    }
    let (a11, a12, a21, a22) = (r1.powf(n1), r1.powf(n2), r2.powf(n1), r2.powf(n2));
    let det = a11 * a22 - a12 * a21;
    let scale = (a11 * a22).abs().max((a12 * a21).abs());
    if !(det.abs() > 1e-12 * scale) {
        return Err(Error::config(format!(
            "boundary system is singular (radii {r1}, {r2})"
        )));
    }
    Ok(RadialSolution {
        n1,
        n2,
        a: (w1 * a22 - w2 * a12) / det,
        b: (a11 * w2 - a21 * w1) / det,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monopole_and_dipole() {
        assert_eq!(radial_exponents(0.0).unwrap(), (0.0, -1.0));
        assert_eq!(radial_exponents(-2.0).unwrap(), (1.0, -2.0));
    }

    #[test]
    fn boundary_values_reproduced() {
        let s = radial_solution(-6.0, [(1.0, 2.0), (3.0, -1.0)]).unwrap();
        assert!((s.eval(1.0) - 2.0).abs() < 1e-13);
        assert!((s.eval(3.0) + 1.0).abs() < 1e-13);
    }

    #[test]
    fn solves_the_radial_equation() {
        let lambda = -2.0 + 2.0 * 0.01;
        let s = radial_solution(lambda, [(1.0, 1.0), (2.0, 0.3)]).unwrap();
        let r = 1.7;
        let h = 1e-4;
        let w = |r: f64| s.eval(r);
        let flux = |r: f64| r * r * (w(r + h) - w(r - h)) / (2.0 * h);
        let lhs = (flux(r + h) - flux(r - h)) / (2.0 * h) / (r * r) + lambda * w(r) / (r * r);
        assert!(lhs.abs() < 1e-6);
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(radial_solution(-2.0, [(1.0, 1.0), (1.0, 2.0)]), Err(Error::Config(_))));
        assert!(matches!(radial_solution(0.5, [(1.0, 1.0), (2.0, 2.0)]), Err(Error::Config(_))));
        assert!(matches!(radial_solution(-2.0, [(0.0, 1.0), (2.0, 2.0)]), Err(Error::Config(_))));
    }
}
