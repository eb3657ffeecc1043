//! Finite-difference estimates of mixed partials.
//!
//! Kept for cross-validating the jet engine; nothing in the curvature
//! pipeline calls these.

use super::field::{EvalPoint, MultiIndex, TangentField};

/// Nested central differences of `f` at `z0` for the exponent vector `multi`.
pub fn central_partial(f: &dyn Fn(&[f64]) -> f64, z0: &[f64], multi: &[u8], h: f64) -> f64 {
    match multi.iter().position(|&m| m > 0) {
        None => f(z0),
        Some(var) => {
            let mut lowered = multi.to_vec();
            lowered[var] -= 1;
            let mut zp = z0.to_vec();
            let mut zm = z0.to_vec();
            zp[var] += h;
            zm[var] -= h;
            (central_partial(f, &zp, &lowered, h) - central_partial(f, &zm, &lowered, h))
                / (2.0 * h)
        }
    }
}

/// One Richardson step on central differences (steps `h` and `h/2`).
pub fn richardson_partial(f: &dyn Fn(&[f64]) -> f64, z0: &[f64], multi: &[u8], h: f64) -> f64 {
    let coarse = central_partial(f, z0, multi, h);
    let fine = central_partial(f, z0, multi, h / 2.0);
    (4.0 * fine - coarse) / 3.0
}

/// Finite-difference partial of a tangent field, joint `(x, y)` indexing.
pub fn field_partial<F: TangentField + ?Sized>(
    field: &F,
    at: &EvalPoint,
    index: &MultiIndex,
    h: f64,
    richardson: bool,
) -> f64 {
    let n = at.dim();
    let f = |z: &[f64]| field.eval(&z[..n], &z[n..]);
    let z0: Vec<f64> = at.x.iter().chain(at.y.iter()).copied().collect();
    if richardson {
        richardson_partial(&f, &z0, index.counts(), h)
    } else {
        central_partial(&f, &z0, index.counts(), h)
    }
}
