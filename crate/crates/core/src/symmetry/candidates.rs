//! Separable candidate families: `V^t, V^r` polynomial in `(t, r)`, and
//! `V^theta, V^phi` built from powers of `cos(theta)` times a Fourier series
//! in `phi`; `V^phi` may also carry a `1/sin(theta)` factor so that the
//! rotations of the round sphere lie in the span.

use crate::jets::Scalar;

use super::{SampleRegion, VectorField};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Factor {
    /// `((t - t0)/st)^i ((r - r0)/sr)^j` in the first two coordinates.
    Polynomial {
        powers: [u8; 2],
        center: [f64; 2],
        scale: [f64; 2],
    },
    /// `cos(theta)^a / sin(theta)^s * trig(k phi)`, with `fourier > 0` for
    /// `cos`, `< 0` for `sin` and `0` for the constant.
    Angular {
        cos_power: u8,
        inverse_sine: bool,
        fourier: i8,
    },
}

/// A single-component candidate `V^component = factor`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CandidateField {
    pub dim: usize,
    pub component: usize,
    pub factor: Factor,
}

impl VectorField for CandidateField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn label(&self) -> String {
        format!("V^{} = {:?}", self.component, self.factor)
    }

    fn components<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        let n = self.dim;
        let value = match self.factor {
            Factor::Polynomial {
                powers,
                center,
                scale,
            } => {
                let a = (x[0].clone() - center[0]) * (1.0 / scale[0]);
                let b = (x[1].clone() - center[1]) * (1.0 / scale[1]);
                a.powi(powers[0] as i32) * b.powi(powers[1] as i32)
            }
            Factor::Angular {
                cos_power,
                inverse_sine,
                fourier,
            } => {
                let (theta, phi) = (&x[n - 2], &x[n - 1]);
                let mut v = theta.cos().powi(cos_power as i32);
                if inverse_sine {
                    v = v / theta.sin();
                }
                match fourier {
                    0 => v,
                    k if k > 0 => v * (phi.clone() * k as f64).cos(),
                    k => v * (phi.clone() * (-k) as f64).sin(),
                }
            }
        };
        (0..n)
            .map(|mu| {
                if mu == self.component {
                    value.clone()
                } else {
                    x[0].constant_like(0.0)
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FamilyOptions {
    /// Total degree of the `(t, r)` polynomials.
    pub poly_degree: u8,
    /// Highest power of `cos(theta)`.
    pub cos_degree: u8,
    /// Highest Fourier order in `phi`.
    pub fourier_order: u8,
    /// Include `1/sin(theta)` factors in `V^phi`.
    pub inverse_sine: bool,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions {
            poly_degree: 4,
            cos_degree: 4,
            fourier_order: 2,
            inverse_sine: true,
        }
    }
}

fn angular(dim: usize, opts: &FamilyOptions) -> Vec<CandidateField> {
    let mut out = Vec::new();
    let orders: Vec<i8> = std::iter::once(0)
        .chain((1..=opts.fourier_order as i8).flat_map(|k| [k, -k]))
        .collect();
    for component in [dim - 2, dim - 1] {
        let sines: &[bool] = if component == dim - 1 && opts.inverse_sine {
            &[false, true]
        } else {
            &[false]
        };
        for &inverse_sine in sines {
            for cos_power in 0..=opts.cos_degree {
                for &fourier in &orders {
                    out.push(CandidateField {
                        dim,
                        component,
                        factor: Factor::Angular {
                            cos_power,
                            inverse_sine,
                            fourier,
                        },
                    });
                }
            }
        }
    }
    out
}

/// Candidates on a two-dimensional `(theta, phi)` chart.
pub fn surface_family(opts: &FamilyOptions) -> Vec<CandidateField> {
    angular(2, opts)
}

/// Candidates on a `(t, r, theta, phi)` chart. The `(t, r)` polynomials are
/// centered and scaled to the sampled box to keep the system well conditioned.
pub fn spacetime_family(opts: &FamilyOptions, region: &SampleRegion) -> Vec<CandidateField> {
    let center = [region.center(0), region.center(1)];
    let scale = [
        region.half_width(0).max(1e-12),
        region.half_width(1).max(1e-12),
    ];
    let mut out = Vec::new();
    for component in 0..2 {
        for total in 0..=opts.poly_degree {
            for i in 0..=total {
                out.push(CandidateField {
                    dim: 4,
                    component,
                    factor: Factor::Polynomial {
                        powers: [i, total - i],
                        center,
                        scale,
                    },
                });
            }
        }
    }
    out.extend(angular(4, opts));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        let opts = FamilyOptions::default();
        assert_eq!(surface_family(&opts).len(), 25 + 50);
        let region = SampleRegion::new(vec![(-1.0, 1.0), (3.0, 8.0), (0.3, 2.8), (0.0, 6.0)]);
        assert_eq!(spacetime_family(&opts, &region).len(), 30 + 75);
    }
}
