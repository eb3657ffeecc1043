use crate::error::{Error, Result};
use crate::jets::{EvalPoint, TangentField};

const PRIMES: [u32; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Radical inverse of `index` in `base` (van der Corput).
pub fn halton(mut index: u64, base: u32) -> f64 {
    let b = base as u64;
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while index > 0 {
        out += (index % b) as f64 * inv;
        index /= b;
        inv /= base as f64;
    }
    out
}

/// Box of chart positions with directions drawn from `[-1, 1]^n`.
#[derive(Clone, Debug)]
pub struct SampleRegion {
    pub x_ranges: Vec<(f64, f64)>,
    /// Skipped leading Halton indices.
    pub skip: u64,
}

impl SampleRegion {
    pub fn new(x_ranges: Vec<(f64, f64)>) -> Self {
        SampleRegion { x_ranges, skip: 17 }
    }

    pub fn dim(&self) -> usize {
        self.x_ranges.len()
    }

    pub fn center(&self, i: usize) -> f64 {
        0.5 * (self.x_ranges[i].0 + self.x_ranges[i].1)
    }

    pub fn half_width(&self, i: usize) -> f64 {
        0.5 * (self.x_ranges[i].1 - self.x_ranges[i].0)
    }

    /// The `k`-th low-discrepancy point, without admissibility checks.
    pub fn point(&self, k: u64) -> EvalPoint {
        let n = self.dim();
        let idx = k + self.skip;
        let x = (0..n)
            .map(|i| {
                let (lo, hi) = self.x_ranges[i];
                lo + (hi - lo) * halton(idx, PRIMES[i])
            })
            .collect();
        let y = (0..n)
            .map(|i| 2.0 * halton(idx, PRIMES[n + i]) - 1.0)
            .collect();
        EvalPoint { x, y }
    }

    /// First `count` points of the sequence that `field` accepts.
    pub fn admissible<F: TangentField + ?Sized>(&self, field: &F, count: usize) -> Result<Vec<EvalPoint>> {
        let n = self.dim();
        if !(2..=4).contains(&n) || n != field.dim() {
            return Err(Error::config(format!(
                "sample region of dimension {n} does not fit a {}-dimensional field",
                field.dim()
            )));
        }
        if self.x_ranges.iter().any(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo <= hi)) {
            return Err(Error::config("sample ranges must be finite and ordered"));
        }
        let mut out = Vec::with_capacity(count);
        let budget = 100 * count as u64 + 100;
        let mut k = 0;
        while out.len() < count {
            if k >= budget {
                return Err(Error::config(format!(
                    "only {} of {count} sample points admissible",
                    out.len()
                )));
            }
            let p = self.point(k);
            if field.check(&p).is_ok() && field.value_at(&p).is_ok_and(f64::is_finite) {
                out.push(p);
            }
            k += 1;
        }
        Ok(out)
    }
}
