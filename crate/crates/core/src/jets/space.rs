use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};

/// Highest total derivative order the engine will build tables for.
pub const MAX_ORDER: usize = 8;

/// Monomial bookkeeping for truncated Taylor series in `nvars` variables up
/// to total degree `order`.
///
/// Monomials are stored in graded order, so the coefficients of degree `<= d`
/// always form a prefix of the coefficient vector.
#[derive(Debug)]
pub struct JetSpace {
    nvars: usize,
    order: usize,
    exponents: Vec<u8>,
    /// `degree_end[d]`: number of monomials of degree `<= d`.
    degree_end: Vec<usize>,
    /// Product triples `(i, j, k)` with `z^a_i * z^a_j = z^a_k`, sorted by the
    /// degree of `k`.
    products: Vec<[u32; 3]>,
    product_end: Vec<usize>,
    /// Per variable: `(src, dst, factor)` with `d/dz_v z^src = factor * z^dst`,
    /// sorted by the degree of `src`.
    derivs: Vec<Vec<(u32, u32, f64)>>,
    deriv_end: Vec<Vec<usize>>,
    lookup: HashMap<Vec<u8>, u32>,
}

impl JetSpace {
    fn build(nvars: usize, order: usize) -> Self {
        let mut exponents = Vec::new();
        let mut degree_end = Vec::with_capacity(order + 1);
        let mut count = 0usize;
        let mut current = vec![0u8; nvars];
        for degree in 0..=order {
            enumerate_degree(nvars, degree, 0, &mut current, &mut |e| {
                exponents.extend_from_slice(e);
                count += 1;
            });
            degree_end.push(count);
        }

        let mut lookup = HashMap::with_capacity(count);
        for i in 0..count {
            lookup.insert(exponents[i * nvars..(i + 1) * nvars].to_vec(), i as u32);
        }

        let degree_of = |i: usize| degree_end.iter().position(|&end| i < end).unwrap();

        let mut products = Vec::new();
        let mut sum = vec![0u8; nvars];
        for i in 0..count {
            let di = degree_of(i);
            let ai = &exponents[i * nvars..(i + 1) * nvars];
            for j in 0..degree_end[order - di] {
                let aj = &exponents[j * nvars..(j + 1) * nvars];
                for v in 0..nvars {
                    sum[v] = ai[v] + aj[v];
                }
                let k = lookup[&sum];
                products.push([i as u32, j as u32, k]);
            }
        }
        products.sort_by_key(|t| t[2]);
        let mut product_end = vec![0usize; order + 1];
        for (d, end) in product_end.iter_mut().enumerate() {
            *end = products.partition_point(|t| (t[2] as usize) < degree_end[d]);
        }

        let mut derivs = Vec::with_capacity(nvars);
        let mut deriv_end = Vec::with_capacity(nvars);
        for v in 0..nvars {
            let mut table = Vec::new();
            let mut ends = vec![0usize; order + 1];
            for src in 0..count {
                let a = &exponents[src * nvars..(src + 1) * nvars];
                if a[v] == 0 {
                    continue;
                }
                let mut lowered = a.to_vec();
                lowered[v] -= 1;
                table.push((src as u32, lookup[&lowered], a[v] as f64));
            }
            for (d, end) in ends.iter_mut().enumerate() {
                *end = table.partition_point(|t| (t.0 as usize) < degree_end[d]);
            }
            derivs.push(table);
            deriv_end.push(ends);
        }

        JetSpace {
            nvars,
            order,
            exponents,
            degree_end,
            products,
            product_end,
            derivs,
            deriv_end,
            lookup,
        }
    }

    /// Shared table for `(nvars, order)`; tables are built once per process.
    pub fn get(nvars: usize, order: usize) -> Result<Arc<JetSpace>> {
        if order > MAX_ORDER {
            return Err(Error::Capability {
                requested: order,
                max: MAX_ORDER,
            });
        }
        if nvars == 0 {
            return Err(Error::config("jet space needs at least one variable"));
        }
        static CACHE: OnceLock<RwLock<HashMap<(usize, usize), Arc<JetSpace>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(space) = cache.read().unwrap().get(&(nvars, order)) {
            return Ok(space.clone());
        }
        let space = Arc::new(JetSpace::build(nvars, order));
        let mut guard = cache.write().unwrap();
        Ok(guard.entry((nvars, order)).or_insert(space).clone())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of monomials (coefficient slots).
    pub fn len(&self) -> usize {
        self.degree_end[self.order]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub(crate) fn monomials_upto(&self, degree: usize) -> usize {
        self.degree_end[degree.min(self.order)]
    }

    pub(crate) fn index_of(&self, exponent: &[u8]) -> Option<usize> {
        self.lookup.get(exponent).map(|&i| i as usize)
    }

    pub fn exponent(&self, index: usize) -> &[u8] {
        &self.exponents[index * self.nvars..(index + 1) * self.nvars]
    }

    pub(crate) fn products_upto(&self, degree: usize) -> &[[u32; 3]] {
        &self.products[..self.product_end[degree.min(self.order)]]
    }

    /// Derivative entries whose source monomial has degree `<= degree`.
    pub(crate) fn derivs_upto(&self, var: usize, degree: usize) -> &[(u32, u32, f64)] {
        &self.derivs[var][..self.deriv_end[var][degree.min(self.order)]]
    }
}

fn enumerate_degree(
    nvars: usize,
    remaining: usize,
    pos: usize,
    current: &mut Vec<u8>,
    emit: &mut dyn FnMut(&[u8]),
) {
    if pos == nvars - 1 {
        current[pos] = remaining as u8;
        emit(current);
        current[pos] = 0;
        return;
    }
    for take in (0..=remaining).rev() {
        current[pos] = take as u8;
        enumerate_degree(nvars, remaining - take, pos + 1, current, emit);
    }
    current[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn monomial_and_product_counts() {
        for (nvars, order) in [(1, 5), (3, 4), (8, 2), (8, 6)] {
            let space = JetSpace::get(nvars, order).unwrap();
            assert_eq!(space.len(), binomial(nvars + order, order));
            // pairs (a, b) with |a| + |b| <= order are monomials in 2*nvars variables
            assert_eq!(space.products.len(), binomial(2 * nvars + order, order));
        }
    }

    #[test]
    fn graded_prefix() {
        let space = JetSpace::get(3, 3).unwrap();
        for i in 0..space.len() {
            let degree: usize = space.exponent(i).iter().map(|&e| e as usize).sum();
            assert!(i < space.monomials_upto(degree));
            if degree > 0 {
                assert!(i >= space.monomials_upto(degree - 1));
            }
        }
    }

    #[test]
    fn order_cap() {
        assert!(matches!(
            JetSpace::get(2, MAX_ORDER + 1),
            Err(Error::Capability { requested: 9, max: 8 })
        ));
    }
}
