use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::space::JetSpace;
use crate::error::{Error, Result};

/// Truncated multivariate Taylor series of a scalar about a point.
///
/// `coeffs[i]` is the Taylor coefficient of monomial `i` of the owning
/// [`JetSpace`], i.e. the mixed partial divided by the product of factorials
/// of its exponents. Only monomials of degree `<= order` carry valid data;
/// differentiating a jet lowers its order by one.
#[derive(Clone)]
pub struct Jet {
    space: Arc<JetSpace>,
    order: usize,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("nvars", &self.space.nvars())
            .field("order", &self.order)
            .field("value", &self.value())
            .finish()
    }
}

impl Jet {
    pub fn constant(space: &Arc<JetSpace>, value: f64) -> Jet {
        let mut coeffs = vec![0.0; space.len()];
        coeffs[0] = value;
        Jet {
            space: space.clone(),
            order: space.order(),
            coeffs,
        }
    }

    /// The coordinate function `z_var` expanded about `value`.
    pub fn variable(space: &Arc<JetSpace>, var: usize, value: f64) -> Jet {
        let mut jet = Jet::constant(space, value);
        if space.order() >= 1 {
            let mut e = vec![0u8; space.nvars()];
            e[var] = 1;
            let idx = space.index_of(&e).expect("degree-one monomial");
            jet.coeffs[idx] = 1.0;
        }
        jet
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    /// Highest total degree carrying valid Taylor data.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Constant jet in the same space.
    pub fn constant_like(&self, value: f64) -> Jet {
        Jet::constant(&self.space, value)
    }

    /// Mixed partial derivative for the exponent vector `multi`.
    pub fn partial(&self, multi: &[u8]) -> Result<f64> {
        let degree: usize = multi.iter().map(|&m| m as usize).sum();
        if multi.len() != self.space.nvars() {
            return Err(Error::config(format!(
                "multi-index has {} entries, jet has {} variables",
                multi.len(),
                self.space.nvars()
            )));
        }
        if degree > self.order {
            return Err(Error::Capability {
                requested: degree,
                max: self.order,
            });
        }
        let idx = self.space.index_of(multi).expect("monomial within order");
        let factorials: f64 = multi.iter().map(|&m| factorial(m as usize)).product();
        Ok(self.coeffs[idx] * factorials)
    }

    /// First partial along one variable, as a scalar.
    pub fn d1(&self, var: usize) -> f64 {
        let mut e = vec![0u8; self.space.nvars()];
        e[var] = 1;
        self.partial(&e).unwrap_or(0.0)
    }

    /// Second partial along two variables, as a scalar.
    pub fn d2(&self, a: usize, b: usize) -> f64 {
        let mut e = vec![0u8; self.space.nvars()];
        e[a] += 1;
        e[b] += 1;
        self.partial(&e).unwrap_or(0.0)
    }

    /// The jet of `d/dz_var` of this series (order drops by one).
    pub fn derivative(&self, var: usize) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let mut coeffs = vec![0.0; self.space.len()];
        for &(src, dst, factor) in self.space.derivs_upto(var, self.order) {
            coeffs[dst as usize] += factor * self.coeffs[src as usize];
        }
        Jet {
            space: self.space.clone(),
            order: self.order - 1,
            coeffs,
        }
    }

    /// Drops Taylor data above `order`.
    pub fn truncate(mut self, order: usize) -> Jet {
        if order < self.order {
            let keep = self.space.monomials_upto(order);
            for c in &mut self.coeffs[keep..] {
                *c = 0.0;
            }
            self.order = order;
        }
        self
    }

    /// `g(self)` given `taylor[k] = g^(k)(v) / k!` at `v = self.value()`.
    pub fn compose(&self, taylor: &[f64]) -> Jet {
        let n = self.order;
        let mut h = self.clone();
        h.coeffs[0] = 0.0;
        let mut acc = self.constant_like(taylor.get(n).copied().unwrap_or(0.0));
        acc.order = n;
        for k in (0..n).rev() {
            acc = mul_ref(&acc, &h);
            acc.coeffs[0] += taylor[k];
        }
        acc
    }

    fn map_coeffs(&self, f: impl Fn(f64) -> f64) -> Jet {
        Jet {
            space: self.space.clone(),
            order: self.order,
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
        }
    }

    pub fn recip(&self) -> Jet {
        let v = self.value();
        let inv = 1.0 / v;
        let mut t = Vec::with_capacity(self.order + 1);
        let mut term = inv;
        for _ in 0..=self.order {
            t.push(term);
            term *= -inv;
        }
        self.compose(&t)
    }

    pub fn powf(&self, p: f64) -> Jet {
        let v = self.value();
        let mut t = Vec::with_capacity(self.order + 1);
        let mut binom = 1.0;
        for k in 0..=self.order {
            t.push(binom * v.powf(p - k as f64));
            binom *= (p - k as f64) / (k as f64 + 1.0);
        }
        self.compose(&t)
    }

    pub fn sqrt(&self) -> Jet {
        self.powf(0.5)
    }

    pub fn powi(&self, n: i32) -> Jet {
        match n {
            0 => self.constant_like(1.0),
            n if n < 0 => self.powi(-n).recip(),
            _ => {
                let mut acc = self.clone();
                for _ in 1..n {
                    acc = mul_ref(&acc, self);
                }
                acc
            }
        }
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        let t: Vec<f64> = (0..=self.order).map(|k| e / factorial(k)).collect();
        self.compose(&t)
    }

    pub fn ln(&self) -> Jet {
        let v = self.value();
        let mut t = vec![v.ln()];
        for k in 1..=self.order {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            t.push(sign / (k as f64 * v.powi(k as i32)));
        }
        self.compose(&t)
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c];
        let t: Vec<f64> = (0..=self.order)
            .map(|k| cycle[k % 4] / factorial(k))
            .collect();
        self.compose(&t)
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        let t: Vec<f64> = (0..=self.order)
            .map(|k| cycle[k % 4] / factorial(k))
            .collect();
        self.compose(&t)
    }

    pub fn sinh(&self) -> Jet {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        let t: Vec<f64> = (0..=self.order)
            .map(|k| if k % 2 == 0 { s } else { c } / factorial(k))
            .collect();
        self.compose(&t)
    }

    pub fn cosh(&self) -> Jet {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        let t: Vec<f64> = (0..=self.order)
            .map(|k| if k % 2 == 0 { c } else { s } / factorial(k))
            .collect();
        self.compose(&t)
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn check_space(a: &Jet, b: &Jet) {
    debug_assert!(
        Arc::ptr_eq(&a.space, &b.space),
        "jets from different spaces"
    );
}

fn add_ref(a: &Jet, b: &Jet) -> Jet {
    check_space(a, b);
    let order = a.order.min(b.order);
    let n = a.space.monomials_upto(order);
    let mut coeffs = vec![0.0; a.space.len()];
    for i in 0..n {
        coeffs[i] = a.coeffs[i] + b.coeffs[i];
    }
    Jet {
        space: a.space.clone(),
        order,
        coeffs,
    }
}

fn sub_ref(a: &Jet, b: &Jet) -> Jet {
    check_space(a, b);
    let order = a.order.min(b.order);
    let n = a.space.monomials_upto(order);
    let mut coeffs = vec![0.0; a.space.len()];
    for i in 0..n {
        coeffs[i] = a.coeffs[i] - b.coeffs[i];
    }
    Jet {
        space: a.space.clone(),
        order,
        coeffs,
    }
}

fn mul_ref(a: &Jet, b: &Jet) -> Jet {
    check_space(a, b);
    let order = a.order.min(b.order);
    let mut coeffs = vec![0.0; a.space.len()];
    for &[i, j, k] in a.space.products_upto(order) {
        coeffs[k as usize] += a.coeffs[i as usize] * b.coeffs[j as usize];
    }
    Jet {
        space: a.space.clone(),
        order,
        coeffs,
    }
}

macro_rules! binary_ops {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                $imp(&self, &rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                $imp(&self, rhs)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                $imp(self, &rhs)
            }
        }
        impl<'a> $tr<&'a Jet> for &'a Jet {
            type Output = Jet;
            fn $method(self, rhs: &'a Jet) -> Jet {
                $imp(self, rhs)
            }
        }
    };
}

binary_ops!(Add, add, add_ref);
binary_ops!(Sub, sub, sub_ref);
binary_ops!(Mul, mul, mul_ref);

fn div_ref(a: &Jet, b: &Jet) -> Jet {
    mul_ref(a, &b.recip())
}

binary_ops!(Div, div, div_ref);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.map_coeffs(|c| -c)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.map_coeffs(|c| -c)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.coeffs[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.coeffs[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.map_coeffs(|c| c * rhs)
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.map_coeffs(|c| c * rhs)
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, rhs: f64) -> Jet {
        self.map_coeffs(|c| c / rhs)
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        rhs + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        -rhs + self
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs * self
    }
}
