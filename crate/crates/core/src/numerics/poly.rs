//! Polynomials, confluent Hermite interpolation and matrix evaluation.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::{Scalar, ZERO};

/// Polynomial with ascending-degree coefficients. Trailing zero
/// coefficients are trimmed, so the leading coefficient is nonzero unless
/// the polynomial is zero (empty coefficient list).
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&x| Scalar::new(x, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, z: Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Drops imaginary parts of the coefficients.
    pub fn real_part(&self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| Scalar::new(c.re, 0.0)).collect())
    }
}

/// Horner evaluation of `f` at a square matrix.
pub fn eval_poly(f: &Polynomial, m: &Mat) -> Result<Mat> {
    if !m.is_square() {
        return Err(Error::shape("square matrix", m.dimension_string()));
    }
    let n = m.rows();
    let mut acc = Mat::zeros(n, n);
    for &c in f.coeffs().iter().rev() {
        acc = &acc * m;
        for i in 0..n {
            acc[(i, i)] += c;
        }
    }
    Ok(acc)
}

/// Interpolation datum: abscissa plus the prescribed value and derivatives
/// `(f(x), f'(x), …, f^{(d-1)}(x))`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteNode {
    pub x: Scalar,
    pub derivs: Vec<Scalar>,
}

impl HermiteNode {
    pub fn new(x: Scalar, derivs: Vec<Scalar>) -> Self {
        HermiteNode { x, derivs }
    }
}

/// Newton form `Σ c_k Π_{i<k} (x − x_i)` over a node sequence with
/// repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonPoly {
    nodes: Vec<Scalar>,
    coeffs: Vec<Scalar>,
}

impl NewtonPoly {
    pub fn nodes(&self) -> &[Scalar] {
        &self.nodes
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn eval(&self, z: Scalar) -> Scalar {
        let n = self.coeffs.len();
        if n == 0 {
            return ZERO;
        }
        let mut p = self.coeffs[n - 1];
        for k in (0..n - 1).rev() {
            p = p * (z - self.nodes[k]) + self.coeffs[k];
        }
        p
    }

    /// Nested evaluation at a square matrix.
    pub fn eval_mat(&self, m: &Mat) -> Mat {
        let dim = m.rows();
        let n = self.coeffs.len();
        if n == 0 {
            return Mat::zeros(dim, dim);
        }
        let mut p = Mat::scalar(dim, self.coeffs[n - 1]);
        for k in (0..n - 1).rev() {
            let mut shifted = m.clone();
            for i in 0..dim {
                shifted[(i, i)] -= self.nodes[k];
            }
            p = &p * &shifted;
            for i in 0..dim {
                p[(i, i)] += self.coeffs[k];
            }
        }
        p
    }

    /// Expands to monomial coefficients.
    pub fn to_monomial(&self) -> Polynomial {
        let n = self.coeffs.len();
        if n == 0 {
            return Polynomial::zero();
        }
        let mut acc = vec![self.coeffs[n - 1]];
        for k in (0..n - 1).rev() {
            // acc <- acc · (x − x_k) + c_k
            let mut next = vec![ZERO; acc.len() + 1];
            for (i, &a) in acc.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * self.nodes[k];
            }
            next[0] += self.coeffs[k];
            acc = next;
        }
        Polynomial::new(acc)
    }
}

/// Confluent divided differences for the Hermite data in `nodes`.
pub fn hermite_newton(nodes: &[HermiteNode]) -> Result<NewtonPoly> {
    for (i, a) in nodes.iter().enumerate() {
        if a.derivs.is_empty() {
            return Err(Error::invalid(alloc::format!("node {i} carries no data")));
        }
        if nodes[..i].iter().any(|b| b.x == a.x) {
            return Err(Error::DuplicateNode { index: i });
        }
    }
    let mut z = Vec::new();
    let mut group = Vec::new();
    let mut dd = Vec::new();
    for (g, node) in nodes.iter().enumerate() {
        for _ in 0..node.derivs.len() {
            z.push(node.x);
            group.push(g);
            dd.push(node.derivs[0]);
        }
    }
    let total = z.len();
    let mut factorial = 1.0;
    for k in 1..total {
        factorial *= k as f64;
        for i in (k..total).rev() {
            dd[i] = if group[i] == group[i - k] {
                nodes[group[i]].derivs[k] / factorial
            } else {
                (dd[i] - dd[i - 1]) / (z[i] - z[i - k])
            };
        }
    }
    Ok(NewtonPoly {
        nodes: z,
        coeffs: dd,
    })
}

/// The unique polynomial of degree `< Σ d_j` matching every prescribed
/// value and derivative.
pub fn hermite_interpolant(nodes: &[HermiteNode]) -> Result<Polynomial> {
    Ok(hermite_newton(nodes)?.to_monomial())
}

impl Default for Polynomial {
    fn default() -> Self {
        Polynomial::zero()
    }
}

impl From<Scalar> for Polynomial {
    fn from(c: Scalar) -> Self {
        Polynomial::constant(c)
    }
}
