use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::{Tolerance, ZERO};

/// LU factorization with partial pivoting, `P M = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    factors: Mat,
    perm: Vec<usize>,
}

impl Lu {
    /// Factors `m`, rejecting pivots below `rank_tol · ‖m‖_F`.
    pub fn new(m: &Mat, tol: &Tolerance) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::shape("square matrix", m.dimension_string()));
        }
        let n = m.rows();
        let threshold = tol.rank_tol * m.norm_fro();
        let mut a = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if !(best > threshold) {
                return Err(Error::SingularMatrix);
            }
            a.swap_rows(k, p);
            perm.swap(k, p);
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let factor = a[(i, k)] / pivot;
                a[(i, k)] = factor;
                if factor == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let u = a[(k, j)];
                    a[(i, j)] -= factor * u;
                }
            }
        }
        Ok(Lu { factors: a, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Solves `M X = B`.
    pub fn solve(&self, b: &Mat) -> Result<Mat> {
        let n = self.dim();
        if b.rows() != n {
            return Err(Error::shape(alloc::format!("{n} rows"), b.dimension_string()));
        }
        let a = &self.factors;
        let mut x = Mat::zeros(n, b.cols());
        for (i, &p) in self.perm.iter().enumerate() {
            for j in 0..b.cols() {
                x[(i, j)] = b[(p, j)];
            }
        }
        for j in 0..b.cols() {
            for i in 0..n {
                let mut s = x[(i, j)];
                for l in 0..i {
                    s -= a[(i, l)] * x[(l, j)];
                }
                x[(i, j)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, j)];
                for l in i + 1..n {
                    s -= a[(i, l)] * x[(l, j)];
                }
                x[(i, j)] = s / a[(i, i)];
            }
        }
        if !x.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Mat> {
        self.solve(&Mat::identity(self.dim()))
    }
}

/// Solves `M X = B` for square nonsingular `M`.
pub fn solve(m: &Mat, b: &Mat, tol: &Tolerance) -> Result<Mat> {
    Lu::new(m, tol)?.solve(b)
}

/// `M⁻¹`, i.e. `solve(M, I)`.
pub fn inverse(m: &Mat, tol: &Tolerance) -> Result<Mat> {
    Lu::new(m, tol)?.inverse()
}

/// Frobenius condition number `‖M‖_F ‖M⁻¹‖_F`.
pub fn condition_estimate(m: &Mat, tol: &Tolerance) -> Result<f64> {
    Ok(m.norm_fro() * inverse(m, tol)?.norm_fro())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::Rng;
    use crate::mat::distance;

    #[test]
    fn identity_system_returns_rhs() {
        let tol = Tolerance::default();
        let b = Mat::from_real_rows(&[[1.0, -2.0], [3.5, 0.25], [7.0, 8.0]]);
        let x = solve(&Mat::identity(3), &b, &tol).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn diagonal_inverse() {
        let tol = Tolerance::default();
        let x = inverse(&Mat::real_diag(&[2.0, 4.0]), &tol).unwrap();
        assert_eq!(x, Mat::real_diag(&[0.5, 0.25]));
    }

    #[test]
    fn random_system_residual() {
        let tol = Tolerance::default();
        let mut rng = Rng::seeded(11);
        let m = rng.complex_matrix(6, 6);
        let b = rng.complex_matrix(6, 3);
        let x = solve(&m, &b, &tol).unwrap();
        let res = distance(&(&m * &x), &b);
        assert!(res <= tol.residual_tol * m.norm_fro() * x.norm_fro(), "residual {res}");
    }

    #[test]
    fn singular_is_rejected() {
        let tol = Tolerance::default();
        let m = Mat::from_real_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert_eq!(inverse(&m, &tol).unwrap_err(), Error::SingularMatrix);
        assert_eq!(inverse(&Mat::zeros(2, 2), &tol).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn empty_matrix_is_invertible() {
        let inv = inverse(&Mat::zeros(0, 0), &Tolerance::default()).unwrap();
        assert_eq!(inv.rows(), 0);
    }
}
