//! Column-pivoted Householder QR for rank and nullspace decisions.
//!
//! The factorization works on raw row-major buffers so that the tall
//! operator matrices built by the selfadjoint-algebra solvers (which exceed
//! the [`Mat`] size cap) can share it.

use alloc::vec;
use alloc::vec::Vec;

// Unused when std ends up linked (dev builds).
#[allow(unused_imports)]
use num_traits::Float;

use crate::mat::Mat;
use crate::scalar::{Scalar, Tolerance, ZERO};

struct PivotedQr {
    cols: usize,
    /// Upper trapezoid holds `R`; below-diagonal entries are scratch.
    a: Vec<Scalar>,
    perm: Vec<usize>,
    rank: usize,
}

fn column_norm(a: &[Scalar], rows: usize, cols: usize, j: usize, from: usize) -> f64 {
    let mut s = 0.0;
    for i in from..rows {
        s += a[i * cols + j].norm_sqr();
    }
    s.sqrt()
}

/// Factors until the largest remaining column norm drops to `threshold`.
fn factor(rows: usize, cols: usize, mut a: Vec<Scalar>, threshold: f64) -> PivotedQr {
    debug_assert_eq!(a.len(), rows * cols);
    let mut perm: Vec<usize> = (0..cols).collect();
    let steps = rows.min(cols);
    let mut rank = steps;
    let mut v = vec![ZERO; rows];
    for k in 0..steps {
        let (p, best) = (k..cols)
            .map(|j| (j, column_norm(&a, rows, cols, j, k)))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= threshold {
            rank = k;
            break;
        }
        if p != k {
            for i in 0..rows {
                a.swap(i * cols + k, i * cols + p);
            }
            perm.swap(k, p);
        }
        let x0 = a[k * cols + k];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Scalar::new(1.0, 0.0)
        };
        let alpha = -phase * best;
        let len = rows - k;
        for i in 0..len {
            v[i] = a[(k + i) * cols + k];
        }
        v[0] -= alpha;
        let vnorm2: f64 = v[..len].iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 > 0.0 {
            let beta = 2.0 / vnorm2;
            for j in k..cols {
                let mut s = ZERO;
                for i in 0..len {
                    s += v[i].conj() * a[(k + i) * cols + j];
                }
                let s = s * beta;
                for i in 0..len {
                    a[(k + i) * cols + j] -= s * v[i];
                }
            }
        }
        a[k * cols + k] = alpha;
        for i in k + 1..rows {
            a[i * cols + k] = ZERO;
        }
    }
    PivotedQr { cols, a, perm, rank }
}

/// Rank of a raw row-major buffer at an absolute threshold.
pub(crate) fn rank_raw(rows: usize, cols: usize, data: Vec<Scalar>, threshold: f64) -> usize {
    factor(rows, cols, data, threshold).rank
}

/// Nullspace basis (orthonormal columns, returned as vectors of length
/// `cols`) of a raw row-major buffer at an absolute threshold.
pub(crate) fn nullspace_raw(
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
    threshold: f64,
) -> Vec<Vec<Scalar>> {
    let qr = factor(rows, cols, data, threshold);
    let r = qr.rank;
    let c = qr.cols;
    let mut basis = Vec::with_capacity(c - r);
    for free in r..c {
        // Solve R11 x1 = -R12 e_free in permuted coordinates.
        let mut z = vec![ZERO; c];
        z[free] = Scalar::new(1.0, 0.0);
        for i in (0..r).rev() {
            let mut s = -qr.a[i * c + free];
            for l in i + 1..r {
                s -= qr.a[i * c + l] * z[l];
            }
            z[i] = s / qr.a[i * c + i];
        }
        let mut x = vec![ZERO; c];
        for (i, &pi) in qr.perm.iter().enumerate() {
            x[pi] = z[i];
        }
        basis.push(x);
    }
    orthonormalize(&mut basis, 0.0);
    basis
}

/// Modified Gram–Schmidt with one reorthogonalization pass. Vectors whose
/// norm falls to `drop_below` or less after projection are removed.
pub(crate) fn orthonormalize(vectors: &mut Vec<Vec<Scalar>>, drop_below: f64) {
    let mut out: Vec<Vec<Scalar>> = Vec::with_capacity(vectors.len());
    for mut v in vectors.drain(..) {
        for _ in 0..2 {
            for q in &out {
                let d: Scalar = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= d * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > drop_below && norm > 0.0 {
            for vi in &mut v {
                *vi /= norm;
            }
            out.push(v);
        }
    }
    *vectors = out;
}

/// Numerical rank at threshold `rank_tol · ‖m‖_F`.
pub fn numerical_rank(m: &Mat, tol: &Tolerance) -> usize {
    rank_raw(
        m.rows(),
        m.cols(),
        m.entries().to_vec(),
        tol.rank_tol * m.norm_fro(),
    )
}

/// Orthonormal nullspace basis of `m` at threshold `rank_tol · ‖m‖_F`.
pub fn nullspace(m: &Mat, tol: &Tolerance) -> Vec<Vec<Scalar>> {
    nullspace_raw(
        m.rows(),
        m.cols(),
        m.entries().to_vec(),
        tol.rank_tol * m.norm_fro(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::Rng;

    #[test]
    fn rank_of_outer_product() {
        let mut rng = Rng::seeded(3);
        let u = rng.complex_matrix(5, 1);
        let v = rng.complex_matrix(1, 4);
        let m = &u * &v;
        assert_eq!(numerical_rank(&m, &Tolerance::default()), 1);
        assert_eq!(nullspace(&m, &Tolerance::default()).len(), 3);
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let mut rng = Rng::seeded(5);
        let a = rng.complex_matrix(3, 2);
        let b = rng.complex_matrix(2, 6);
        let m = &a * &b;
        let tol = Tolerance::default();
        let null = nullspace(&m, &tol);
        assert_eq!(null.len(), 4);
        for x in &null {
            let xm = Mat::new(6, 1, x.clone()).unwrap();
            assert!((&m * &xm).norm_fro() < 1e-12 * m.norm_fro());
        }
    }

    #[test]
    fn full_rank_and_zero() {
        let tol = Tolerance::default();
        assert_eq!(numerical_rank(&Mat::identity(4), &tol), 4);
        assert_eq!(numerical_rank(&Mat::zeros(3, 3), &tol), 0);
        assert_eq!(nullspace(&Mat::zeros(2, 3), &tol).len(), 3);
    }
}
