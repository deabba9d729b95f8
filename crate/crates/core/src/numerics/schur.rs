//! Complex Schur form by Householder Hessenberg reduction followed by
//! single-shift QR iteration.
//!
//! Deflation: a subdiagonal entry `h[k][k-1]` is set to zero once
//! `|h[k][k-1]| ≤ ε (|h[k-1][k-1]| + |h[k][k]|)`, falling back to `ε ‖H‖_F`
//! when both diagonal neighbours vanish. Shifts are Wilkinson shifts taken
//! from the trailing 2×2 window, replaced by an exceptional shift every tenth
//! iteration without deflation. The total number of QR sweeps is capped at
//! [`SWEEPS_PER_DIM`]` · n`.

use alloc::vec::Vec;

// Unused when std ends up linked (dev builds).
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::{Scalar, ONE, ZERO};

/// Sweep budget per matrix dimension.
pub const SWEEPS_PER_DIM: usize = 60;

/// `M = Q T Q*` with `Q` unitary and `T` upper triangular.
#[derive(Debug, Clone)]
pub struct Schur {
    pub q: Mat,
    pub t: Mat,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<Scalar> {
        self.t.diagonal()
    }

    /// Swaps the adjacent diagonal entries `k` and `k + 1` of `T` with a
    /// unitary rotation, updating `Q` so that `Q T Q*` is unchanged.
    pub fn swap_adjacent(&mut self, k: usize) {
        let n = self.t.rows();
        debug_assert!(k + 1 < n);
        let t11 = self.t[(k, k)];
        let t22 = self.t[(k + 1, k + 1)];
        // Eigenvector of the 2×2 block for t22.
        let x1 = self.t[(k, k + 1)];
        let x2 = t22 - t11;
        let norm = (x1.norm_sqr() + x2.norm_sqr()).sqrt();
        if norm == 0.0 {
            return;
        }
        let (c1, c2) = (x1 / norm, x2 / norm);
        // G = [[c1, -conj(c2)], [c2, conj(c1)]], unitary with first column x.
        let g = [[c1, -c2.conj()], [c2, c1.conj()]];
        // T <- G* T on rows k, k+1.
        for j in 0..n {
            let a = self.t[(k, j)];
            let b = self.t[(k + 1, j)];
            self.t[(k, j)] = g[0][0].conj() * a + g[1][0].conj() * b;
            self.t[(k + 1, j)] = g[0][1].conj() * a + g[1][1].conj() * b;
        }
        // T <- T G and Q <- Q G on columns k, k+1.
        for m in [&mut self.t, &mut self.q] {
            for i in 0..n {
                let a = m[(i, k)];
                let b = m[(i, k + 1)];
                m[(i, k)] = a * g[0][0] + b * g[1][0];
                m[(i, k + 1)] = a * g[0][1] + b * g[1][1];
            }
        }
        self.t[(k, k)] = t22;
        self.t[(k + 1, k + 1)] = t11;
        self.t[(k + 1, k)] = ZERO;
    }
}

/// Reduces `m` to upper Hessenberg form, returning `(Q, H)` with
/// `m = Q H Q*`.
pub(crate) fn hessenberg(m: &Mat) -> (Mat, Mat) {
    let n = m.rows();
    let mut h = m.clone();
    let mut q = Mat::identity(n);
    let mut v = Vec::with_capacity(n);
    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        v.clear();
        v.extend((k + 1..n).map(|i| h[(i, k)]));
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if v[0].norm() > 0.0 { v[0] / v[0].norm() } else { ONE };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // H <- (I - β v v*) H
        for j in 0..n {
            let mut s = ZERO;
            for i in 0..len {
                s += v[i].conj() * h[(k + 1 + i, j)];
            }
            let s = s * beta;
            for i in 0..len {
                h[(k + 1 + i, j)] -= s * v[i];
            }
        }
        // H <- H (I - β v v*), Q <- Q (I - β v v*)
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let mut s = ZERO;
                for l in 0..len {
                    s += m[(i, k + 1 + l)] * v[l];
                }
                let s = s * beta;
                for l in 0..len {
                    m[(i, k + 1 + l)] -= s * v[l].conj();
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (q, h)
}

/// Givens rotation `[[c, s], [-conj(s), c]]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: Scalar, b: Scalar) -> (f64, Scalar) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = (an * an + bn * bn).sqrt();
    (an / r, (a / an) * b.conj() / r)
}

fn wilkinson_shift(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Scalar {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur decomposition of a square matrix.
pub fn schur(m: &Mat) -> Result<Schur> {
    if !m.is_square() {
        return Err(Error::shape("square matrix", m.dimension_string()));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = m.rows();
    let (mut z, mut h) = hessenberg(m);
    if n <= 1 {
        return Ok(Schur { q: z, t: h });
    }
    let eps = f64::EPSILON;
    let hnorm = h.norm_fro();
    let cap = SWEEPS_PER_DIM * n;
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;
    let mut rot: Vec<(f64, Scalar)> = Vec::with_capacity(n);
    while hi > 0 {
        // Locate the start of the active unreduced window.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if diag == 0.0 {
                diag = hnorm;
            }
            if sub <= eps * diag {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > cap {
            return Err(Error::ConvergenceFailure { iterations: total });
        }
        let mu = if since_deflation % 10 == 0 {
            let extra = if hi >= 2 { h[(hi - 1, hi - 2)].re.abs() } else { 0.0 };
            h[(hi, hi)] + Scalar::new(h[(hi, hi - 1)].re.abs() + extra, 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        // Explicit shifted QR step on the window lo..=hi, with the
        // rotations carried across the whole matrix so T stays a Schur form.
        for k in lo..=hi {
            h[(k, k)] -= mu;
        }
        rot.clear();
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            rot.push((c, s));
            for j in k..n {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = a * c + s * b;
                h[(k + 1, j)] = -s.conj() * a + b * c;
            }
            h[(k + 1, k)] = ZERO;
        }
        for (idx, &(c, s)) in rot.iter().enumerate() {
            let k = lo + idx;
            for i in 0..=(k + 1) {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = a * c + b * s.conj();
                h[(i, k + 1)] = -a * s + b * c;
            }
            for i in 0..n {
                let a = z[(i, k)];
                let b = z[(i, k + 1)];
                z[(i, k)] = a * c + b * s.conj();
                z[(i, k + 1)] = -a * s + b * c;
            }
        }
        for k in lo..=hi {
            h[(k, k)] += mu;
        }
    }
    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    if !h.is_finite() || !z.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(Schur { q: z, t: h })
}

/// Eigenvalues with multiplicity, in Schur-diagonal order.
///
/// Backward stable: each returned `λ` is an exact eigenvalue of `M + E` with
/// `‖E‖_F ≤ c · n · ε · ‖M‖_F`, where `c` is a small constant (≈ 10 for the
/// rotation counts used here).
pub fn eigenvalues(m: &Mat) -> Result<Vec<Scalar>> {
    Ok(schur(m)?.eigenvalues())
}
