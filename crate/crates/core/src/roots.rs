//! Polynomial matrix roots: `f` with `f(M)^m = M` or `f(M)^m = M⁻¹`.
//!
//! The polynomial is the confluent Hermite interpolant of one branch of
//! `z ↦ z^{±1/m}` at every eigenvalue cluster, carrying derivatives up to the
//! cluster's chain bound. Because `F = f(M)` is a polynomial in `M` it
//! commutes with everything that commutes with `M`.

use alloc::vec::Vec;
use core::f64::consts::PI;

// Unused when std ends up linked (dev builds).
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::mat::{distance, relative, Mat};
use crate::numerics::poly::{eval_poly, hermite_newton, HermiteNode, Polynomial};
use crate::numerics::spectral::primary_decomposition;
use crate::scalar::{Scalar, Tolerance};

/// Eigenvalues closer to zero than this fraction of `‖M‖_F` are rejected.
pub const ZERO_EIGENVALUE_GUARD: f64 = 1e-6;

/// Relative agreement required between the Newton-form and monomial-form
/// evaluations of the root polynomial.
pub const FORM_AGREEMENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum BranchRule {
    /// `arg μ ∈ (−π/m, π/m]`.
    #[default]
    Principal,
    /// Real roots for real eigenvalues, principal (hence conjugate) roots for
    /// conjugate pairs, so that `f` is real for real `M`.
    RealPreferring,
    /// One integer `k_j` per eigenvalue cluster (in cluster order): the root
    /// taken is the principal one times `e^{2πi k_j/m}`.
    Explicit(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootResult {
    pub f: Polynomial,
    /// `F = f(M)`.
    pub f_mat: Mat,
    /// Cluster representatives of `M`, in cluster order.
    pub eigenvalues: Vec<Scalar>,
    /// The value `f(λ_j)` chosen for each cluster.
    pub branch_assignment: Vec<Scalar>,
    pub chain_bound: Vec<usize>,
    /// `‖F^m − M‖_F / ‖M‖_F` for roots, `‖F^m M − I‖_F` for inverse roots.
    pub residual: f64,
    /// Smallest gap between clusters relative to `‖M‖_F`; infinite with a
    /// single cluster.
    pub margin: f64,
}

fn principal_root(z: Scalar, m: u32) -> Scalar {
    let mut arg = z.arg();
    if arg <= -PI {
        arg = PI;
    }
    Scalar::from_polar(z.norm().powf(1.0 / m as f64), arg / m as f64)
}

fn branch_values(eigs: &[Scalar], m: u32, rule: &BranchRule, tol: &Tolerance, scale: f64) -> Result<Vec<Scalar>> {
    match rule {
        BranchRule::Principal => Ok(eigs.iter().map(|&z| principal_root(z, m)).collect()),
        BranchRule::Explicit(ks) => {
            if ks.len() != eigs.len() {
                return Err(Error::invalid(alloc::format!(
                    "explicit branch list has {} entries for {} eigenvalue clusters",
                    ks.len(),
                    eigs.len()
                )));
            }
            if let Some(k) = ks.iter().find(|&&k| k >= m) {
                return Err(Error::invalid(alloc::format!("branch index {k} is not below m = {m}")));
            }
            Ok(eigs
                .iter()
                .zip(ks)
                .map(|(&z, &k)| principal_root(z, m) * Scalar::from_polar(1.0, 2.0 * PI * k as f64 / m as f64))
                .collect())
        }
        BranchRule::RealPreferring => {
            let mut conflicts = Vec::new();
            let mut out = Vec::with_capacity(eigs.len());
            for &z in eigs {
                if z.im.abs() <= tol.cluster_tol * scale {
                    if z.re > 0.0 {
                        out.push(Scalar::new(z.re.powf(1.0 / m as f64), 0.0));
                    } else if m % 2 == 1 {
                        out.push(Scalar::new(-(-z.re).powf(1.0 / m as f64), 0.0));
                    } else {
                        conflicts.push(z);
                        out.push(Scalar::new(0.0, 0.0));
                    }
                } else {
                    out.push(principal_root(z, m));
                }
            }
            if conflicts.is_empty() {
                Ok(out)
            } else {
                Err(Error::BranchConflict { eigenvalues: conflicts })
            }
        }
    }
}

/// Value and derivatives `0..count` of `z ↦ z^p` on the branch through
/// `w = λ^p`: the `d`-th derivative is `p(p−1)…(p−d+1)·w/λ^d`.
fn branch_derivatives(lambda: Scalar, w: Scalar, p: f64, count: usize) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(count);
    let mut coeff = Scalar::new(1.0, 0.0);
    for d in 0..count {
        out.push(w * coeff);
        coeff = coeff * (p - d as f64) / lambda;
    }
    out
}

fn matrix_root(m: &Mat, m_exp: u32, tol: &Tolerance, rule: &BranchRule, inverse: bool) -> Result<RootResult> {
    tol.validate()?;
    if !m.is_square() {
        return Err(Error::shape("square matrix", m.dimension_string()));
    }
    if m_exp < 2 {
        return Err(Error::invalid(alloc::format!("root order must be at least 2, got {m_exp}")));
    }
    let n = m.rows();
    let real = matches!(rule, BranchRule::RealPreferring);
    let scale = m.norm_fro();
    if real && !m.is_real_within(0.0) {
        return Err(Error::NotReal);
    }
    if n == 0 {
        return Ok(RootResult {
            f: Polynomial::constant(Scalar::new(1.0, 0.0)),
            f_mat: Mat::zeros(0, 0),
            eigenvalues: Vec::new(),
            branch_assignment: Vec::new(),
            chain_bound: Vec::new(),
            residual: 0.0,
            margin: f64::INFINITY,
        });
    }
    let sd = primary_decomposition(m, tol)?;
    let min_abs = sd
        .distinct_eigenvalues
        .iter()
        .map(|z| z.norm())
        .fold(f64::INFINITY, f64::min);
    if !(min_abs >= ZERO_EIGENVALUE_GUARD * scale) || scale == 0.0 {
        return Err(Error::SingularMatrix);
    }
    let roots = branch_values(&sd.distinct_eigenvalues, m_exp, rule, tol, scale)?;
    let p = if inverse { -1.0 } else { 1.0 } / m_exp as f64;
    let values: Vec<Scalar> = roots.iter().map(|&w| if inverse { w.inv() } else { w }).collect();
    let nodes: Vec<HermiteNode> = sd
        .distinct_eigenvalues
        .iter()
        .zip(&values)
        .zip(&sd.chain_bound)
        .map(|((&lambda, &w), &c)| HermiteNode::new(lambda, branch_derivatives(lambda, w, p, c)))
        .collect();
    let newton = hermite_newton(&nodes)?;
    let mut f_mat = newton.eval_mat(m);
    let mut f = newton.to_monomial();
    if real {
        f = f.real_part();
        f_mat = f_mat.real_part();
    }
    if !f_mat.is_finite() {
        return Err(Error::NonFinite);
    }
    let mono = eval_poly(&f, m)?;
    let agreement = relative(distance(&mono, &f_mat), f_mat.norm_fro());
    if !(agreement <= FORM_AGREEMENT_TOL) {
        return Err(Error::ResidualTooLarge {
            residual: agreement,
            threshold: FORM_AGREEMENT_TOL,
        });
    }
    let power = f_mat.pow(m_exp);
    let residual = if inverse {
        distance(&(&power * m), &Mat::identity(n))
    } else {
        relative(distance(&power, m), scale)
    };
    if !(residual <= tol.residual_tol) {
        return Err(Error::ResidualTooLarge {
            residual,
            threshold: tol.residual_tol,
        });
    }
    Ok(RootResult {
        f,
        f_mat,
        eigenvalues: sd.distinct_eigenvalues,
        branch_assignment: values,
        chain_bound: sd.chain_bound,
        residual,
        margin: sd.margin,
    })
}

/// Polynomial `m`-th root: `F = f(M)` with `F^m = M`.
pub fn poly_root(m: &Mat, m_exp: u32, tol: &Tolerance, rule: &BranchRule) -> Result<RootResult> {
    matrix_root(m, m_exp, tol, rule, false)
}

/// Polynomial inverse `m`-th root: `F = f(M)` with `F^m M = I`.
pub fn poly_inverse_root(m: &Mat, m_exp: u32, tol: &Tolerance, rule: &BranchRule) -> Result<RootResult> {
    matrix_root(m, m_exp, tol, rule, true)
}
