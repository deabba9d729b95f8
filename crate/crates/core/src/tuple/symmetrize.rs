//! Two-sided witness to congruence.
//!
//! From `P A_i Rᵀ = R A_i Pᵀ = B_i` put `M := R⁻¹P`. The two equations give
//! `M A_i = A_i Mᵀ`, hence `g(M) A_i = A_i g(M)ᵀ` for every polynomial `g`.
//! With `F = f(M)`, `F² = M`:
//!
//! ```text
//! (RF) A_i (RF)ᵀ = R F A_i Fᵀ Rᵀ = R F² A_i Rᵀ = P A_i Rᵀ = B_i.
//! ```

use super::{check_congruence, check_symmetric_equivalence, CongruenceWitness, EquivWitness, MatTuple};
use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::numerics::lu::Lu;
use crate::report::ResidualReport;
use crate::roots::{poly_root, BranchRule, RootResult};
use crate::scalar::Tolerance;

/// Everything computed on the way from `(P, R)` to `S`.
#[derive(Debug, Clone)]
pub struct Symmetrization {
    pub witness: CongruenceWitness,
    /// `M = R⁻¹P`.
    pub m: Mat,
    pub root: RootResult,
    /// `max_i ‖M A_i − A_i Mᵀ‖_F` and the bound it was held to.
    pub relation_residual: f64,
    pub relation_threshold: f64,
    /// Congruence check of the returned `S`.
    pub report: ResidualReport,
}

/// Runs the construction and returns every intermediate, whether or not
/// the final congruence check passes.
pub fn symmetrize_witness_traced(
    a: &MatTuple,
    b: &MatTuple,
    w: &EquivWitness,
    tol: &Tolerance,
    rule: &BranchRule,
) -> Result<Symmetrization> {
    tol.validate()?;
    let pre = check_symmetric_equivalence(a, b, w, tol)?;
    if !pre.passed {
        return Err(Error::PreconditionFailed {
            residual: pre.max_residual,
            threshold: pre.threshold,
        });
    }
    let lu = Lu::new(&w.r, tol)?;
    let m = lu.solve(&w.p)?;

    // The error in P A Rᵀ − R A Pᵀ reaches M A − A Mᵀ through R⁻¹(·)R⁻ᵀ.
    let rinv = lu.inverse()?.norm_fro();
    let scale = rinv * rinv * w.p.norm_fro() * w.r.norm_fro() * a.max_norm();
    let threshold = 10.0 * tol.residual_tol * scale;
    let mt = m.transpose();
    let relation = a
        .mats()
        .iter()
        .map(|ai| (&(&m * ai) - &(ai * &mt)).norm_fro())
        .fold(0.0, f64::max);
    if !(relation <= threshold) {
        return Err(Error::SelfadjointViolation {
            residual: relation,
            threshold,
        });
    }

    let root = poly_root(&m, 2, tol, rule)?;
    let s = &w.r * &root.f_mat;
    let witness = CongruenceWitness { s };
    let report = check_congruence(a, b, &witness, tol)?;
    Ok(Symmetrization {
        witness,
        m,
        root,
        relation_residual: relation,
        relation_threshold: threshold,
        report,
    })
}

/// Synthesizes `S` with `S A_i Sᵀ = B_i` from a two-sided witness.
///
/// The witness is checked first; a failing one yields `PreconditionFailed`.
/// With [`BranchRule::RealPreferring`] a real `S` is produced or the real
/// obstruction surfaces as `BranchConflict`.
pub fn symmetrize_witness(
    a: &MatTuple,
    b: &MatTuple,
    w: &EquivWitness,
    tol: &Tolerance,
    rule: &BranchRule,
) -> Result<CongruenceWitness> {
    let out = symmetrize_witness_traced(a, b, w, tol, rule)?;
    if !out.report.passed {
        return Err(Error::ResidualTooLarge {
            residual: out.report.max_residual,
            threshold: out.report.threshold,
        });
    }
    Ok(out.witness)
}

/// The single-matrix case: `PARᵀ = RAPᵀ = B` gives `S` with `SASᵀ = B`.
pub fn statement3_check(
    a: &Mat,
    b: &Mat,
    w: &EquivWitness,
    tol: &Tolerance,
    rule: &BranchRule,
) -> Result<CongruenceWitness> {
    let at = MatTuple::single(a.clone())?;
    let bt = MatTuple::single(b.clone())?;
    symmetrize_witness(&at, &bt, w, tol, rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::Rng;
    use crate::mat::distance;
    use crate::scalar::Scalar;
    use alloc::vec;

    fn one(x: f64) -> Mat {
        Mat::real_diag(&[x])
    }

    #[test]
    fn congruence_witness_passes_through() {
        let tol = Tolerance::default();
        let mut rng = Rng::seeded(31);
        let a = MatTuple::untagged(3, vec![rng.complex_matrix(3, 3)]).unwrap();
        let s0 = rng.conditioned_matrix(3, 1e2, false, &tol, 64).unwrap();
        let b = a.congruence_image(&s0).unwrap();
        let w = EquivWitness { p: s0.clone(), r: s0.clone() };
        let out = symmetrize_witness_traced(&a, &b, &w, &tol, &BranchRule::Principal).unwrap();
        assert!(distance(&out.m, &Mat::identity(3)) < 1e-12);
        assert!(distance(&out.root.f_mat, &Mat::identity(3)) < 1e-12);
        assert!(distance(&out.witness.s, &s0) < 1e-12 * s0.norm_fro());
    }

    #[test]
    fn scalar_four() {
        let tol = Tolerance::default();
        let s = statement3_check(&one(1.0), &one(4.0), &EquivWitness { p: one(4.0), r: one(1.0) }, &tol, &BranchRule::Principal)
            .unwrap();
        assert!((s.s[(0, 0)] - 2.0).norm() < 1e-15);
    }

    #[test]
    fn scalar_multiple_witness() {
        let tol = Tolerance::default();
        let mut rng = Rng::seeded(8);
        let n = 4;
        let a = MatTuple::untagged(n, vec![rng.complex_matrix(n, n), rng.complex_matrix(n, n)]).unwrap();
        let s0 = rng.conditioned_matrix(n, 1e2, false, &tol, 64).unwrap();
        let b = a.congruence_image(&s0).unwrap();
        let w = EquivWitness { p: s0.scale_real(2.0), r: s0.scale_real(0.5) };
        let out = symmetrize_witness_traced(&a, &b, &w, &tol, &BranchRule::Principal).unwrap();
        assert!(distance(&out.m, &Mat::scalar(n, Scalar::new(4.0, 0.0))) < 1e-12);
        assert!(distance(&out.witness.s, &s0) < 1e-12 * s0.norm_fro());
        assert!(out.report.passed);
    }

    #[test]
    fn obstruction_instance_both_modes() {
        let tol = Tolerance::default();
        let w = EquivWitness { p: one(1.0), r: one(-1.0) };
        let s = statement3_check(&one(1.0), &one(-1.0), &w, &tol, &BranchRule::Principal).unwrap();
        assert!((s.s[(0, 0)] - Scalar::new(0.0, -1.0)).norm() < 1e-15);
        assert!((s.s[(0, 0)] * s.s[(0, 0)] + 1.0).norm() <= 1e-12);
        assert!(matches!(
            statement3_check(&one(1.0), &one(-1.0), &w, &tol, &BranchRule::RealPreferring),
            Err(Error::BranchConflict { .. })
        ));
    }

    #[test]
    fn garbage_witness_refused() {
        let tol = Tolerance::default();
        let w = EquivWitness { p: one(3.0), r: one(1.0) };
        assert!(matches!(
            statement3_check(&one(1.0), &one(4.0), &w, &tol, &BranchRule::Principal),
            Err(Error::PreconditionFailed { .. })
        ));
    }

    #[test]
    fn singular_r_refused() {
        let tol = Tolerance::default();
        let z = MatTuple::single(Mat::zeros(1, 1)).unwrap();
        let w = EquivWitness { p: one(1.0), r: one(0.0) };
        assert_eq!(
            symmetrize_witness(&z, &z, &w, &tol, &BranchRule::Principal).unwrap_err(),
            Error::SingularMatrix
        );
    }

    #[test]
    fn empty_sizes_are_vacuous() {
        let tol = Tolerance::default();
        let a = MatTuple::untagged(0, vec![]).unwrap();
        let w = EquivWitness { p: Mat::zeros(0, 0), r: Mat::zeros(0, 0) };
        let s = symmetrize_witness(&a, &a, &w, &tol, &BranchRule::Principal).unwrap();
        assert_eq!(s.s.rows(), 0);
    }
}
