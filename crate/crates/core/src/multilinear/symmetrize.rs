//! Merging the slot bijections of a symmetric-equivalence witness.
//!
//! With `φ₁ = … = φ_r ≠ φ_{r+1}`, `τ := φ_r φ_{r+1}⁻¹` is selfadjoint for
//! every coordinate form of `𝓖`, and so is any polynomial `ρ` in `τ`. For
//! `ρ^{r+1} = τ⁻¹` the `r + 1` copies of `ρ` slide onto one argument, where
//! `τ⁻¹φ_r = φ_{r+1}` restores the old witness; hence `φ₁ = … = φ_{r+1} := ρφ_r`
//! is again a witness. After `k − 1` rounds a single `φ` remains.

use alloc::vec::Vec;

use super::verify::{check_map_congruence, check_map_equivalence, check_map_symmetric_equivalence};
use super::{bilinear_to_tuple, selfadjoint_residual_klinear, KMap, MapCongruenceWitness, MapEquivWitness, MapSymmetry};
use crate::error::{Error, Result};
use crate::mat::{distance, Mat};
use crate::numerics::lu::{inverse, Lu};
use crate::report::ResidualReport;
use crate::roots::{poly_inverse_root, BranchRule};
use crate::scalar::Tolerance;
use crate::tuple::{apply_weak_mix, symmetrize_witness, EquivWitness};

/// One round of the merging loop (slots are 1-based as in `φ_r`).
#[derive(Debug, Clone)]
pub struct MergeStep {
    pub r: usize,
    /// `false` when `φ_r` and `φ_{r+1}` already agreed.
    pub merged: bool,
    /// Selfadjoint residuals of `τ` and `ρ` with respect to `𝓖`, and the
    /// bound both are held to.
    pub tau_residual: f64,
    pub rho_residual: f64,
    pub selfadjoint_threshold: f64,
    /// Symmetric-equivalence check of the updated witness.
    pub invariant: ResidualReport,
}

#[derive(Debug, Clone)]
pub struct MapSymmetrization {
    pub witness: MapCongruenceWitness,
    pub steps: Vec<MergeStep>,
    /// Congruence check of the returned witness.
    pub report: ResidualReport,
}

/// Bound for the selfadjoint residual of `τ`: the symmetric-equivalence
/// defect reaches `τ` through the inverses of all slot bijections.
fn selfadjoint_threshold(g: &KMap, f: &KMap, w: &MapEquivWitness, tau: &Mat, tol: &Tolerance) -> Result<f64> {
    let mut amp = 1.0;
    for phi in &w.phis {
        amp *= inverse(phi, tol)?.norm_fro();
    }
    let lhs = w.phis.iter().fold(g.norm_fro(), |acc, p| acc * p.norm_fro());
    let eq_scale = lhs.max(w.psi.norm_fro() * f.norm_fro());
    let denom = g.norm_fro() * tau.norm_fro();
    let ratio = if denom > 0.0 { eq_scale * amp / denom } else { 1.0 };
    Ok(10.0 * tol.residual_tol * ratio.max(1.0))
}

/// Runs the merging loop and records every round.
pub fn symmetrize_map_witness_traced(
    f: &KMap,
    g: &KMap,
    w: &MapEquivWitness,
    tol: &Tolerance,
    rule: &BranchRule,
) -> Result<MapSymmetrization> {
    tol.validate()?;
    let pre = check_map_symmetric_equivalence(f, g, w, tol)?;
    if !pre.passed {
        return Err(Error::PreconditionFailed {
            residual: pre.max_residual,
            threshold: pre.threshold,
        });
    }
    let k = f.k();
    let mut cur = w.clone();
    let mut steps = Vec::with_capacity(k - 1);
    for r in 0..k - 1 {
        let (a, b) = (&cur.phis[r], &cur.phis[r + 1]);
        if distance(a, b) <= tol.residual_tol * a.norm_fro() {
            cur.phis[r + 1] = cur.phis[r].clone();
            let invariant = check_map_symmetric_equivalence(f, g, &cur, tol)?;
            steps.push(MergeStep {
                r: r + 1,
                merged: false,
                tau_residual: 0.0,
                rho_residual: 0.0,
                selfadjoint_threshold: 0.0,
                invariant,
            });
            continue;
        }
        let tau = a * &inverse(b, tol)?;
        let threshold = selfadjoint_threshold(g, f, &cur, &tau, tol)?;
        let tau_residual = selfadjoint_residual_klinear(g, &tau)?;
        if !(tau_residual <= threshold) {
            return Err(Error::SelfadjointViolation {
                residual: tau_residual,
                threshold,
            });
        }
        let rho = poly_inverse_root(&tau, (r + 2) as u32, tol, rule)?.f_mat;
        let rho_residual = selfadjoint_residual_klinear(g, &rho)?;
        if !(rho_residual <= threshold) {
            return Err(Error::SelfadjointViolation {
                residual: rho_residual,
                threshold,
            });
        }
        let merged = &rho * &cur.phis[r];
        for phi in &mut cur.phis[..=r + 1] {
            *phi = merged.clone();
        }
        let invariant = check_map_symmetric_equivalence(f, g, &cur, tol)?;
        steps.push(MergeStep {
            r: r + 1,
            merged: true,
            tau_residual,
            rho_residual,
            selfadjoint_threshold: threshold,
            invariant,
        });
    }
    let witness = MapCongruenceWitness {
        phi: cur.phis[0].clone(),
        psi: cur.psi,
    };
    let report = check_map_congruence(f, g, &witness, tol)?;
    Ok(MapSymmetrization { witness, steps, report })
}

/// Synthesizes `(φ, ψ)` with `𝓖(φu₁, …, φu_k) = ψ𝓕(u)` from a
/// symmetric-equivalence witness. `ψ` is returned unchanged.
pub fn symmetrize_map_witness(
    f: &KMap,
    g: &KMap,
    w: &MapEquivWitness,
    tol: &Tolerance,
    rule: &BranchRule,
) -> Result<MapCongruenceWitness> {
    let out = symmetrize_map_witness_traced(f, g, w, tol, rule)?;
    if !out.report.passed {
        return Err(Error::ResidualTooLarge {
            residual: out.report.max_residual,
            threshold: out.report.threshold,
        });
    }
    Ok(out.witness)
}

/// For two symmetric (or two skew) maps, a plain equivalence witness is
/// automatically a symmetric-equivalence witness. Checks both and returns
/// the witness.
pub fn equivalence_to_symmetric(
    f: &KMap,
    g: &KMap,
    w: &MapEquivWitness,
    tol: &Tolerance,
) -> Result<MapEquivWitness> {
    match (f.tag(), g.tag()) {
        (MapSymmetry::Symmetric, MapSymmetry::Symmetric) | (MapSymmetry::Skew, MapSymmetry::Skew) => {}
        (a, b) => {
            return Err(Error::SymmetryTagMismatch {
                detail: alloc::format!(
                    "both maps must be symmetric or both skew, got {} and {}",
                    a.name(),
                    b.name()
                ),
            })
        }
    }
    let plain = check_map_equivalence(f, g, w, tol)?;
    if !plain.passed {
        return Err(Error::PreconditionFailed {
            residual: plain.max_residual,
            threshold: plain.threshold,
        });
    }
    let sym = check_map_symmetric_equivalence(f, g, w, tol)?;
    if !sym.passed {
        return Err(Error::PreconditionFailed {
            residual: sym.max_residual,
            threshold: sym.threshold,
        });
    }
    Ok(w.clone())
}

/// The bilinear case through matrix tuples: with `A` from `𝓕`, `B` from `𝓖`
/// and `Ψ̃ = ψ`-mix of `A`, the witness gives `Φ₁ᵀ B_ℓ Φ₂ = Φ₂ᵀ B_ℓ Φ₁ = Ψ̃_ℓ`,
/// so `(Φ₁ᵀ, Φ₂ᵀ)` is a two-sided witness from `B` to `Ψ̃`. Its
/// symmetrization `S` gives `φ = Sᵀ`.
pub fn symmetrize_bilinear_via_tuple(
    f: &KMap,
    g: &KMap,
    w: &MapEquivWitness,
    tol: &Tolerance,
    rule: &BranchRule,
) -> Result<MapCongruenceWitness> {
    if f.k() != 2 {
        return Err(Error::shape("bilinear maps", f.shape_string()));
    }
    let pre = check_map_symmetric_equivalence(f, g, w, tol)?;
    if !pre.passed {
        return Err(Error::PreconditionFailed {
            residual: pre.max_residual,
            threshold: pre.threshold,
        });
    }
    let (p1, p2) = (&w.phis[0], &w.phis[1]);
    let witness = if distance(p1, p2) <= tol.residual_tol * p1.norm_fro() {
        MapCongruenceWitness { phi: p1.clone(), psi: w.psi.clone() }
    } else {
        let a = bilinear_to_tuple(f)?;
        let b = bilinear_to_tuple(g)?;
        let mixed = apply_weak_mix(&a, &w.psi, tol)?;
        Lu::new(p1, tol)?;
        Lu::new(p2, tol)?;
        let ew = EquivWitness { p: p1.transpose(), r: p2.transpose() };
        let s = symmetrize_witness(&b, &mixed, &ew, tol, rule)?;
        MapCongruenceWitness { phi: s.s.transpose(), psi: w.psi.clone() }
    };
    let rep = check_map_congruence(f, g, &witness, tol)?;
    if !rep.passed {
        return Err(Error::ResidualTooLarge {
            residual: rep.max_residual,
            threshold: rep.threshold,
        });
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use alloc::vec;

    fn one(x: f64) -> Mat {
        Mat::real_diag(&[x])
    }

    fn xy() -> KMap {
        KMap::new(1, 2, 1, vec![Scalar::new(1.0, 0.0)], MapSymmetry::Symmetric, &Tolerance::default()).unwrap()
    }

    #[test]
    fn equal_phis_pass_through() {
        let tol = Tolerance::default();
        let f = KMap::from_fn(2, 3, 1, |i, _| Scalar::new((i[0] * 4 + i[1] * 2 + i[2]) as f64 - 3.0, 0.5))
            .unwrap();
        let w = MapEquivWitness { phis: vec![Mat::identity(2); 3], psi: Mat::identity(1) };
        let out = symmetrize_map_witness_traced(&f, &f, &w, &tol, &BranchRule::Principal).unwrap();
        assert_eq!(out.witness.phi, Mat::identity(2));
        assert!(out.steps.iter().all(|s| !s.merged));
    }

    #[test]
    fn scalar_bilinear_example_both_routes() {
        let tol = Tolerance::default();
        let f = xy();
        let w = MapEquivWitness { phis: vec![one(2.0), one(0.5)], psi: one(1.0) };
        let direct = symmetrize_map_witness(&f, &f, &w, &tol, &BranchRule::Principal).unwrap();
        assert!((direct.phi[(0, 0)] - 1.0).norm() < 1e-15);
        let via = symmetrize_bilinear_via_tuple(&f, &f, &w, &tol, &BranchRule::Principal).unwrap();
        assert!((via.phi[(0, 0)] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn invalid_witness_rejected() {
        let tol = Tolerance::default();
        let f = xy();
        let w = MapEquivWitness { phis: vec![one(2.0), one(2.0)], psi: one(1.0) };
        assert!(matches!(
            symmetrize_map_witness(&f, &f, &w, &tol, &BranchRule::Principal),
            Err(Error::PreconditionFailed { .. })
        ));
    }

    #[test]
    fn automaticity_tag_checks() {
        let tol = Tolerance::default();
        let f = xy();
        let w = MapEquivWitness { phis: vec![one(2.0), one(0.5)], psi: one(1.0) };
        assert!(equivalence_to_symmetric(&f, &f, &w, &tol).is_ok());
        let plain = KMap::new(1, 2, 1, vec![Scalar::new(1.0, 0.0)], MapSymmetry::None, &tol).unwrap();
        assert!(matches!(
            equivalence_to_symmetric(&plain, &f, &w, &tol),
            Err(Error::SymmetryTagMismatch { .. })
        ));
    }

    #[test]
    fn skew_form_with_distinct_phis() {
        // Alternating form xᵀJy; φ₂ = J⁻¹φ₁⁻ᵀJ keeps φ₁ᵀJφ₂ = J.
        let tol = Tolerance::default();
        let j = Mat::from_real_rows(&[[0.0, 1.0], [-1.0, 0.0]]);
        let f = KMap::new(2, 2, 1, j.entries().to_vec(), MapSymmetry::Skew, &tol).unwrap();
        let p1 = Mat::from_real_rows(&[[2.0, 1.0], [0.5, 1.5]]);
        let jinv = inverse(&j, &tol).unwrap();
        let p2 = &(&jinv * &inverse(&p1, &tol).unwrap().transpose()) * &j;
        let w = MapEquivWitness { phis: vec![p1, p2], psi: one(1.0) };
        let out = equivalence_to_symmetric(&f, &f, &w, &tol).unwrap();
        let c = symmetrize_map_witness(&f, &f, &out, &tol, &BranchRule::Principal).unwrap();
        assert!(check_map_congruence(&f, &f, &c, &tol).unwrap().passed);
    }
}
