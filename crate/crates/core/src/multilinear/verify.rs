use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use itertools::Itertools;
// Unused when std ends up linked (dev builds).
#[allow(unused_imports)]
use num_traits::Float;

use super::{apply_output, contract_each, KMap, MapCongruenceWitness, MapEquivWitness};
use crate::error::{Error, Result};
use crate::mat::relative;
use crate::report::ResidualReport;
use crate::scalar::Tolerance;

/// A full-`S_k` residual above this multiple of the adjacent-transposition
/// residual is flagged in the report.
pub const PERMUTATION_FLAG_RATIO: f64 = 10.0;

const SCALE_DOC: &str = "max(‖G‖_F·Π_j‖φ_j‖_F, ‖ψ‖_F·‖F‖_F)";

fn check_witness_shapes(f: &KMap, g: &KMap, w: &MapEquivWitness) -> Result<()> {
    f.same_shape(g)?;
    if w.phis.len() != f.k {
        return Err(Error::shape(format!("{} slot bijections", f.k), w.phis.len()));
    }
    for (j, phi) in w.phis.iter().enumerate() {
        if phi.rows() != f.n || phi.cols() != f.n {
            return Err(Error::shape(format!("φ_{j} of size {}x{}", f.n, f.n), phi.dimension_string()));
        }
    }
    if w.psi.rows() != f.t || w.psi.cols() != f.t {
        return Err(Error::shape(format!("ψ of size {}x{}", f.t, f.t), w.psi.dimension_string()));
    }
    Ok(())
}

fn scale(f: &KMap, g: &KMap, w: &MapEquivWitness) -> f64 {
    let lhs = w.phis.iter().fold(g.norm_fro(), |acc, p| acc * p.norm_fro());
    lhs.max(w.psi.norm_fro() * f.norm_fro())
}

fn residual(lhs: &KMap, rhs: &KMap) -> f64 {
    lhs.sub(rhs).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn sigma_label(sigma: &[usize]) -> String {
    let parts: Vec<String> = sigma.iter().map(|s| format!("{}", s + 1)).collect();
    format!("σ=({})", parts.join(" "))
}

fn is_adjacent_or_identity(sigma: &[usize]) -> bool {
    let moved: Vec<usize> = (0..sigma.len()).filter(|&i| sigma[i] != i).collect();
    match moved.as_slice() {
        [] => true,
        [a, b] => *b == a + 1,
        _ => false,
    }
}

/// `𝓖(φ₁u₁, …, φ_ku_k) = ψ𝓕(u₁, …, u_k)`.
pub fn check_map_equivalence(
    f: &KMap,
    g: &KMap,
    w: &MapEquivWitness,
    tol: &Tolerance,
) -> Result<ResidualReport> {
    check_witness_shapes(f, g, w)?;
    let rhs = apply_output(f, &w.psi)?;
    let lhs = contract_each(g, &w.phis)?;
    let mut rep = ResidualReport::new("map-equivalence", SCALE_DOC, tol.residual_tol);
    rep.push("G(φ_1u_1,…,φ_ku_k) − ψF".into(), relative(residual(&lhs, &rhs), scale(f, g, w)));
    Ok(rep)
}

/// Residuals of `𝓖(φ_{σ(1)}u₁, …, φ_{σ(k)}u_k) = ψ𝓕(u)` for every `σ ∈ S_k`,
/// in lexicographic order of `σ`, each paired with `σ`.
pub fn symmetric_equivalence_split(
    f: &KMap,
    g: &KMap,
    w: &MapEquivWitness,
) -> Result<Vec<(Vec<usize>, f64)>> {
    check_witness_shapes(f, g, w)?;
    let rhs = apply_output(f, &w.psi)?;
    let sc = scale(f, g, w);
    (0..f.k)
        .permutations(f.k)
        .map(|sigma| {
            let phis: Vec<_> = sigma.iter().map(|&s| w.phis[s].clone()).collect();
            let lhs = contract_each(g, &phis)?;
            Ok((sigma, relative(residual(&lhs, &rhs), sc)))
        })
        .collect()
}

/// Symmetric equivalence: `𝓖(φ_{σ(1)}u₁, …, φ_{σ(k)}u_k) = ψ𝓕(u)` for all `σ ∈ S_k`. The report is flagged, not failed, when the
/// worst permutation residual exceeds ten times the worst over the identity
/// and adjacent transpositions.
pub fn check_map_symmetric_equivalence(
    f: &KMap,
    g: &KMap,
    w: &MapEquivWitness,
    tol: &Tolerance,
) -> Result<ResidualReport> {
    let split = symmetric_equivalence_split(f, g, w)?;
    let mut rep = ResidualReport::new("map-symmetric-equivalence", SCALE_DOC, tol.residual_tol);
    let mut adjacent: f64 = 0.0;
    let mut full: f64 = 0.0;
    for (sigma, r) in split {
        if is_adjacent_or_identity(&sigma) {
            adjacent = adjacent.max(r);
        }
        full = full.max(r);
        rep.push(sigma_label(&sigma), r);
    }
    if full > PERMUTATION_FLAG_RATIO * adjacent.max(f64::EPSILON) {
        rep.flagged = Some(format!(
            "full S_k residual {full:e} exceeds {PERMUTATION_FLAG_RATIO}× the adjacent-transposition residual {adjacent:e}"
        ));
    }
    Ok(rep)
}

/// `𝓖(φu₁, …, φu_k) = ψ𝓕(u₁, …, u_k)`.
pub fn check_map_congruence(
    f: &KMap,
    g: &KMap,
    w: &MapCongruenceWitness,
    tol: &Tolerance,
) -> Result<ResidualReport> {
    let ew = w.to_equiv(f.k);
    let mut rep = check_map_equivalence(f, g, &ew, tol)?;
    rep.relation = "map-congruence".into();
    rep.entries[0].label = "G(φu_1,…,φu_k) − ψF".into();
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::Mat;
    use crate::multilinear::MapSymmetry;
    use crate::scalar::Scalar;
    use alloc::vec;

    fn r(x: f64) -> Scalar {
        Scalar::new(x, 0.0)
    }

    #[test]
    fn identity_witness() {
        let tol = Tolerance::default();
        let f = KMap::from_fn(2, 3, 2, |i, l| r((i[0] + 2 * i[1] + 3 * i[2] + l) as f64)).unwrap();
        let w = MapEquivWitness { phis: vec![Mat::identity(2); 3], psi: Mat::identity(2) };
        assert!(check_map_equivalence(&f, &f, &w, &tol).unwrap().passed);
        let cw = MapCongruenceWitness { phi: Mat::identity(2), psi: Mat::identity(2) };
        assert!(check_map_congruence(&f, &f, &cw, &tol).unwrap().passed);
    }

    #[test]
    fn equivalent_but_not_symmetrically() {
        // 𝓕(x, y) = x₁y₂; G = F with φ₁ = φ₂ = I passes (5).
        let tol = Tolerance::default();
        let f = KMap::new(2, 2, 1, vec![r(0.0), r(1.0), r(0.0), r(0.0)], MapSymmetry::None, &tol).unwrap();
        let w = MapEquivWitness { phis: vec![Mat::identity(2); 2], psi: Mat::identity(1) };
        assert!(check_map_equivalence(&f, &f, &w, &tol).unwrap().passed);
        assert!(check_map_symmetric_equivalence(&f, &f, &w, &tol).unwrap().passed);
        // With φ₁ = diag(1, 2), φ₂ = diag(2, 1): G(φ₁x, φ₂y) = 1·1·x₁y₂, but
        // the swapped order gives 2·2·x₁y₂.
        let w = MapEquivWitness {
            phis: vec![Mat::real_diag(&[1.0, 2.0]), Mat::real_diag(&[2.0, 1.0])],
            psi: Mat::identity(1),
        };
        assert!(check_map_equivalence(&f, &f, &w, &tol).unwrap().passed);
        let rep = check_map_symmetric_equivalence(&f, &f, &w, &tol).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.entries.len(), 2);
        assert!(rep.entries[0].residual < 1e-15);
        assert!(rep.entries[1].residual > 0.1);
    }

    #[test]
    fn symmetric_map_with_single_phi() {
        let tol = Tolerance::default();
        let f = KMap::from_fn(2, 3, 1, |i, _| r((i[0] + i[1] + i[2]) as f64 + 1.0))
            .unwrap()
            .with_tag(MapSymmetry::Symmetric, &tol)
            .unwrap();
        let phi = Mat::from_real_rows(&[[1.0, 2.0], [0.5, -1.0]]);
        let g = crate::multilinear::contract_all(&f, &crate::numerics::lu::inverse(&phi, &tol).unwrap()).unwrap();
        let w = MapEquivWitness { phis: vec![phi; 3], psi: Mat::identity(1) };
        let plain = check_map_equivalence(&f, &g, &w, &tol).unwrap();
        let sym = check_map_symmetric_equivalence(&f, &g, &w, &tol).unwrap();
        assert!(plain.passed && sym.passed);
        assert_eq!(sym.entries.len(), 6);
        assert!(sym.flagged.is_none());
    }

    #[test]
    fn shape_mismatch() {
        let tol = Tolerance::default();
        let f = KMap::zeros(2, 2, 1).unwrap();
        let g = KMap::zeros(3, 2, 1).unwrap();
        let w = MapEquivWitness { phis: vec![Mat::identity(2); 2], psi: Mat::identity(1) };
        assert!(matches!(check_map_equivalence(&f, &g, &w, &tol), Err(Error::ShapeMismatch { .. })));
        let w = MapEquivWitness { phis: vec![Mat::identity(2)], psi: Mat::identity(1) };
        assert!(matches!(check_map_equivalence(&f, &f, &w, &tol), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn adjacency_classification() {
        assert!(is_adjacent_or_identity(&[0, 1, 2]));
        assert!(is_adjacent_or_identity(&[1, 0, 2]));
        assert!(is_adjacent_or_identity(&[0, 2, 1]));
        assert!(!is_adjacent_or_identity(&[2, 1, 0]));
        assert!(!is_adjacent_or_identity(&[1, 2, 0]));
    }
}
