use congforge_core::generate::{gen_tuple, make_symmetric_equiv_instance, GenConfig, Mode, Rng};
use congforge_core::mat::distance;
use congforge_core::numerics::lu::inverse;
use congforge_core::tuple::{
    apply_weak_mix, check_congruence, check_symmetric_equivalence, symmetrize_witness, symmetrize_witness_traced,
    CongruenceWitness, EquivWitness, MatTuple, SymmetryTag,
};
use congforge_core::{BranchRule, Error, Mat, Tolerance};
use proptest::prelude::*;

fn tag() -> impl Strategy<Value = SymmetryTag> {
    prop_oneof![Just(SymmetryTag::None), Just(SymmetryTag::Symmetric), Just(SymmetryTag::Skew)]
}

fn instance(seed: u64, n: usize, t: usize, symmetry: SymmetryTag) -> (MatTuple, MatTuple, EquivWitness) {
    let cfg = GenConfig { n, t, symmetry, ..GenConfig::new(seed) };
    let a = gen_tuple(&cfg).unwrap();
    let inst = make_symmetric_equiv_instance(&a, &cfg).unwrap();
    (a, inst.b, inst.witness)
}

#[test]
fn real_obstruction_needs_complex_numbers() {
    let tol = Tolerance::default();
    let a = MatTuple::single(Mat::real_diag(&[1.0])).unwrap();
    let b = MatTuple::single(Mat::real_diag(&[-1.0])).unwrap();
    let w = EquivWitness { p: Mat::real_diag(&[1.0]), r: Mat::real_diag(&[-1.0]) };
    assert!(check_symmetric_equivalence(&a, &b, &w, &tol).unwrap().passed);
    let s = symmetrize_witness(&a, &b, &w, &tol, &BranchRule::Principal).unwrap().s;
    assert!((s[(0, 0)] * s[(0, 0)] + 1.0).norm() <= 1e-12);
    let real = symmetrize_witness(&a, &b, &w, &tol, &BranchRule::RealPreferring);
    assert!(matches!(real, Err(Error::BranchConflict { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_instances_round_trip(seed in any::<u64>(), n in 1usize..9, t in 1usize..5, symmetry in tag()) {
        let tol = Tolerance::default();
        let (a, b, w) = instance(seed, n, t, symmetry);
        let s = symmetrize_witness(&a, &b, &w, &tol, &BranchRule::Principal)?.s;
        let worst = a
            .mats()
            .iter()
            .zip(b.mats())
            .map(|(ai, bi)| distance(&(&(&s * ai) * &s.transpose()), bi))
            .fold(0.0, f64::max);
        let bound = 1e-8 * s.norm_fro().powi(2) * a.max_norm();
        prop_assert!(worst <= bound, "{worst:e} > {bound:e}");
    }

    #[test]
    fn passing_witness_makes_r_inverse_p_selfadjoint(seed in any::<u64>(), n in 1usize..7, t in 1usize..4, symmetry in tag()) {
        let tol = Tolerance::default();
        let (a, b, w) = instance(seed, n, t, symmetry);
        prop_assert!(check_symmetric_equivalence(&a, &b, &w, &tol)?.passed);
        let out = symmetrize_witness_traced(&a, &b, &w, &tol, &BranchRule::Principal)?;
        prop_assert!(out.relation_residual <= out.relation_threshold);
        let m = &inverse(&w.r, &tol)? * &w.p;
        prop_assert!(distance(&m, &out.m) <= 1e-8 * m.norm_fro());
    }

    #[test]
    fn congruence_is_a_degenerate_symmetric_equivalence(seed in any::<u64>(), n in 1usize..7, t in 1usize..4) {
        let tol = Tolerance::default();
        let mut rng = Rng::seeded(seed);
        let a = MatTuple::untagged(n, (0..t).map(|_| rng.complex_matrix(n, n)).collect())?;
        let s = rng.conditioned_matrix(n, 1e3, false, &tol, 64)?;
        let b = a.congruence_image(&s)?;
        let w = EquivWitness { p: s.clone(), r: s.clone() };
        prop_assert!(check_symmetric_equivalence(&a, &b, &w, &tol)?.passed);
        let cw = CongruenceWitness { s };
        prop_assert!(check_congruence(&a, &b, &cw, &tol)?.passed);
    }

    #[test]
    fn congruence_keeps_symmetry_tags(seed in any::<u64>(), n in 1usize..7, t in 1usize..4, symmetry in tag()) {
        let tol = Tolerance::default();
        let a = gen_tuple(&GenConfig { n, t, symmetry, ..GenConfig::new(seed) })?;
        let s = Rng::seeded(seed ^ 1).complex_matrix(n, n);
        let b = a.congruence_image(&s)?;
        prop_assert!(b.symmetry_defect(symmetry) <= tol.residual_tol);
    }

    #[test]
    fn weak_mixes_compose(seed in any::<u64>(), n in 1usize..5, t in 1usize..5) {
        let tol = Tolerance::default();
        let mut rng = Rng::seeded(seed);
        let b = MatTuple::untagged(n, (0..t).map(|_| rng.complex_matrix(n, n)).collect())?;
        let l1 = rng.conditioned_matrix(t, 1e3, false, &tol, 64)?;
        let l2 = rng.conditioned_matrix(t, 1e3, false, &tol, 64)?;
        let twice = apply_weak_mix(&apply_weak_mix(&b, &l1, &tol)?, &l2, &tol)?;
        let once = apply_weak_mix(&b, &(&l2 * &l1), &tol)?;
        for (x, y) in twice.mats().iter().zip(once.mats()) {
            prop_assert!(distance(x, y) <= 1e-12 * y.norm_fro().max(1.0));
        }
    }

    #[test]
    fn real_mode_gives_real_s_or_conflict(seed in any::<u64>(), n in 1usize..6, t in 1usize..3, negate in any::<bool>()) {
        let tol = Tolerance::default();
        let cfg = GenConfig { n, t, symmetry: SymmetryTag::Symmetric, mode: Mode::Real, negate, ..GenConfig::new(seed) };
        let a = gen_tuple(&cfg)?;
        let inst = make_symmetric_equiv_instance(&a, &cfg)?;
        match symmetrize_witness(&a, &inst.b, &inst.witness, &tol, &BranchRule::RealPreferring) {
            Ok(w) => prop_assert!(w.s.is_real_within(0.0)),
            Err(Error::BranchConflict { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
}
