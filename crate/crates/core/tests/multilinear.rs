use congforge_core::generate::{gen_map, make_map_instance, make_plain_map_instance, GenConfig};
use congforge_core::multilinear::{
    check_map_congruence, check_map_equivalence, check_map_symmetric_equivalence, direct_sum, is_skew, negate_map,
    symmetrize_bilinear_via_tuple, symmetrize_map_witness_traced,
};
use congforge_core::tuple::SymmetryTag;
use congforge_core::{BranchRule, Tolerance};
use proptest::prelude::*;

fn tag() -> impl Strategy<Value = SymmetryTag> {
    prop_oneof![Just(SymmetryTag::None), Just(SymmetryTag::Symmetric), Just(SymmetryTag::Skew)]
}

fn config(seed: u64, k: usize, n: usize, t: usize, symmetry: SymmetryTag) -> GenConfig {
    GenConfig { k, n, t, symmetry, summands: if n >= 2 && t >= 2 { 2 } else { 1 }, ..GenConfig::new(seed) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn merging_loop_keeps_its_invariant(seed in any::<u64>(), k in 2usize..5, n in 1usize..6, t in 1usize..4, symmetry in tag()) {
        let tol = Tolerance::default();
        let symmetry = if symmetry == SymmetryTag::Skew && n < k { SymmetryTag::None } else { symmetry };
        let cfg = config(seed, k, n, t, symmetry);
        let f = gen_map(&cfg)?;
        let inst = make_map_instance(&f, &cfg)?;
        let out = symmetrize_map_witness_traced(&f, &inst.g, &inst.witness, &tol, &BranchRule::Principal)?;
        prop_assert_eq!(out.steps.len(), k - 1);
        for step in &out.steps {
            prop_assert!(step.invariant.passed, "step {}: {:e}", step.r, step.invariant.max_residual);
            prop_assert!(step.rho_residual <= step.selfadjoint_threshold);
        }
        prop_assert!(out.report.max_residual <= 1e-7);
    }

    #[test]
    fn bilinear_routes_agree_on_validity(seed in any::<u64>(), n in 1usize..6, t in 1usize..4, symmetry in tag()) {
        let tol = Tolerance::default();
        let symmetry = if symmetry == SymmetryTag::Skew && n < 2 { SymmetryTag::None } else { symmetry };
        let cfg = config(seed, 2, n, t, symmetry);
        let f = gen_map(&cfg)?;
        let inst = make_map_instance(&f, &cfg)?;
        let direct = symmetrize_map_witness_traced(&f, &inst.g, &inst.witness, &tol, &BranchRule::Principal)?.witness;
        let via = symmetrize_bilinear_via_tuple(&f, &inst.g, &inst.witness, &tol, &BranchRule::Principal)?;
        prop_assert!(check_map_congruence(&f, &inst.g, &direct, &tol)?.max_residual <= 1e-7);
        prop_assert!(check_map_congruence(&f, &inst.g, &via, &tol)?.max_residual <= 1e-7);
    }

    #[test]
    fn plain_equivalence_of_symmetric_maps_is_symmetric(seed in any::<u64>(), k in 2usize..4, extra in 0usize..2, t in 1usize..3, skew in any::<bool>()) {
        let tol = Tolerance::default();
        let symmetry = if skew { SymmetryTag::Skew } else { SymmetryTag::Symmetric };
        let cfg = config(seed, k, (k + extra).min(3), t, symmetry);
        let f = gen_map(&cfg)?;
        let (g, w) = make_plain_map_instance(&f, &cfg)?;
        let plain = check_map_equivalence(&f, &g, &w, &tol)?.max_residual;
        let full = check_map_symmetric_equivalence(&f, &g, &w, &tol)?.max_residual;
        prop_assert!(full <= 10.0 * plain.max(f64::EPSILON), "full {full:e}, plain {plain:e}");
    }

    #[test]
    fn skew_survives_sums_and_negation(seed in any::<u64>(), k in 2usize..4, t in 1usize..3) {
        let tol = Tolerance::default();
        let f = gen_map(&config(seed, k, k, t, SymmetryTag::Skew))?;
        prop_assert!(is_skew(&f, &tol));
        prop_assert!(is_skew(&direct_sum(&f, &f)?, &tol));
        prop_assert!(is_skew(&negate_map(&f), &tol));
    }
}
