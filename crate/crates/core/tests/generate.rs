use congforge_core::generate::{
    gen_map, gen_tuple, make_map_instance, make_sign_split_instance, make_symmetric_equiv_instance, GenConfig, Mode,
};
use congforge_core::multilinear::check_map_symmetric_equivalence;
use congforge_core::tuple::{check_sign_split_instance, check_symmetric_equivalence, SymmetryTag};
use congforge_core::Tolerance;
use proptest::prelude::*;

fn bits(m: &congforge_core::Mat) -> Vec<(u64, u64)> {
    m.entries().iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect()
}

fn mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Complex), Just(Mode::Real)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn same_config_same_bits(seed in any::<u64>(), n in 1usize..6, t in 1usize..4, mode in mode()) {
        let cfg = GenConfig { n, t, mode, symmetry: SymmetryTag::Symmetric, ..GenConfig::new(seed) };
        let a1 = gen_tuple(&cfg)?;
        let a2 = gen_tuple(&cfg)?;
        let i1 = make_symmetric_equiv_instance(&a1, &cfg)?;
        let i2 = make_symmetric_equiv_instance(&a2, &cfg)?;
        for (x, y) in i1.b.mats().iter().zip(i2.b.mats()) {
            prop_assert_eq!(bits(x), bits(y));
        }
        prop_assert_eq!(bits(&i1.witness.p), bits(&i2.witness.p));
        prop_assert_eq!(bits(&i1.witness.r), bits(&i2.witness.r));

        let map_cfg = GenConfig { k: 3, n: n.min(3), ..cfg };
        let f = gen_map(&map_cfg)?;
        let g1 = make_map_instance(&f, &map_cfg)?;
        let g2 = make_map_instance(&gen_map(&map_cfg)?, &map_cfg)?;
        prop_assert_eq!(&g1.g, &g2.g);
        prop_assert_eq!(&g1.witness, &g2.witness);
    }

    #[test]
    fn generated_instances_pass_their_checks(seed in any::<u64>(), n in 1usize..7, t in 1usize..4) {
        let tol = Tolerance::default();
        let cfg = GenConfig { n, t, symmetry: SymmetryTag::Symmetric, ..GenConfig::new(seed) };
        let a = gen_tuple(&cfg)?;
        let inst = make_symmetric_equiv_instance(&a, &cfg)?;
        prop_assert!(check_symmetric_equivalence(&a, &inst.b, &inst.witness, &tol)?.passed);

        let ss = make_sign_split_instance(&cfg)?;
        prop_assert!(check_sign_split_instance(&ss.a, &ss.b, &ss.c, ss.split, &ss.w1, &ss.w2, &tol)?.passed);

        let map_cfg = GenConfig { k: 2, n: n.min(5), ..cfg };
        let f = gen_map(&map_cfg)?;
        let mi = make_map_instance(&f, &map_cfg)?;
        prop_assert!(check_map_symmetric_equivalence(&f, &mi.g, &mi.witness, &tol)?.passed);
    }
}

#[test]
fn most_instances_are_nontrivial() {
    let nontrivial = (0..100u64)
        .filter(|&seed| {
            let cfg = GenConfig { n: 2 + seed as usize % 5, t: 1 + seed as usize % 3, ..GenConfig::new(seed) };
            let a = gen_tuple(&cfg).unwrap();
            let w = make_symmetric_equiv_instance(&a, &cfg).unwrap().witness;
            congforge_core::mat::distance(&w.p, &w.r) > 1e-3 * w.p.norm_fro()
        })
        .count();
    assert!(nontrivial >= 90, "{nontrivial}/100");
}
