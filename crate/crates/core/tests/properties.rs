//! Structural invariants over seeded random instances.

use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use wcolim_core::chain::{
    direct_sum, homology_full, is_cofibration, is_quasi_iso_full, koszul_swap, mapping_cone, shift, shift_tensor_iso,
    validate_complex, AbelianGroup, ChainMap, GradedAbelianGroup,
};
use wcolim_core::colim::{pcm_law, weighted_colimit, yoneda_map};
use wcolim_core::corpus;
use wcolim_core::enriched::Presheaf;
use wcolim_core::simplicial::{dold_kan_gamma, dold_kan_normalize};

fn torsion_order(g: &AbelianGroup) -> BigInt {
    g.torsion.iter().product()
}

fn totals(h: &GradedAbelianGroup) -> (usize, BigInt) {
    h.groups.values().fold((0, BigInt::from(1)), |(f, t), g| (f + g.free_rank, t * torsion_order(g)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_complexes_square_to_zero(seed in any::<u64>(), lo in -2i32..=1, width in 0i32..=3) {
        let c = corpus::random_complex(&mut corpus::rng(seed), (lo, lo + width), 3);
        prop_assert_eq!(validate_complex(&c), Ok(()));
    }

    #[test]
    fn cone_of_identity_is_acyclic(seed in any::<u64>()) {
        let c = Arc::new(corpus::random_complex(&mut corpus::rng(seed), (-1, 2), 3));
        let cone = mapping_cone(&ChainMap::identity(c));
        prop_assert!(homology_full(&cone.complex).is_zero());
    }

    #[test]
    fn shift_moves_homology(seed in any::<u64>(), k in -3i32..=3) {
        let c = corpus::random_complex(&mut corpus::rng(seed), (-1, 2), 3);
        let (h, hs) = (homology_full(&c), homology_full(&shift(&c, k)));
        for n in -2..=3 {
            prop_assert_eq!(h.get(n), hs.get(n + k));
        }
    }

    #[test]
    fn unit_tensor_is_a_quasi_iso(seed in any::<u64>(), k in -2i32..=2) {
        let c = corpus::random_complex(&mut corpus::rng(seed), (0, 2), 3);
        prop_assert!(is_quasi_iso_full(&shift_tensor_iso(&c, k)).quasi_iso);
    }

    #[test]
    fn koszul_swap_is_an_involution(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let a = Arc::new(corpus::random_complex(&mut rng, (0, 1), 2));
        let b = Arc::new(corpus::random_complex(&mut rng, (-1, 1), 2));
        let there = koszul_swap(&a, &b);
        let back = koszul_swap(&b, &a);
        prop_assert_eq!(back.compose(&there), ChainMap::identity(there.source().clone()));
    }

    #[test]
    fn homology_is_additive(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let a = Arc::new(corpus::random_complex(&mut rng, (0, 2), 3));
        let b = Arc::new(corpus::random_complex(&mut rng, (-1, 1), 3));
        let (fa, ta) = totals(&homology_full(&a));
        let (fb, tb) = totals(&homology_full(&b));
        let (fs, ts) = totals(&homology_full(&direct_sum(&[a, b])));
        prop_assert_eq!(fs, fa + fb);
        prop_assert_eq!(ts, ta * tb);
    }

    #[test]
    fn negation_is_invertible(seed in any::<u64>()) {
        let c = Arc::new(corpus::random_complex(&mut corpus::rng(seed), (0, 2), 3));
        let neg = ChainMap::identity(c).scale(&BigInt::from(-1));
        let inv = neg.inverse();
        prop_assert_eq!(inv, Some(neg));
    }

    #[test]
    fn dold_kan_round_trip(seed in any::<u64>(), top in 0usize..=2) {
        let c = corpus::random_complex(&mut corpus::rng(seed), (0, top as i32), 2);
        let g = dold_kan_gamma(&c, top + 1).unwrap();
        prop_assert_eq!(dold_kan_normalize(&g).unwrap(), c);
    }

    #[test]
    fn summand_inclusions_are_cofibrations(seed in any::<u64>()) {
        prop_assert!(is_cofibration(&corpus::random_cofibration(&mut corpus::rng(seed))));
    }

    #[test]
    fn pushout_corner_law(seed in any::<u64>()) {
        let (x, y) = corpus::random_cube_pair(&mut corpus::rng(seed));
        prop_assert!(pcm_law(&x, &y).unwrap().holds());
    }

    #[test]
    fn yoneda_is_an_isomorphism(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let host = corpus::random_host(&mut rng, 3);
        let d = corpus::random_diagram(&mut rng, &host);
        for c in 0..host.host.object_count() {
            let w = Presheaf::representable(host.host.clone(), c);
            let y = yoneda_map(&d, c, &weighted_colimit(&w, &d).unwrap());
            prop_assert!(y.is_isomorphism());
        }
    }
}
