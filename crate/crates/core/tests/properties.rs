//! Randomised invariants: cyclic symmetry of cells, gauge invariance of
//! residuals and fingerprints, and permutation of vertex labels.

use cellforge::{
    construct_cells, fingerprint, gauge_transform, random_gauge, verify_type_i, verify_type_ii,
    CellSystem, GraphSpec, Variant,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn systems() -> Vec<CellSystem> {
    [
        "A:7", "D:6", "Astar:8", "Dstar:7", "E8", "E8star", "E1:12", "E2:12", "E5",
    ]
    .iter()
    .map(|s| {
        let spec: GraphSpec = s.parse().unwrap();
        let v = Variant::admissible(spec)[0];
        construct_cells(spec, v).unwrap()
    })
    .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cells_are_invariant_under_rotation(which in 0usize..9, t in 0usize..1000) {
        let cs = &systems()[which];
        let tri = &cs.graph().triangles()[t % cs.graph().triangles().len()];
        let w = cs.w(tri.edges);
        for r in tri.rotations() {
            prop_assert_eq!(cs.w(r), w);
        }
    }

    #[test]
    fn gauge_preserves_axioms_and_fingerprint(which in 0usize..9, seed in any::<u64>()) {
        let cs = &systems()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let moved = gauge_transform(cs, &random_gauge(cs.graph(), &mut rng)).unwrap();
        prop_assert!(verify_type_i(&moved).max <= 1e-9);
        prop_assert!(verify_type_ii(&moved).max <= 1e-9);
        prop_assert!(fingerprint(&moved).distance(&fingerprint(cs)) <= 1e-8);
        if !cs.graph().has_multiple_edges() {
            for (a, b) in moved.values().iter().zip(cs.values()) {
                prop_assert!((a.norm() - b.norm()).abs() <= 1e-9 * b.norm().max(1.0));
            }
        }
    }

    #[test]
    fn conjugation_is_an_involution(which in 0usize..9) {
        let cs = &systems()[which];
        let twice = cs.conj().conj();
        prop_assert_eq!(twice.values(), cs.values());
        prop_assert!(verify_type_i(&cs.conj()).max <= 1e-9);
    }
}
