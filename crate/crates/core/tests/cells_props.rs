mod common;

use common::{bi, random_rep, random_triple};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use torhom::cells::{add, attaching_form, form_to_triple, is_equivalence_rep, transform, CellMapRep, CupTriple};
use torhom::decide::form_invariants;

fn triple_strategy(bound: i64) -> impl Strategy<Value = CupTriple> {
    (any::<u64>(), 1usize..=3, 1i64..=9)
        .prop_map(move |(seed, n, m)| random_triple(&mut ChaCha8Rng::seed_from_u64(seed), n, m, bound))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn equivalence_reps_preserve_det_and_signature(t in triple_strategy(5), seed in any::<u64>()) {
        let r = random_rep(&mut ChaCha8Rng::seed_from_u64(seed), t.n(), 1, 6);
        let r = CellMapRep::new(t.m().clone(), r.w, vec![bi(0); t.n()], bi(1)).unwrap();
        prop_assert!(is_equivalence_rep(&r, t.m()));
        let moved = transform(&t, &r).unwrap();
        let (before, after) = (form_invariants(t.a()).unwrap(), form_invariants(moved.a()).unwrap());
        prop_assert_eq!(before.abs_det, after.abs_det);
        prop_assert_eq!(before.signature, after.signature);
        prop_assert_eq!(before.rank, after.rank);
        prop_assert_eq!(before.even, after.even);
    }

    #[test]
    fn identity_rep_fixes_every_triple(t in triple_strategy(9)) {
        let id = CellMapRep::identity(t.n(), t.m().clone());
        prop_assert_eq!(transform(&t, &id).unwrap(), t);
    }

    #[test]
    fn transforms_keep_residues_reduced(t in triple_strategy(9), seed in any::<u64>()) {
        let r = random_rep(&mut ChaCha8Rng::seed_from_u64(seed), t.n(), t.m().try_into().unwrap(), 4);
        let moved = transform(&t, &r).unwrap();
        prop_assert!(moved.a().is_symmetric());
        for x in moved.b().iter().chain(std::iter::once(&moved.c())) {
            prop_assert!(*x >= bi(0) && x < t.m() || t.m() == &bi(1));
        }
    }

    #[test]
    fn add_is_a_commutative_monoid(
        (seed, n, m) in (any::<u64>(), 1usize..=3, 1i64..=9),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (random_triple(&mut rng, n, m, 9), random_triple(&mut rng, n, m, 9), random_triple(&mut rng, n, m, 9));
        let zero = CupTriple::zero(n, bi(m)).unwrap();
        prop_assert_eq!(add(&x, &y).unwrap(), add(&y, &x).unwrap());
        prop_assert_eq!(add(&add(&x, &y).unwrap(), &z).unwrap(), add(&x, &add(&y, &z).unwrap()).unwrap());
        prop_assert_eq!(add(&x, &zero).unwrap(), x);
    }

    #[test]
    fn attaching_form_roundtrip(t in (any::<u64>(), 0usize..=4).prop_map(|(s, n)| random_triple(&mut ChaCha8Rng::seed_from_u64(s), n, 1, 50))) {
        let f = attaching_form(&t).unwrap();
        prop_assert_eq!(f.diag.len(), t.n());
        prop_assert_eq!(f.off.len(), t.n() * t.n().saturating_sub(1) / 2);
        prop_assert_eq!(&form_to_triple(&f), &t);
        prop_assert_eq!(attaching_form(&form_to_triple(&f)).unwrap(), f);
    }
}

#[test]
fn add_with_mismatched_shapes_fails() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = random_triple(&mut rng, 2, 3, 3);
    assert!(add(&x, &random_triple(&mut rng, 1, 3, 3)).is_err());
    assert!(add(&x, &random_triple(&mut rng, 2, 5, 3)).is_err());
    assert!(attaching_form(&x).is_err());
}
