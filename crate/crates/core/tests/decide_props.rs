mod common;

use common::{bi, random_rep, random_symmetric, random_triple};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use torhom::cells::{is_equivalence_rep, transform, CupTriple};
use torhom::decide::{
    brute_force_equiv, brute_force_equiv_with, brute_force_split, brute_force_split_with, congruence_equiv,
    decide_split, form_invariants, ring_equiv, ring_equiv_with, splitting_system, EquivOutcome, SplitOutcome,
    DEFAULT_BUDGET,
};
use torhom::zlattice::{factorize, satisfies_mod, split_two_power};
use torhom::Exec;

const MODULI: [i64; 7] = [3, 5, 6, 9, 12, 15, 45];

fn sweep_triple() -> impl Strategy<Value = CupTriple> {
    (any::<u64>(), 1usize..=3, 0usize..MODULI.len())
        .prop_map(|(seed, n, k)| random_triple(&mut ChaCha8Rng::seed_from_u64(seed), n, MODULI[k], 10))
}

fn small_pair() -> impl Strategy<Value = (CupTriple, CupTriple)> {
    (any::<u64>(), 1usize..=2, 1i64..=9).prop_map(|(seed, n, m)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_triple(&mut rng, n, m, 5);
        let r = random_rep(&mut rng, n, m, 4);
        let moved = transform(&t, &r).unwrap();
        (t, moved)
    })
}

fn assert_witness(t: &CupTriple, t2: &CupTriple, outcome: &EquivOutcome) -> Result<(), TestCaseError> {
    if let EquivOutcome::Equivalent { witness } = outcome {
        prop_assert!(is_equivalence_rep(witness, t.m()));
        prop_assert_eq!(&transform(t, witness).unwrap(), t2);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn solver_agrees_with_brute_force(t in sweep_triple()) {
        let fast = decide_split(&t).unwrap();
        let slow = brute_force_split(&t, &fast.q, DEFAULT_BUDGET).unwrap();
        match &fast.outcome {
            SplitOutcome::Splits { y, lift, transformed, reduced, .. } => {
                prop_assert!(slow.solutions.contains(y));
                let (matrix, rhs) = splitting_system(&t, &fast.q).unwrap();
                prop_assert!(satisfies_mod(&matrix, y, &rhs, &fast.q));
                for (l, v) in lift.iter().zip(y) {
                    prop_assert_eq!(l.mod_floor(&fast.q), v.clone());
                    prop_assert!(l.is_multiple_of(&(BigInt::from(1) << fast.s)));
                }
                for x in transformed.b().iter().chain(std::iter::once(&transformed.c())) {
                    prop_assert!(x.is_multiple_of(&fast.q));
                }
                prop_assert_eq!(reduced.m(), &(BigInt::from(1) << fast.s));
                prop_assert_eq!(decide_split(reduced).unwrap().outcome, SplitOutcome::NoOddPart);
            }
            SplitOutcome::NoSplit { .. } => prop_assert!(!slow.solvable()),
            SplitOutcome::NoOddPart => prop_assert!(false, "every sweep modulus has an odd part"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn local_solvability_matches_global(
        (seed, n, q) in (any::<u64>(), 1usize..=2, prop::sample::select(vec![3i64, 5, 7, 9, 15, 21, 25, 27, 33, 35, 45]))
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_triple(&mut rng, n, q, 10);
        let global = brute_force_split(&t, &bi(q), DEFAULT_BUDGET).unwrap().solvable();
        let local = factorize(&bi(q)).iter().all(|(p, e)| {
            let pp = num_traits::pow(p.clone(), *e as usize);
            brute_force_split(&t, &pp, DEFAULT_BUDGET).unwrap().solvable()
        });
        prop_assert_eq!(global, local);
    }

    #[test]
    fn transforms_are_recognised_with_sound_witnesses((t, moved) in small_pair()) {
        let v = ring_equiv(&t, &moved, 4).unwrap();
        prop_assert!(matches!(v.outcome, EquivOutcome::Equivalent { .. }), "{:?}", v.outcome);
        assert_witness(&t, &moved, &v.outcome)?;
        prop_assert_eq!(v.homotopy_conclusive, t.m().is_odd());
    }

    #[test]
    fn random_pairs_yield_sound_verdicts(
        (seed, n, m) in (any::<u64>(), 1usize..=2, prop::sample::select(vec![1i64, 3, 4, 5]))
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (t, t2) = (random_triple(&mut rng, n, m, 2), random_triple(&mut rng, n, m, 2));
        let v = ring_equiv(&t, &t2, 3).unwrap();
        assert_witness(&t, &t2, &v.outcome)?;
        if let EquivOutcome::NotEquivalent { .. } = v.outcome {
            let (a, b) = (form_invariants(t.a()).unwrap(), form_invariants(t2.a()).unwrap());
            prop_assert_ne!(a, b);
        }
    }

    #[test]
    fn congruence_never_joins_distinct_invariants(
        (seed, n) in (any::<u64>(), 1usize..=3)
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_symmetric(&mut rng, n, 2), random_symmetric(&mut rng, n, 2));
        let v = congruence_equiv(&a, &b, 3).unwrap();
        if let EquivOutcome::Equivalent { witness } = &v.outcome {
            let (fa, fb) = (form_invariants(&a).unwrap(), form_invariants(&b).unwrap());
            prop_assert_eq!(&fa, &fb);
            prop_assert_eq!(&(&(&witness.w.transpose() * &a) * &witness.w), &b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn execution_modes_agree(
        (seed, n, m) in (any::<u64>(), 1usize..=2, prop::sample::select(vec![3i64, 5, 6, 9]))
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_triple(&mut rng, n, m, 4);
        let r = random_rep(&mut rng, n, m, 3);
        let other = if seed % 2 == 0 { transform(&t, &r).unwrap() } else { random_triple(&mut rng, n, m, 4) };
        prop_assert_eq!(
            ring_equiv_with(&t, &other, 3, Exec::Sequential).unwrap(),
            ring_equiv_with(&t, &other, 3, Exec::Parallel).unwrap()
        );
        let (_, q) = split_two_power(t.m());
        prop_assert_eq!(
            brute_force_split_with(&t, &q, DEFAULT_BUDGET, Exec::Sequential).unwrap(),
            brute_force_split_with(&t, &q, DEFAULT_BUDGET, Exec::Parallel).unwrap()
        );
        if n == 1 {
            prop_assert_eq!(
                brute_force_equiv_with(&t, &other, 2, DEFAULT_BUDGET, Exec::Sequential).unwrap(),
                brute_force_equiv_with(&t, &other, 2, DEFAULT_BUDGET, Exec::Parallel).unwrap()
            );
        }
    }
}

/// `GL₁(ℤ) = {±1}` is fully enumerated at depth 1, so both searches visit the
/// same candidates in the same order.
#[test]
fn oracle_and_fast_search_agree_on_one_by_one_triples() {
    for m in [1i64, 3, 5, 9] {
        for a in -3i64..=3 {
            for a2 in -3i64..=3 {
                for (b, c) in [(0, 0), (1, 2), (2, 1)] {
                    let t = common::triple(&[vec![a]], m, &[1 % m], 0);
                    let t2 = common::triple(&[vec![a2]], m, &[b % m], c % m);
                    let fast = ring_equiv(&t, &t2, 1).unwrap();
                    let slow = brute_force_equiv(&t, &t2, 1, DEFAULT_BUDGET).unwrap();
                    assert_eq!(fast.witness(), slow.witness(), "{t:?} {t2:?}");
                    if matches!(fast.outcome, EquivOutcome::NotEquivalent { .. }) {
                        assert!(matches!(slow.outcome, EquivOutcome::NotEquivalent { .. }));
                    }
                }
            }
        }
    }
}
