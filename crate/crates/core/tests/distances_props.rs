mod common;

use common::{interleaves_oracle, random_diagram, random_hook, random_hooks, shift_vanishes};
use hookprod::distances::{
    bottleneck, interleaves, interleaving_exact, matching_distance_estimate, Distance,
    Interleaving, LineSampling,
};
use hookprod::{evaluate_hooks, GridModule, GridPoint, HookDecomposition, HookModule, PrimeField};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn module(hooks: Vec<HookModule>, bound: GridPoint) -> GridModule {
    evaluate_hooks(&HookDecomposition::new(hooks), bound)
}

#[test]
fn interleavings_of_interval_modules_match_enumeration() {
    let bound = GridPoint::new(3, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut agreements = [0usize; 2];
    for _ in 0..60 {
        let a = module(vec![random_hook(&mut rng, 3)], bound);
        let b = if rng.gen_bool(0.2) {
            GridModule::zero(PrimeField::default(), bound)
        } else {
            module(vec![random_hook(&mut rng, 3)], bound)
        };
        for eps in 0..=2 {
            let expected = interleaves_oracle(&a, &b, eps);
            assert_eq!(interleaves(&a, &b, eps, 12).unwrap(), expected, "eps {eps}");
            agreements[expected as usize] += 1;
        }
    }
    // both verdicts occur
    assert!(agreements[0] > 0 && agreements[1] > 0, "{agreements:?}");
}

#[test]
fn small_hooks_are_one_away_from_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let p = GridPoint::new(rng.gen_range(0..20), rng.gen_range(0..20));
        let bound = GridPoint::new(23, 23);
        let hook = module(
            vec![HookModule::bounded(p, GridPoint::new(p.x + 1, p.y + 1)).unwrap()],
            bound,
        );
        let zero = GridModule::zero(PrimeField::default(), bound);
        // both shifts by (2,2) vanish and the supports differ
        assert!(shift_vanishes(&hook, 1) && !shift_vanishes(&hook, 0));
        assert_eq!(
            interleaving_exact(&hook, &zero, 5).unwrap(),
            Interleaving::Exact(1)
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn interleaving_is_a_metric_and_bounds_the_estimate(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bound = GridPoint::new(8, 8);
        let ms: Vec<GridModule> = (0..3).map(|_| evaluate_hooks(&random_hooks(&mut rng, 2, 7), bound)).collect();
        let d = |i: usize, j: usize| interleaving_exact(&ms[i], &ms[j], 8).unwrap().distance();
        for i in 0..3 {
            prop_assert_eq!(d(i, i), Distance::zero());
            for j in 0..3 {
                prop_assert_eq!(d(i, j), d(j, i));
                let same = ms[i].same_rank_invariant(&ms[j]).unwrap();
                prop_assert_eq!(d(i, j) == Distance::zero(), same);
                if let Distance::Finite(exact) = d(i, j) {
                    let est = matching_distance_estimate(&ms[i], &ms[j], &LineSampling::Standard).unwrap();
                    prop_assert!(est <= Distance::Finite(exact), "estimate {} above {}", est, exact);
                }
                for k in 0..3 {
                    if let (Distance::Finite(x), Distance::Finite(y), Distance::Finite(z)) = (d(i, k), d(i, j), d(j, k)) {
                        prop_assert!(x <= y + z);
                    }
                }
            }
        }
    }

    #[test]
    fn bottleneck_is_a_metric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pds: Vec<_> = (0..3).map(|_| random_diagram(&mut rng, 4, 20)).collect();
        let d = |i: usize, j: usize| bottleneck(&pds[i], &pds[j]).value;
        for i in 0..3 {
            prop_assert_eq!(d(i, i), Distance::zero());
            for j in 0..3 {
                prop_assert_eq!(d(i, j), d(j, i));
                for k in 0..3 {
                    if let (Distance::Finite(x), Distance::Finite(y), Distance::Finite(z)) = (d(i, k), d(i, j), d(j, k)) {
                        prop_assert!(x <= y + z);
                    }
                }
            }
        }
    }

    #[test]
    fn bottleneck_matching_is_valid(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_diagram(&mut rng, 5, 20);
        let b = random_diagram(&mut rng, 5, 20);
        prop_assert!(bottleneck(&a, &b).matching.validate(&a, &b).is_ok());
    }
}
