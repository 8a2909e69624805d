mod common;

use common::{fixture, random_instance, reference_feasible, reference_optimum};
use mpdtsp::exact::{brute_force, held_karp, held_karp_with, ExactError, ExactOutcome, HeldKarpOptions};
use mpdtsp::model::{tour_cost, Instance};
use mpdtsp::DistanceKind;
use proptest::prelude::*;

fn kind_strategy() -> impl Strategy<Value = DistanceKind> {
    prop_oneof![Just(DistanceKind::ExactEuclidean), Just(DistanceKind::TsplibRounded)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn held_karp_matches_enumeration(seed in any::<u64>(), pairs in 1usize..6, capacity in 1u32..4, kind in kind_strategy()) {
        let inst = random_instance(seed, pairs, capacity as f64, kind);
        let outcome = held_karp(&inst).unwrap();
        let tour = outcome.tour().expect("unit loads always fit");
        prop_assert!(reference_feasible(&inst, &tour.sequence));
        prop_assert!(tour.is_depot_rooted());
        let optimum = reference_optimum(&inst).unwrap();
        prop_assert!((tour.cost - optimum).abs() <= 1e-9 * optimum.max(1.0));
        let recomputed = tour_cost(&inst, &tour.sequence).unwrap();
        prop_assert!((tour.cost - recomputed).abs() <= 1e-9 * recomputed.max(1.0));
    }

    #[test]
    fn brute_force_matches_enumeration(seed in any::<u64>(), pairs in 1usize..4, capacity in 1u32..4) {
        let inst = random_instance(seed, pairs, capacity as f64, DistanceKind::TsplibRounded);
        prop_assert_eq!(brute_force(&inst).unwrap().cost(), reference_optimum(&inst));
    }

    #[test]
    fn more_capacity_never_costs_more(seed in any::<u64>(), pairs in 1usize..6) {
        let base = random_instance(seed, pairs, 1.0, DistanceKind::ExactEuclidean);
        let costs: Vec<f64> = (1..=pairs)
            .map(|q| held_karp(&base.with_capacity(q as f64).unwrap()).unwrap().cost().unwrap())
            .collect();
        prop_assert!(costs.windows(2).all(|w| w[1] <= w[0]), "{:?}", costs);
        let relaxed = held_karp_with(&base, HeldKarpOptions { enforce_capacity: false, ..Default::default() }).unwrap();
        prop_assert!((relaxed.cost().unwrap() - costs[pairs - 1]).abs() <= 1e-12);
    }
}

#[test]
fn fixture_optimum_is_hand_checked() {
    // Q=1: the only feasible orders alternate pickup and delivery
    let tight = held_karp(&fixture(1.0)).unwrap();
    let expected = 3.0 + 2f64.sqrt() + 5f64.sqrt();
    assert!((tight.cost().unwrap() - expected).abs() < 1e-12);
    assert_eq!(tight.cost(), brute_force(&fixture(1.0)).unwrap().cost());
    // Q=2 allows 0 1 2 4 3 0 = 1 + 1 + 1 + 1 + sqrt 2
    let roomy = held_karp(&fixture(2.0)).unwrap();
    assert!((roomy.cost().unwrap() - (4.0 + 2f64.sqrt())).abs() < 1e-12);
}

#[test]
fn oversized_items_are_infeasible() {
    let pts = common::points(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
    let inst = Instance::from_points("heavy", pts, &[3.0], 2.0, DistanceKind::ExactEuclidean).unwrap();
    assert_eq!(held_karp(&inst).unwrap(), ExactOutcome::Infeasible);
    assert_eq!(brute_force(&inst).unwrap(), ExactOutcome::Infeasible);
}

#[test]
fn size_limits_are_enforced() {
    let inst = random_instance(1, 5, 2.0, DistanceKind::ExactEuclidean);
    assert!(matches!(brute_force(&inst), Err(ExactError::TooManyPairs { pairs: 5, .. })));
    let opts = HeldKarpOptions { max_pairs: 4, ..Default::default() };
    assert!(matches!(held_karp_with(&inst, opts), Err(ExactError::TooManyPairs { pairs: 5, limit: 4 })));
    let big = random_instance(1, 14, 2.0, DistanceKind::ExactEuclidean);
    let opts = HeldKarpOptions { max_pairs: 20, ..Default::default() };
    assert!(matches!(held_karp_with(&big, opts), Err(ExactError::TooManyPairs { limit: 13, .. })));
}

#[test]
fn seven_pairs_agree_with_enumeration() {
    for seed in 0..3 {
        let inst = random_instance(seed, 7, 2.0, DistanceKind::TsplibRounded);
        assert_eq!(held_karp(&inst).unwrap().cost(), reference_optimum(&inst));
    }
}
