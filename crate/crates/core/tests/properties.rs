//! Property-based invariants across the relation algebra and the oracle.

mod common;

use common::{random_relation, random_tuple};
use proptest::prelude::*;
use shiftperc::exact::rational;
use shiftperc::graphs::satisfies;
use shiftperc::pattern_oracle::{exact_event_probability, ColoringSpec};
use shiftperc::relations::{
    edge_threshold, equivalent, finite_path_bounds, infinite_path_probability_bound,
    vertex_threshold, OrderRelation, RelationSet,
};
use shiftperc::rng::SplitMix64;

proptest! {
    #[test]
    fn sorted_images_dominate_domain(k in 1usize..=4, seed: u64) {
        let mut gen = SplitMix64::new(seed);
        let rel = random_relation(k, 24, &mut gen);
        let sorted = rel.sorted_images();
        for (d, s) in rel.domain().iter().zip(&sorted) {
            prop_assert!(s > d);
        }
    }

    #[test]
    fn patterns_survive_increasing_relabelings(k in 1usize..=4, seed: u64) {
        let mut gen = SplitMix64::new(seed);
        let rel = random_relation(k, 24, &mut gen);
        // Random strictly increasing map on all points: stretch each gap.
        let mut offset = 0u64;
        let mut relabel = std::collections::BTreeMap::new();
        let mut points: Vec<u64> = rel.domain().iter().chain(rel.images()).copied().collect();
        points.sort_unstable();
        points.dedup();
        for p in points {
            offset += 1 + gen.next_below(5);
            relabel.insert(p, p + offset);
        }
        let domain = rel.domain().iter().map(|p| relabel[p]).collect();
        let images = rel.images().iter().map(|p| relabel[p]).collect();
        let relabeled = OrderRelation::new(domain, images).expect("relabeling keeps validity");
        prop_assert!(equivalent(&rel, &relabeled).unwrap());
        prop_assert_eq!(rel.pattern(), relabeled.pattern());
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn distinct_patterns_are_inequivalent(k in 1usize..=3, seed: u64) {
        let mut gen = SplitMix64::new(seed);
        let a = random_relation(k, 20, &mut gen);
        let b = random_relation(k, 20, &mut gen);
        if a.pattern() != b.pattern() {
            prop_assert!(!equivalent(&a, &b).unwrap());
        } else {
            prop_assert!(equivalent(&a, &b).unwrap());
        }
    }
}

proptest! {

    #[test]
    fn vertex_threshold_never_exceeds_edge_threshold(k in 1usize..=4, seed: u64) {
        let mut gen = SplitMix64::new(seed);
        let rel = random_relation(k, 24, &mut gen);
        let core_width = rel.core().width();
        prop_assert!(core_width <= rel.width());
        let v = vertex_threshold(&rel).exact().unwrap();
        let e = edge_threshold(&rel).exact().unwrap();
        prop_assert!(v <= e);
        prop_assert!(v >= rational(0, 1) && e < rational(1, 1));
    }

    #[test]
    fn every_random_relation_matches_exactly_one_class(k in 1usize..=3, seed: u64) {
        let mut gen = SplitMix64::new(seed);
        let rel = random_relation(k, 18, &mut gen);
        let classes = RelationSet::enumerate_classes(k).unwrap();
        let matches = classes
            .members()
            .iter()
            .filter(|c| c.pattern() == rel.pattern())
            .count();
        prop_assert_eq!(matches, 1);
    }

    #[test]
    fn finite_path_bounds_are_ordered(p in 1u64..=12, k in 2u64..=12) {
        let (lo, hi) = finite_path_bounds(p, k).unwrap().bounds();
        prop_assert!(lo <= hi);
        prop_assert!(rational(0, 1) <= lo && hi < rational(1, 1));
        let m = k - 1;
        prop_assert_eq!(lo == hi, m.div_ceil(p) == m / p);
    }

    #[test]
    fn path_probability_bound_is_monotone(num in 0i64..=16, den in 1i64..=4) {
        let lambda = rational(num, 16) / rational(den, den); // in [0,1]
        let lambda_g = rational(1, 3);
        let bound = infinite_path_probability_bound(lambda, lambda_g).unwrap();
        prop_assert!(bound >= rational(0, 1) && bound <= rational(1, 1));
        let smaller = infinite_path_probability_bound(lambda * rational(1, 2), lambda_g).unwrap();
        prop_assert!(smaller <= bound);
    }

    #[test]
    fn satisfies_is_antisymmetric(seed: u64, k in 1usize..=3) {
        let mut gen = SplitMix64::new(seed);
        let rel = random_relation(k, 16, &mut gen);
        let a = random_tuple(k, 20, &mut gen);
        let b = random_tuple(k, 20, &mut gen);
        let forward = satisfies(&a, &b, &rel).unwrap();
        let backward = satisfies(&b, &a, &rel).unwrap();
        prop_assert!(!(forward && backward));
    }

    #[test]
    fn relation_json_round_trips(k in 1usize..=4, seed: u64) {
        let mut gen = SplitMix64::new(seed);
        let rel = random_relation(k, 24, &mut gen);
        let json = serde_json::to_string(&rel).unwrap();
        let back: OrderRelation = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(rel, back);
    }

    #[test]
    fn table_coloring_json_round_trips(seed: u64, arity in 1usize..=4) {
        let mut gen = SplitMix64::new(seed);
        let total: usize = (1..=arity).product();
        let colors: Vec<u8> = (0..total).map(|_| gen.next_below(4) as u8).collect();
        let spec = ColoringSpec::table_from_colors(arity, &colors);
        let json = serde_json::to_string(&spec).unwrap();
        let back: ColoringSpec = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(spec, back);
    }

    #[test]
    fn event_partitions_sum_to_one(arity in 1usize..=6) {
        // Partition by the rank of the first coordinate.
        let mut total = 0u64;
        for r in 0..arity {
            total += exact_event_probability(arity, |ranks| ranks[0] == r).unwrap().num;
        }
        let full = exact_event_probability(arity, |_| true).unwrap();
        prop_assert_eq!(total, full.num);
        prop_assert_eq!(full.num, full.den);
    }
}
