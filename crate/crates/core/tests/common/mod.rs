//! Shared helpers for the integration suites.

use shiftperc::relations::OrderRelation;
use shiftperc::rng::SplitMix64;

/// A uniformly messy valid order relation of length `k` with points below
/// `bound`, by rejection.
pub fn random_relation(k: usize, bound: u64, gen: &mut SplitMix64) -> OrderRelation {
    assert!(bound >= 4 * k as u64);
    loop {
        let mut domain: Vec<u64> = Vec::with_capacity(k);
        while domain.len() < k {
            let candidate = gen.next_below(bound);
            if !domain.contains(&candidate) {
                domain.push(candidate);
            }
        }
        domain.sort_unstable();
        let images: Vec<u64> = domain
            .iter()
            .map(|&d| d + 1 + gen.next_below(bound))
            .collect();
        if let Ok(rel) = OrderRelation::new(domain, images) {
            return rel;
        }
    }
}

/// A strictly increasing random tuple of length `k` with entries below
/// `bound`.
#[allow(dead_code)] // not every suite uses both helpers
pub fn random_tuple(k: usize, bound: u32, gen: &mut SplitMix64) -> Vec<u32> {
    assert!(bound as usize >= k);
    let mut tuple: Vec<u32> = Vec::with_capacity(k);
    while tuple.len() < k {
        let candidate = gen.next_below(bound as u64) as u32;
        if !tuple.contains(&candidate) {
            tuple.push(candidate);
        }
    }
    tuple.sort_unstable();
    tuple
}
