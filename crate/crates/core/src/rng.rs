//! Counter-based deterministic random numbers.
//!
//! Every stochastic routine in this crate derives its variates from a master
//! seed plus a path of integer tags (replica index, vertex index, subset
//! contents, ...). Results are therefore independent of execution order and
//! thread count: the same (seed, tags) always yields the same value.

/// SplitMix64 finalizer. Good avalanche, cheap, stable across platforms.
#[inline]
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Derive a 64-bit value from a seed and a tag path.
///
/// Tags are folded one at a time through the mixer, so `derive(s, &[a, b])`
/// and `derive(s, &[b, a])` differ, and appending a tag never collides with
/// the shorter path (the length is folded in last).
pub fn derive(seed: u64, tags: &[u64]) -> u64 {
    let mut state = splitmix64(seed ^ 0x6c62272e07bb0142);
    for &t in tags {
        state = splitmix64(state ^ splitmix64(t));
    }
    splitmix64(state ^ (tags.len() as u64))
}

/// Map a 64-bit word to a dyadic fraction in [0, 1).
#[inline]
pub fn unit_f64(x: u64) -> f64 {
    // 53 high bits -> exactly representable dyadic rational.
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform in [0, 1) for a tag path under a seed.
pub fn uniform(seed: u64, tags: &[u64]) -> f64 {
    unit_f64(derive(seed, tags))
}

// Stream tags used by this crate. One constant per independent purpose so
// different consumers of the same master seed never overlap.
pub const STREAM_SUBSET: u64 = 1;
pub const STREAM_REPLICA: u64 = 2;
pub const STREAM_VERTEX: u64 = 3;
pub const STREAM_MC: u64 = 4;
pub const STREAM_SEARCH: u64 = 5;
pub const STREAM_ANNEAL: u64 = 6;

/// The uniform attached to one level-1 point (a single natural number).
///
/// Defined as the subset uniform of the singleton so that hierarchical
/// samplers and the percolation samplers see the same level-1 field.
pub fn level1_uniform(seed: u64, point: u64) -> f64 {
    subset_uniform(seed, &[point])
}

/// The uniform attached to a nonempty subset of naturals (given sorted).
pub fn subset_uniform(seed: u64, subset: &[u64]) -> f64 {
    debug_assert!(subset.windows(2).all(|w| w[0] < w[1]));
    let mut tags = Vec::with_capacity(subset.len() + 1);
    tags.push(STREAM_SUBSET);
    tags.extend_from_slice(subset);
    uniform(seed, &tags)
}

/// Small sequential generator for local-search style consumers.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self {
            state: splitmix64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn next_f64(&mut self) -> f64 {
        unit_f64(self.next_u64())
    }

    /// Uniform integer in [0, bound) by rejection-free multiply-shift.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }
}
