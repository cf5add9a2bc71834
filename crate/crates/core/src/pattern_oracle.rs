//! Exact probabilities of order-pattern events over i.i.d. uniforms.
//!
//! Ties between distinct uniforms have probability zero, so every event in
//! scope is a function of the relative order of finitely many coordinates:
//! its probability is (satisfying permutations) / m!, an exact rational.
//! This module is the brute-force oracle behind the closed-form thresholds,
//! plus the extremal colorings, exhaustive coloring searches, a hierarchical
//! sampler for exchangeable arrays, and Monte Carlo companions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::Rational;
use crate::relations::{OrderRelation, RelationSet};
use crate::rng;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum OracleError {
    #[error("event arity {0} exceeds the exact enumeration bound {1}")]
    ArityTooLarge(usize, usize),
    #[error("incompatible coloring: {0}")]
    IncompatibleColoring(String),
    #[error("tie detected: window values must be pairwise distinct")]
    TieDetected,
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
}

/// Exact enumeration bound on event arity (10! permutations).
pub const MAX_EXACT_ARITY: usize = 10;

const FACTORIALS: [usize; 11] = [1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800];

pub fn factorial(m: usize) -> usize {
    FACTORIALS[m]
}

/// Visit every permutation of `0..m` (Heap's algorithm). The slice passed to
/// the callback is the rank vector: entry `i` is the rank of coordinate `i`.
pub fn for_each_permutation(m: usize, mut f: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (0..m).collect();
    let mut c = vec![0usize; m];
    f(&a);
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Lehmer index of the relative order of a window. Works on any distinct
/// totally ordered entries; only the relative order matters.
pub fn pattern_index(window: &[usize]) -> usize {
    let m = window.len();
    let mut idx = 0;
    for i in 0..m {
        let smaller_right = window[i + 1..].iter().filter(|&&r| r < window[i]).count();
        idx += smaller_right * FACTORIALS[m - 1 - i];
    }
    idx
}

/// The digit word of a window's relative order, e.g. `"201"` when the first
/// entry is the largest and the second the smallest.
pub fn pattern_word(window: &[usize]) -> String {
    window
        .iter()
        .map(|&r| {
            let local = window.iter().filter(|&&s| s < r).count();
            char::from_digit(local as u32, 10).expect("arity below 10")
        })
        .collect()
}

fn word_to_ranks(word: &str) -> Option<Vec<usize>> {
    let ranks: Option<Vec<usize>> = word
        .chars()
        .map(|c| c.to_digit(10).map(|d| d as usize))
        .collect();
    let ranks = ranks?;
    let mut seen = vec![false; ranks.len()];
    for &r in &ranks {
        if r >= ranks.len() || seen[r] {
            return None;
        }
        seen[r] = true;
    }
    Some(ranks)
}

// ---------------------------------------------------------------------------
// Exact probabilities
// ---------------------------------------------------------------------------

/// Count of satisfying permutations over `m!`, kept unreduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactProbability {
    pub num: u64,
    pub den: u64,
}

impl ExactProbability {
    pub fn ratio(&self) -> Rational {
        Rational::new(self.num as i64, self.den as i64)
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Predicate over the relative order of finitely many uniforms.
pub type RankPredicate = Box<dyn Fn(&[usize]) -> bool + Send + Sync>;

/// An event determined by the relative order of `arity` i.i.d. uniforms.
pub struct PatternEvent {
    pub arity: usize,
    pub predicate: RankPredicate,
}

impl PatternEvent {
    pub fn new(arity: usize, predicate: impl Fn(&[usize]) -> bool + Send + Sync + 'static) -> Self {
        Self {
            arity,
            predicate: Box::new(predicate),
        }
    }

    pub fn probability(&self) -> Result<ExactProbability, OracleError> {
        exact_event_probability(self.arity, &self.predicate)
    }
}

/// Exact probability of a pattern event: satisfying rank vectors over m!.
pub fn exact_event_probability(
    arity: usize,
    predicate: impl Fn(&[usize]) -> bool,
) -> Result<ExactProbability, OracleError> {
    if arity > MAX_EXACT_ARITY {
        return Err(OracleError::ArityTooLarge(arity, MAX_EXACT_ARITY));
    }
    let mut num = 0u64;
    for_each_permutation(arity, |ranks| {
        if predicate(ranks) {
            num += 1;
        }
    });
    Ok(ExactProbability {
        num,
        den: FACTORIALS[arity] as u64,
    })
}

// ---------------------------------------------------------------------------
// Colorings
// ---------------------------------------------------------------------------

/// A coloring of windows of uniforms by their relative order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColoringSpec {
    /// Color = (0-based index of the window maximum) mod p.
    ArgmaxMod { arity: usize, p: u8 },
    /// Explicit total table from permutation words to colors.
    Table {
        arity: usize,
        table: BTreeMap<String, u8>,
    },
    /// The vanishing-perturbation limit of the max-plus-index coloring:
    /// windows compare by (max value, 0-based argmax position).
    LexMax,
}

impl ColoringSpec {
    pub fn table_from_colors(arity: usize, colors: &[u8]) -> Self {
        debug_assert_eq!(colors.len(), FACTORIALS[arity]);
        let mut table = BTreeMap::new();
        for_each_permutation(arity, |ranks| {
            table.insert(pattern_word(ranks), colors[pattern_index(ranks)]);
        });
        ColoringSpec::Table { arity, table }
    }
}

/// Dense lookup form of an explicit table, indexed by Lehmer index.
#[derive(Debug, Clone)]
pub struct TableColoring {
    pub arity: usize,
    pub colors: Vec<u8>,
}

impl TableColoring {
    pub fn from_spec(spec: &ColoringSpec) -> Result<Self, OracleError> {
        match spec {
            ColoringSpec::Table { arity, table } => {
                let total = FACTORIALS[*arity];
                let mut colors = vec![None; total];
                for (word, &color) in table {
                    let ranks = word_to_ranks(word).ok_or_else(|| {
                        OracleError::IncompatibleColoring(format!(
                            "key {word:?} is not a permutation word of arity {arity}"
                        ))
                    })?;
                    if ranks.len() != *arity {
                        return Err(OracleError::IncompatibleColoring(format!(
                            "key {word:?} has wrong arity"
                        )));
                    }
                    colors[pattern_index(&ranks)] = Some(color);
                }
                let colors: Option<Vec<u8>> = colors.into_iter().collect();
                let colors = colors.ok_or_else(|| {
                    OracleError::IncompatibleColoring("table is not total over all patterns".into())
                })?;
                Ok(Self {
                    arity: *arity,
                    colors,
                })
            }
            _ => Err(OracleError::IncompatibleColoring(
                "expected an explicit table".into(),
            )),
        }
    }

    pub fn color(&self, window_ranks: &[usize]) -> u8 {
        self.colors[pattern_index(window_ranks)]
    }
}

/// Argmax-mod coloring of a window of distinct values.
pub fn argmax_mod_coloring(window: &[f64], p: u8) -> Result<u8, OracleError> {
    assert!(!window.is_empty() && p > 0);
    let mut best = 0usize;
    for (i, v) in window.iter().enumerate().skip(1) {
        if *v > window[best] {
            best = i;
        } else if *v == window[best] {
            return Err(OracleError::TieDetected);
        }
    }
    // A duplicate not involving the running max still violates distinctness.
    for i in 0..window.len() {
        for j in i + 1..window.len() {
            if window[i] == window[j] {
                return Err(OracleError::TieDetected);
            }
        }
    }
    Ok((best % p as usize) as u8)
}

fn argmax_of_ranks(window: &[usize]) -> usize {
    let mut best = 0;
    for (i, r) in window.iter().enumerate().skip(1) {
        if *r > window[best] {
            best = i;
        }
    }
    best
}

fn argmax_mod_of_ranks(window: &[usize], p: u8) -> u8 {
    (argmax_of_ranks(window) % p as usize) as u8
}

/// Compare two overlapping windows in the vanishing-perturbation limit:
/// lexicographic on (max value, 0-based argmax position). True iff the first
/// window strictly wins.
pub fn lex_max_compare(first: &[f64], second: &[f64]) -> bool {
    let a = argmax_position(first);
    let b = argmax_position(second);
    match first[a].partial_cmp(&second[b]).expect("no NaN windows") {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => a > b,
    }
}

fn argmax_position(window: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in window.iter().enumerate().skip(1) {
        if *v > window[best] {
            best = i;
        }
    }
    best
}

fn lex_max_compare_ranks(first: &[usize], second: &[usize]) -> bool {
    let a = argmax_of_ranks(first);
    let b = argmax_of_ranks(second);
    match first[a].cmp(&second[b]) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => a > b,
    }
}

// ---------------------------------------------------------------------------
// Descent measures (the variational-problem oracle)
// ---------------------------------------------------------------------------

/// The two windows a relation compares: the domain window and its image
/// window, as positions into a sorted coordinate list.
struct DescentEvent {
    coords: Vec<u64>,
    first: Vec<usize>,
    second: Vec<usize>,
}

fn window_event(rel: &OrderRelation, coloring: &ColoringSpec) -> Result<DescentEvent, OracleError> {
    match coloring {
        ColoringSpec::LexMax => {
            // Longest run of iterates staying inside the domain, from the
            // smallest start achieving it.
            let map = rel.self_map();
            let mut best_start = None;
            let mut best_run = 0usize;
            for &start in map.keys() {
                let mut run = 1usize;
                let mut cur = start;
                while let Some(&next) = map.get(&cur) {
                    if !map.contains_key(&next) {
                        break;
                    }
                    run += 1;
                    cur = next;
                }
                if run > best_run {
                    best_run = run;
                    best_start = Some(start);
                }
            }
            let start = best_start.ok_or_else(|| {
                OracleError::IncompatibleColoring("empty relation has no orbit".into())
            })?;
            let mut orbit = vec![start];
            for _ in 1..best_run {
                orbit.push(map[orbit.last().unwrap()]);
            }
            let tail = map[orbit.last().unwrap()];
            let mut coords: Vec<u64> = orbit.iter().copied().chain([tail]).collect();
            coords.sort_unstable();
            coords.dedup();
            let pos = |v: u64| coords.binary_search(&v).expect("member");
            let first = orbit.iter().map(|&v| pos(v)).collect();
            let second = orbit
                .iter()
                .skip(1)
                .map(|&v| pos(v))
                .chain([pos(tail)])
                .collect();
            Ok(DescentEvent {
                coords,
                first,
                second,
            })
        }
        ColoringSpec::ArgmaxMod { arity, .. } | ColoringSpec::Table { arity, .. } => {
            if *arity != rel.len() {
                return Err(OracleError::IncompatibleColoring(format!(
                    "coloring arity {} does not match relation length {}",
                    arity,
                    rel.len()
                )));
            }
            let mut coords: Vec<u64> = rel.domain().iter().chain(rel.images()).copied().collect();
            coords.sort_unstable();
            coords.dedup();
            let pos = |v: u64| coords.binary_search(&v).expect("member");
            let first = rel.domain().iter().map(|&v| pos(v)).collect();
            let second = rel.images().iter().map(|&v| pos(v)).collect();
            Ok(DescentEvent {
                coords,
                first,
                second,
            })
        }
    }
}

fn event_holds(
    event: &DescentEvent,
    coloring: &ColoringSpec,
    table: Option<&TableColoring>,
    ranks: &[usize],
) -> bool {
    let win1: Vec<usize> = event.first.iter().map(|&p| ranks[p]).collect();
    let win2: Vec<usize> = event.second.iter().map(|&p| ranks[p]).collect();
    match coloring {
        ColoringSpec::LexMax => lex_max_compare_ranks(&win1, &win2),
        ColoringSpec::ArgmaxMod { p, .. } => {
            argmax_mod_of_ranks(&win1, *p) > argmax_mod_of_ranks(&win2, *p)
        }
        ColoringSpec::Table { .. } => {
            let t = table.expect("table prepared");
            t.color(&win1) > t.color(&win2)
        }
    }
}

/// Exact measure of the event "the coloring of the domain window strictly
/// exceeds the coloring of the image window" for i.i.d. uniforms.
///
/// Always at most `1 - 1/w` of the relation's full self-map width.
pub fn descent_measure_exact(
    rel: &OrderRelation,
    coloring: &ColoringSpec,
) -> Result<ExactProbability, OracleError> {
    let event = window_event(rel, coloring)?;
    let m = event.coords.len();
    if m > MAX_EXACT_ARITY {
        return Err(OracleError::ArityTooLarge(m, MAX_EXACT_ARITY));
    }
    let table = match coloring {
        ColoringSpec::Table { .. } => Some(TableColoring::from_spec(coloring)?),
        _ => None,
    };
    let mut num = 0u64;
    for_each_permutation(m, |ranks| {
        if event_holds(&event, coloring, table.as_ref(), ranks) {
            num += 1;
        }
    });
    let result = ExactProbability {
        num,
        den: FACTORIALS[m] as u64,
    };
    debug_assert!(
        result.ratio() <= Rational::new(rel.width() as i64 - 1, rel.width() as i64),
        "descent measure exceeded 1 - 1/w"
    );
    Ok(result)
}

/// Monte Carlo estimate with a 99% normal-approximation confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub ci_halfwidth: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    pub fn contains(&self, value: f64) -> bool {
        (self.mean - value).abs() <= self.ci_halfwidth
    }
}

const Z_99: f64 = 2.5758293035489004;

/// Monte Carlo companion of [`descent_measure_exact`]. Deterministic given
/// the seed; `samples >= 1000`.
pub fn descent_measure_mc(
    rel: &OrderRelation,
    coloring: &ColoringSpec,
    samples: u64,
    seed: u64,
) -> Result<McEstimate, OracleError> {
    assert!(samples >= 1000, "need at least 1000 samples");
    let event = window_event(rel, coloring)?;
    let m = event.coords.len();
    let table = match coloring {
        ColoringSpec::Table { .. } => Some(TableColoring::from_spec(coloring)?),
        _ => None,
    };
    let mut hits = 0u64;
    let mut values = vec![0f64; m];
    let mut ranks = vec![0usize; m];
    for s in 0..samples {
        for (i, v) in values.iter_mut().enumerate() {
            *v = rng::uniform(seed, &[rng::STREAM_MC, s, i as u64]);
        }
        // Convert to ranks; ties have probability ~2^-53 per pair and are
        // broken by index, matching the zero-measure convention.
        for i in 0..m {
            ranks[i] = (0..m)
                .filter(|&j| values[j] < values[i] || (values[j] == values[i] && j < i))
                .count();
        }
        if event_holds(&event, coloring, table.as_ref(), &ranks) {
            hits += 1;
        }
    }
    let mean = hits as f64 / samples as f64;
    let ci_halfwidth = Z_99 * (mean * (1.0 - mean) / samples as f64).sqrt();
    Ok(McEstimate {
        mean,
        ci_halfwidth,
        samples,
        seed,
    })
}

// ---------------------------------------------------------------------------
// The window-chain construction and coloring searches
// ---------------------------------------------------------------------------

/// Exact probability that the argmax-mod-p colors of the two overlapping
/// windows `(u_1..u_{k-1})` and `(u_2..u_k)` strictly decrease.
///
/// Never below the lower finite-path bound for the shift graph on k-tuples,
/// and equal to it exactly when p divides k-1 (the coloring picks up an
/// extra winning case through the last window position otherwise).
pub fn argmax_mod_descent_measure(p: u8, k: usize) -> Result<ExactProbability, OracleError> {
    if k > 9 {
        return Err(OracleError::ArityTooLarge(k, 9));
    }
    assert!(p >= 1 && k >= 2);
    let mut num = 0u64;
    for_each_permutation(k, |ranks| {
        let c1 = argmax_mod_of_ranks(&ranks[..k - 1], p);
        let c2 = argmax_mod_of_ranks(&ranks[1..], p);
        if c1 > c2 {
            num += 1;
        }
    });
    Ok(ExactProbability {
        num,
        den: FACTORIALS[k] as u64,
    })
}

/// Outcome of a coloring search.
#[derive(Debug, Clone)]
pub struct ColoringSearch {
    pub coloring: ColoringSpec,
    pub value: ExactProbability,
    /// True when every table in the family was evaluated; false when the
    /// budget forced a seeded local search (value is still exactly evaluated,
    /// only best-found rather than proven maximal).
    pub exhaustive: bool,
}

/// Budget on the number of tables an exhaustive search may evaluate.
pub const TABLE_SEARCH_BUDGET: u64 = 1_000_000;

fn checked_pow(p: u64, e: usize, cap: u64) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(p)?;
        if acc > cap {
            return None;
        }
    }
    Some(acc)
}

/// Best explicit pattern-table coloring of `(k-1)`-windows into `p` colors
/// for the strict-descent event on overlapping windows of k uniforms.
///
/// Exhaustive when `(k-1)! <= 8` and `p^(k-1)!` is within budget, otherwise
/// a deterministic seeded hill climb flagged as non-exhaustive. The search
/// space is order-pattern colorings only.
pub fn best_pattern_coloring(k: usize, p: u8) -> Result<ColoringSearch, OracleError> {
    assert!(k >= 2 && p >= 1);
    if k > 9 {
        return Err(OracleError::ArityTooLarge(k, 9));
    }
    let window = k - 1;
    let patterns = FACTORIALS[window];
    // (window index pair) per permutation of the k coordinates.
    let mut pairs = Vec::with_capacity(FACTORIALS[k]);
    for_each_permutation(k, |ranks| {
        pairs.push((pattern_index(&ranks[..k - 1]), pattern_index(&ranks[1..])));
    });
    let den = FACTORIALS[k] as u64;
    let evaluate = |colors: &[u8]| -> u64 {
        pairs
            .iter()
            .filter(|&&(a, b)| colors[a] > colors[b])
            .count() as u64
    };

    let exhaustive_size = if patterns <= 8 {
        checked_pow(p as u64, patterns, TABLE_SEARCH_BUDGET)
    } else {
        None
    };
    let (best_colors, best_num, exhaustive) = match exhaustive_size {
        Some(total) => {
            let mut best_colors = vec![0u8; patterns];
            let mut best_num = 0u64;
            let mut colors = vec![0u8; patterns];
            for t in 0..total {
                let mut x = t;
                for c in colors.iter_mut() {
                    *c = (x % p as u64) as u8;
                    x /= p as u64;
                }
                let num = evaluate(&colors);
                if num > best_num {
                    best_num = num;
                    best_colors.copy_from_slice(&colors);
                }
            }
            (best_colors, best_num, true)
        }
        None => {
            let (colors, num) = hill_climb_tables(patterns, p, &evaluate, 0x7ab1e5);
            (colors, num, false)
        }
    };
    Ok(ColoringSearch {
        coloring: ColoringSpec::table_from_colors(window, &best_colors),
        value: ExactProbability { num: best_num, den },
        exhaustive,
    })
}

fn hill_climb_tables(
    patterns: usize,
    p: u8,
    evaluate: &dyn Fn(&[u8]) -> u64,
    seed: u64,
) -> (Vec<u8>, u64) {
    let mut gen = rng::SplitMix64::new(rng::derive(seed, &[rng::STREAM_SEARCH]));
    let mut best: Option<(Vec<u8>, u64)> = None;
    for restart in 0..8 {
        let mut colors: Vec<u8> = if restart == 0 {
            // Argmax-mod table as the seed solution.
            let mut v = vec![0u8; patterns];
            let arity_window = (1..=9).find(|&w| FACTORIALS[w] == patterns).unwrap_or(1);
            for_each_permutation(arity_window, |ranks| {
                v[pattern_index(ranks)] = argmax_mod_of_ranks(ranks, p);
            });
            v
        } else {
            (0..patterns)
                .map(|_| (gen.next_below(p as u64)) as u8)
                .collect()
        };
        let mut value = evaluate(&colors);
        let mut stale = 0u32;
        while stale < 400 {
            let slot = gen.next_below(patterns as u64) as usize;
            let new_color = gen.next_below(p as u64) as u8;
            if colors[slot] == new_color {
                stale += 1;
                continue;
            }
            let old = colors[slot];
            colors[slot] = new_color;
            let candidate = evaluate(&colors);
            if candidate > value {
                value = candidate;
                stale = 0;
            } else {
                colors[slot] = old;
                stale += 1;
            }
        }
        if best.as_ref().is_none_or(|(_, v)| value > *v) {
            best = Some((colors, value));
        }
    }
    best.expect("at least one restart")
}

/// Best achieved value over pattern-table colorings that must win every
/// member's core constraint simultaneously. Used as the certified lower
/// bound for a family threshold. The set must be normalized.
pub fn family_table_search(set: &RelationSet) -> Rational {
    assert!(set.is_normalized() && !set.is_empty());
    let k = set.k();
    let common: Vec<u64> = set.members()[0].domain().to_vec();
    let position = |v: u64| common.binary_search(&v).expect("domain point");

    // Core constraints as position windows into the common domain. A member
    // with an empty core makes the joint event impossible.
    let mut constraints = Vec::new();
    for rel in set.members() {
        let core = rel.core();
        if core.is_empty() {
            return Rational::new(0, 1);
        }
        let sources: Vec<usize> = core.domain().iter().map(|&v| position(v)).collect();
        let targets: Vec<usize> = core.images().iter().map(|&v| position(v)).collect();
        constraints.push((sources, targets));
    }

    if k > 6 {
        // k! exceeds the exact event enumeration we are willing to do here;
        // the trivial lower bound is still certified.
        return Rational::new(0, 1);
    }

    let total = FACTORIALS[k];
    // For every permutation of the common domain and every constraint,
    // precompute the sub-pattern indices of the source and target windows,
    // plus the restriction of the full pattern to the constraint's sources
    // (used for max-projection).
    let mut per_perm: Vec<Vec<(usize, usize)>> = Vec::with_capacity(total);
    let mut full_restriction: Vec<Vec<usize>> = Vec::with_capacity(total);
    for_each_permutation(k, |ranks| {
        let mut row = Vec::with_capacity(constraints.len());
        let mut restr = Vec::with_capacity(constraints.len());
        for (sources, targets) in &constraints {
            let src: Vec<usize> = sources.iter().map(|&p| ranks[p]).collect();
            let tgt: Vec<usize> = targets.iter().map(|&p| ranks[p]).collect();
            row.push((pattern_index(&src), pattern_index(&tgt)));
            restr.push(pattern_index(&src));
        }
        per_perm.push(row);
        full_restriction.push(restr);
    });

    let colors = (FACTORIALS[k] as u64).min(6) as u8;
    let evaluate = |table: &[u8]| -> u64 {
        // Max-projection of the table onto each constraint's source window:
        // the best color over all full patterns extending a sub-pattern.
        let mut projections: Vec<Vec<u8>> = constraints
            .iter()
            .map(|(sources, _)| vec![0u8; FACTORIALS[sources.len()]])
            .collect();
        for (perm, restr) in full_restriction.iter().enumerate() {
            for (c, &sub) in restr.iter().enumerate() {
                let cell = &mut projections[c][sub];
                *cell = (*cell).max(table[perm]);
            }
        }
        per_perm
            .iter()
            .filter(|row| {
                row.iter()
                    .enumerate()
                    .all(|(c, &(src, tgt))| projections[c][src] > projections[c][tgt])
            })
            .count() as u64
    };

    let best_num = match checked_pow(colors as u64, total, TABLE_SEARCH_BUDGET) {
        Some(table_count) => {
            let mut best = 0u64;
            let mut table = vec![0u8; total];
            for t in 0..table_count {
                let mut x = t;
                for c in table.iter_mut() {
                    *c = (x % colors as u64) as u8;
                    x /= colors as u64;
                }
                best = best.max(evaluate(&table));
            }
            best
        }
        None => hill_climb_tables(total, colors, &evaluate, 0x00fa_3117).1,
    };
    Rational::new(best_num as i64, total as i64)
}

// ---------------------------------------------------------------------------
// Hierarchical sampling of exchangeable arrays
// ---------------------------------------------------------------------------

/// Sample a contractable array at finite scale: one uniform per nonempty
/// subset of `{0..n-1}` of size at most `k`, and a value per increasing
/// k-tuple computed by `f` from the uniforms of the tuple's subsets.
///
/// `f` receives the `2^k - 1` subset uniforms ordered by (subset size,
/// lexicographic position mask), so the first `k` entries are the level-1
/// uniforms of the tuple's points in order. The returned values are indexed
/// by the lexicographic rank of the tuple, matching the vertex indexing of
/// truncated graphs.
pub fn hierarchical_sample(
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    k: usize,
    n: u32,
    seed: u64,
) -> Vec<f64> {
    assert!(
        (1..=20).contains(&k) && (n as usize) >= k,
        "2^k - 1 subset slots per tuple"
    );
    // Subset position masks ordered by (size, mask value): mask value order
    // on equal-size masks is lexicographic order of the index sets.
    let mut masks: Vec<u32> = (1u32..(1 << k)).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut values = Vec::new();
    let mut args = vec![0f64; masks.len()];
    let mut subset = Vec::with_capacity(k);
    crate::relations::for_each_combination(n as usize, k, |tuple| {
        for (slot, &mask) in masks.iter().enumerate() {
            subset.clear();
            for (i, &t) in tuple.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    subset.push(t as u64);
                }
            }
            args[slot] = rng::subset_uniform(seed, &subset);
        }
        values.push(f(&args));
    });
    values
}
