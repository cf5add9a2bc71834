//! Independence numbers of de Bruijn graphs.
//!
//! Two routes: the subset reformulation (choose A among (k-1)-strings and
//! count k-strings whose prefix is in A and suffix is not, i.e. a maximum
//! directed cut in B(d, k-1)), and a direct maximum-independent-set search
//! in B(d, k). The two must agree; a discrepancy is surfaced as a hard
//! error rather than silently trusting either side.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{to_f64, Rational};
use crate::graphs::DeBruijnGraph;
use crate::relations::finite_path_bounds;
use crate::rng;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum DicutError {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("method disagreement for (d,k)=({d},{k}): subset {subset} vs independent-set {mis}")]
    MethodDisagreement {
        d: u32,
        k: u32,
        subset: u64,
        mis: u64,
    },
}

/// Ground-set cap for exhaustive subset enumeration (2^26 subsets).
pub const SUBSET_GROUND_LIMIT: u32 = 26;
/// Vertex cap for the independent-set branch and bound.
pub const MIS_VERTEX_LIMIT: u64 = 40_000;

// ---------------------------------------------------------------------------
// The subset instance
// ---------------------------------------------------------------------------

/// The subset form of the independence problem: pick A among the d^(k-1)
/// strings; the objective counts length-k strings with prefix in A and
/// suffix outside A, equivalently the directed edge boundary of A in
/// B(d, k-1).
#[derive(Debug, Clone)]
pub struct DicutInstance {
    d: u32,
    k: u32,
    ground: u32,
    out_neighbors: Vec<Vec<u32>>,
    in_neighbors: Vec<Vec<u32>>,
}

impl DicutInstance {
    pub fn new(d: u32, k: u32) -> Result<Self, DicutError> {
        if d < 2 || k < 2 {
            return Err(DicutError::InvalidParameters(format!(
                "need d >= 2 and k >= 2, got ({d},{k})"
            )));
        }
        if d > 36 {
            return Err(DicutError::InvalidParameters(format!(
                "alphabet size {d} exceeds 36 (witnesses serialize as base-36 strings)"
            )));
        }
        let ground_u64 = (d as u64).checked_pow(k - 1).ok_or_else(|| {
            DicutError::BudgetExceeded(format!("d^(k-1) overflows for ({d},{k})"))
        })?;
        if ground_u64 > u32::MAX as u64 {
            return Err(DicutError::BudgetExceeded(format!(
                "ground set {ground_u64} too large"
            )));
        }
        let ground = ground_u64 as u32;
        // Neighbors in B(d, k-1). For k = 2 the overlap is empty and the
        // ground graph is the complete looped digraph on d letters.
        let shift_base = ground / d;
        let mut out_neighbors = vec![Vec::with_capacity(d as usize); ground as usize];
        let mut in_neighbors = vec![Vec::with_capacity(d as usize); ground as usize];
        for g in 0..ground {
            let suffix = g % shift_base.max(1);
            for c in 0..d {
                let h = suffix * d + c;
                out_neighbors[g as usize].push(h);
                in_neighbors[h as usize].push(g);
            }
        }
        Ok(Self {
            d,
            k,
            ground,
            out_neighbors,
            in_neighbors,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn ground_size(&self) -> u32 {
        self.ground
    }

    /// Objective by direct string counting over all d^k strings.
    pub fn objective_by_strings(&self, in_set: &[bool]) -> u64 {
        let total = self.ground as u64 * self.d as u64;
        let suffix_mod = self.ground as u64;
        (0..total)
            .filter(|&x| {
                let prefix = (x / self.d as u64) as usize;
                let suffix = (x % suffix_mod) as usize;
                in_set[prefix] && !in_set[suffix]
            })
            .count() as u64
    }

    /// Objective as the directed edge boundary of A in B(d, k-1).
    pub fn objective(&self, in_set: &[bool]) -> u64 {
        let mut count = 0u64;
        for (g, outs) in self.out_neighbors.iter().enumerate() {
            if in_set[g] {
                count += outs.iter().filter(|&&h| !in_set[h as usize]).count() as u64;
            }
        }
        count
    }

    /// The independent set of B(d, k) induced by a subset witness:
    /// all strings with prefix in A and suffix outside A.
    pub fn induced_independent_set(&self, in_set: &[bool]) -> Vec<u64> {
        let total = self.ground as u64 * self.d as u64;
        let suffix_mod = self.ground as u64;
        (0..total)
            .filter(|&x| in_set[(x / self.d as u64) as usize] && !in_set[(x % suffix_mod) as usize])
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaMethod {
    Subset,
    Mis,
    LocalSearch,
}

/// An independence-number result with its witness.
///
/// Serializes as `{"d":2,"k":3,"alpha":2,"method":"subset","witness":["10"]}`;
/// the `exact` flag is implied by the method and stays out of the wire form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaResult {
    pub d: u32,
    pub k: u32,
    pub alpha: u64,
    pub method: AlphaMethod,
    /// True for exhaustive methods; heuristics report best-found values,
    /// which are always valid lower bounds.
    #[serde(skip)]
    pub exact: bool,
    /// Subset witnesses are (k-1)-strings; independent-set witnesses are
    /// k-strings.
    pub witness: Vec<String>,
}

impl AlphaResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("alpha results serialize")
    }
}

/// Check that a vertex list is independent in B(d, k) and contains no
/// constant string. Panics on violation: every returned witness passes.
fn assert_independent(graph: &DeBruijnGraph, vertices: &[u64]) {
    for &v in vertices {
        assert!(
            !graph.is_constant(v),
            "self-looped vertex {v} in an independent set"
        );
    }
    for (i, &a) in vertices.iter().enumerate() {
        for &b in &vertices[i + 1..] {
            assert!(
                !graph.has_edge(a, b) && !graph.has_edge(b, a),
                "witness contains the conflicting pair ({a},{b})"
            );
        }
    }
}

fn subset_result(
    instance: &DicutInstance,
    d: u32,
    k: u32,
    mask: u64,
    value: u64,
    method: AlphaMethod,
    exact: bool,
) -> AlphaResult {
    let in_set: Vec<bool> = (0..instance.ground_size())
        .map(|g| mask >> g & 1 == 1)
        .collect();
    debug_assert_eq!(instance.objective(&in_set), value);
    // Witness soundness: the induced set is independent in B(d, k).
    let graph = DeBruijnGraph::new(d, k).expect("within budget");
    let induced = instance.induced_independent_set(&in_set);
    assert_eq!(induced.len() as u64, value);
    assert_independent(&graph, &induced);
    let ground_graph = DeBruijnGraph::new(d, (k - 1).max(2)).ok();
    let witness = (0..instance.ground_size())
        .filter(|&g| in_set[g as usize])
        .map(|g| match (&ground_graph, k - 1) {
            (_, 1) => char::from_digit(g, 36)
                .expect("alphabet below 36")
                .to_string(),
            (Some(gg), _) => gg.string_of(g as u64),
            (None, _) => unreachable!("k >= 2"),
        })
        .collect();
    AlphaResult {
        d,
        k,
        alpha: value,
        method,
        exact,
        witness,
    }
}

// ---------------------------------------------------------------------------
// Exhaustive subset enumeration (Gray code)
// ---------------------------------------------------------------------------

fn gray(t: u64) -> u64 {
    t ^ (t >> 1)
}

/// Exhaustive maximum of the subset objective via Gray-code enumeration
/// with O(degree) incremental updates; the subset space is partitioned by
/// high-order bits across workers, and the max is order-independent (ties
/// break toward the smallest mask).
pub fn alpha_subset_exact(d: u32, k: u32) -> Result<AlphaResult, DicutError> {
    let instance = DicutInstance::new(d, k)?;
    let ground = instance.ground_size();
    if ground > SUBSET_GROUND_LIMIT {
        return Err(DicutError::BudgetExceeded(format!(
            "ground set d^(k-1) = {ground} exceeds {SUBSET_GROUND_LIMIT}"
        )));
    }
    let total: u64 = 1 << ground;
    let chunk_bits = ground.saturating_sub(16).min(8);
    let chunks: u64 = 1 << chunk_bits;
    let per_chunk = total / chunks;

    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * per_chunk;
            let mut mask = gray(start);
            let mut in_set: Vec<bool> = (0..ground).map(|g| mask >> g & 1 == 1).collect();
            let mut value = instance.objective(&in_set);
            let mut best = (value, mask);
            for t in start..start + per_chunk - 1 {
                let bit = (t + 1).trailing_zeros() as usize;
                let removing = in_set[bit];
                let mut delta = 0i64;
                for &h in &instance.out_neighbors[bit] {
                    if h as usize != bit && !in_set[h as usize] {
                        delta += 1;
                    }
                }
                for &u in &instance.in_neighbors[bit] {
                    if u as usize != bit && in_set[u as usize] {
                        delta -= 1;
                    }
                }
                if removing {
                    delta = -delta;
                }
                in_set[bit] = !removing;
                mask ^= 1 << bit;
                value = (value as i64 + delta) as u64;
                if value > best.0 || (value == best.0 && mask < best.1) {
                    best = (value, mask);
                }
            }
            best
        })
        .reduce(
            || (0u64, 0u64),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );

    Ok(subset_result(
        &instance,
        d,
        k,
        best.1,
        best.0,
        AlphaMethod::Subset,
        true,
    ))
}

// ---------------------------------------------------------------------------
// Independent-set branch and bound
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn empty(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn subtract(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    fn intersects_all_of(&self, clique: &BitSet) -> bool {
        // clique ⊆ self
        clique
            .words
            .iter()
            .zip(&self.words)
            .all(|(c, s)| c & !s == 0)
    }

    fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

struct MisSolver<'a> {
    adjacency: &'a [BitSet],
    best_size: usize,
    best_set: Vec<usize>,
}

impl MisSolver<'_> {
    /// Greedy clique cover of the candidate set: its size bounds the
    /// independence number from above.
    fn clique_cover_bound(&self, candidates: &BitSet) -> usize {
        let mut cliques: Vec<BitSet> = Vec::new();
        for v in candidates.iter_ones() {
            let mut placed = false;
            for clique in &mut cliques {
                if self.adjacency[v].intersects_all_of(clique) {
                    clique.insert(v);
                    placed = true;
                    break;
                }
            }
            if !placed {
                let mut c = BitSet::empty(self.adjacency.len());
                c.insert(v);
                cliques.push(c);
            }
        }
        cliques.len()
    }

    fn branch(&mut self, candidates: &BitSet, chosen: &mut Vec<usize>) {
        let remaining = candidates.count();
        if remaining == 0 {
            if chosen.len() > self.best_size {
                self.best_size = chosen.len();
                self.best_set = chosen.clone();
            }
            return;
        }
        if chosen.len() + remaining <= self.best_size {
            return;
        }
        if chosen.len() + self.clique_cover_bound(candidates) <= self.best_size {
            return;
        }
        // Branch on the candidate of maximum degree within the candidate
        // set; ties break toward the lexicographically first string.
        let pick = candidates
            .iter_ones()
            .map(|v| {
                let deg = self.adjacency[v]
                    .words
                    .iter()
                    .zip(&candidates.words)
                    .map(|(a, c)| (a & c).count_ones() as usize)
                    .sum::<usize>();
                (deg, v)
            })
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
            .map(|(_, v)| v)
            .expect("nonempty");

        // Include.
        let mut without_closed = candidates.clone();
        without_closed.subtract(&self.adjacency[pick]);
        without_closed.remove(pick);
        chosen.push(pick);
        self.branch(&without_closed, chosen);
        chosen.pop();
        // Exclude.
        let mut without = candidates.clone();
        without.remove(pick);
        self.branch(&without, chosen);
    }
}

/// Exact maximum independent set in B(d, k), both edge orientations counted
/// as conflicts and self-looped (constant) vertices excluded up front.
pub fn alpha_mis_exact(d: u32, k: u32) -> Result<AlphaResult, DicutError> {
    if d < 2 || k < 2 {
        return Err(DicutError::InvalidParameters(format!(
            "need d >= 2 and k >= 2, got ({d},{k})"
        )));
    }
    let graph = DeBruijnGraph::new(d, k).map_err(|e| DicutError::BudgetExceeded(e.to_string()))?;
    if graph.vertex_count() > MIS_VERTEX_LIMIT {
        return Err(DicutError::BudgetExceeded(format!(
            "d^k = {} exceeds {MIS_VERTEX_LIMIT}",
            graph.vertex_count()
        )));
    }
    // Compact the non-constant vertices.
    let originals: Vec<u64> = (0..graph.vertex_count())
        .filter(|&v| !graph.is_constant(v))
        .collect();
    let compact_of = |orig: u64| originals.binary_search(&orig).ok();
    let n = originals.len();
    let mut adjacency = vec![BitSet::empty(n); n];
    for (i, &v) in originals.iter().enumerate() {
        for s in graph.successors(v) {
            if s != v {
                if let Some(j) = compact_of(s) {
                    adjacency[i].insert(j);
                    adjacency[j].insert(i);
                }
            }
        }
    }
    let mut solver = MisSolver {
        adjacency: &adjacency,
        best_size: 0,
        best_set: Vec::new(),
    };
    let mut all = BitSet::empty(n);
    for i in 0..n {
        all.insert(i);
    }
    solver.branch(&all, &mut Vec::new());

    let mut vertices: Vec<u64> = solver.best_set.iter().map(|&i| originals[i]).collect();
    vertices.sort_unstable();
    assert_independent(&graph, &vertices);
    Ok(AlphaResult {
        d,
        k,
        alpha: vertices.len() as u64,
        method: AlphaMethod::Mis,
        exact: true,
        witness: vertices.iter().map(|&v| graph.string_of(v)).collect(),
    })
}

// ---------------------------------------------------------------------------
// Local search
// ---------------------------------------------------------------------------

/// Simulated annealing over subset indicator flips, seeded by a greedy
/// climb from the empty set. Cooling schedule: T(t) = max(1e-3, 2·0.999^t).
/// The result is feasible and a valid lower bound, never claimed exact.
pub fn alpha_local_search(
    d: u32,
    k: u32,
    seed: u64,
    iterations: u64,
) -> Result<AlphaResult, DicutError> {
    let instance = DicutInstance::new(d, k)?;
    let ground = instance.ground_size() as usize;
    let mut in_set = vec![false; ground];
    let delta_of = |in_set: &[bool], bit: usize| -> i64 {
        let mut delta = 0i64;
        for &h in &instance.out_neighbors[bit] {
            if h as usize != bit && !in_set[h as usize] {
                delta += 1;
            }
        }
        for &u in &instance.in_neighbors[bit] {
            if u as usize != bit && in_set[u as usize] {
                delta -= 1;
            }
        }
        if in_set[bit] {
            -delta
        } else {
            delta
        }
    };

    // Greedy seed: keep adding the best positive-delta element.
    let mut value: i64 = 0;
    loop {
        let mut best: Option<(i64, usize)> = None;
        for bit in 0..ground {
            if !in_set[bit] {
                let delta = delta_of(&in_set, bit);
                if delta > 0 && best.is_none_or(|(bd, bb)| delta > bd || (delta == bd && bit < bb))
                {
                    best = Some((delta, bit));
                }
            }
        }
        match best {
            Some((delta, bit)) => {
                in_set[bit] = true;
                value += delta;
            }
            None => break,
        }
    }

    let mut gen = rng::SplitMix64::new(rng::derive(seed, &[rng::STREAM_ANNEAL]));
    let mut best_value = value;
    let mut best_set = in_set.clone();
    for t in 0..iterations {
        let temperature = (2.0 * 0.999f64.powi(t.min(i32::MAX as u64) as i32)).max(1e-3);
        let bit = gen.next_below(ground as u64) as usize;
        let delta = delta_of(&in_set, bit);
        let accept = delta >= 0 || gen.next_f64() < (delta as f64 / temperature).exp();
        if accept {
            in_set[bit] = !in_set[bit];
            value += delta;
            if value > best_value {
                best_value = value;
                best_set.copy_from_slice(&in_set);
            }
        }
    }

    let mask = best_set
        .iter()
        .enumerate()
        .fold(0u64, |m, (i, &b)| if b && i < 64 { m | 1 << i } else { m });
    // Masks only encode the first 64 elements; reconstruct directly instead
    // when the ground set is larger.
    if ground > 64 {
        let value = instance.objective(&best_set) as u64;
        let graph =
            DeBruijnGraph::new(d, k).map_err(|e| DicutError::BudgetExceeded(e.to_string()))?;
        let induced = instance.induced_independent_set(&best_set);
        assert_eq!(induced.len() as u64, value);
        assert_independent(&graph, &induced);
        let ground_graph =
            DeBruijnGraph::new(d, k - 1).map_err(|e| DicutError::BudgetExceeded(e.to_string()))?;
        let witness = best_set
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(g, _)| ground_graph.string_of(g as u64))
            .collect();
        return Ok(AlphaResult {
            d,
            k,
            alpha: value,
            method: AlphaMethod::LocalSearch,
            exact: false,
            witness,
        });
    }
    Ok(subset_result(
        &instance,
        d,
        k,
        mask,
        best_value as u64,
        AlphaMethod::LocalSearch,
        false,
    ))
}

// ---------------------------------------------------------------------------
// Ratio report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub d: u32,
    pub k: u32,
    pub alpha: u64,
    pub exact: bool,
    pub ratio: f64,
    #[serde(with = "crate::exact::rational_serde")]
    pub lambda_lo: Rational,
    #[serde(with = "crate::exact::rational_serde")]
    pub lambda_hi: Rational,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
}

impl RatioReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,k,alpha,exact,ratio,lambda_lo,lambda_hi,gap\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{:.6},{},{},{:.6}\n",
                r.d,
                r.k,
                r.alpha,
                r.exact,
                r.ratio,
                crate::exact::format_rational(r.lambda_lo),
                crate::exact::format_rational(r.lambda_hi),
                r.gap,
            ));
        }
        out
    }
}

/// Practical cap for running the independent-set check alongside the subset
/// solver inside the ratio report.
const RATIO_MIS_CHECK_LIMIT: u64 = 256;

/// Per-alphabet-size comparison of alpha(d, k)/d^k against the finite-path
/// threshold bounds for p = 2. Both exact solvers run where affordable, and
/// any disagreement is a hard error.
pub fn alpha_ratio_report(
    d_min: u32,
    d_max: u32,
    k: u32,
    seed: u64,
) -> Result<RatioReport, DicutError> {
    if d_min < 2 || d_max < d_min {
        return Err(DicutError::InvalidParameters(format!(
            "need 2 <= d_min <= d_max, got {d_min}..={d_max}"
        )));
    }
    let bounds = finite_path_bounds(2, k as u64)
        .map_err(|e| DicutError::InvalidParameters(e.to_string()))?
        .bounds();
    let mut rows = Vec::new();
    for d in d_min..=d_max {
        let ground = (d as u64).pow(k - 1);
        let vertex_count = (d as u64).pow(k);
        let result = if ground <= SUBSET_GROUND_LIMIT as u64 {
            let subset = alpha_subset_exact(d, k)?;
            if vertex_count <= RATIO_MIS_CHECK_LIMIT {
                let mis = alpha_mis_exact(d, k)?;
                if mis.alpha != subset.alpha {
                    return Err(DicutError::MethodDisagreement {
                        d,
                        k,
                        subset: subset.alpha,
                        mis: mis.alpha,
                    });
                }
            }
            subset
        } else if vertex_count <= RATIO_MIS_CHECK_LIMIT {
            alpha_mis_exact(d, k)?
        } else {
            alpha_local_search(d, k, rng::derive(seed, &[d as u64, k as u64]), 100_000)?
        };
        let ratio = result.alpha as f64 / vertex_count as f64;
        rows.push(RatioRow {
            d,
            k,
            alpha: result.alpha,
            exact: result.exact,
            ratio,
            lambda_lo: bounds.0,
            lambda_hi: bounds.1,
            gap: to_f64(bounds.0) - ratio,
        });
    }
    Ok(RatioReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;
    use crate::rng::SplitMix64;

    #[test]
    fn objective_routes_agree_on_random_subsets() {
        let mut gen = SplitMix64::new(31);
        for (d, k) in [(2u32, 3u32), (2, 4), (3, 3), (2, 2)] {
            let instance = DicutInstance::new(d, k).unwrap();
            assert!(instance.ground_size() <= 12 || instance.ground_size() <= 16);
            for _ in 0..50 {
                let in_set: Vec<bool> = (0..instance.ground_size())
                    .map(|_| gen.next_f64() < 0.5)
                    .collect();
                assert_eq!(
                    instance.objective(&in_set),
                    instance.objective_by_strings(&in_set),
                    "(d,k)=({d},{k})"
                );
            }
            // Empty and full sets score zero.
            let empty = vec![false; instance.ground_size() as usize];
            let full = vec![true; instance.ground_size() as usize];
            assert_eq!(instance.objective(&empty), 0);
            assert_eq!(instance.objective(&full), 0);
        }
    }

    #[test]
    fn known_small_alphas() {
        let a22 = alpha_subset_exact(2, 2).unwrap();
        assert_eq!(a22.alpha, 1);
        let a23 = alpha_subset_exact(2, 3).unwrap();
        assert_eq!(a23.alpha, 2);
        assert_eq!(a23.witness.len(), 1); // e.g. A = {"10"}
        assert_eq!(alpha_mis_exact(2, 2).unwrap().alpha, 1);
        assert_eq!(alpha_mis_exact(2, 3).unwrap().alpha, 2);
    }

    #[test]
    fn methods_agree_on_small_instances() {
        for (d, k) in [(2u32, 2u32), (2, 3), (2, 4), (2, 5), (3, 3)] {
            let subset = alpha_subset_exact(d, k).unwrap();
            let mis = alpha_mis_exact(d, k).unwrap();
            assert_eq!(subset.alpha, mis.alpha, "(d,k)=({d},{k})");
        }
    }

    #[test]
    fn alphabet_monotonicity() {
        let a: Vec<u64> = (2..=4)
            .map(|d| alpha_subset_exact(d, 3).unwrap().alpha)
            .collect();
        assert!(a[0] <= a[1] && a[1] <= a[2]);
    }

    #[test]
    fn heuristic_never_beats_exact() {
        let exact = alpha_subset_exact(3, 3).unwrap().alpha;
        for seed in [0u64, 7, 1000] {
            for iterations in [0u64, 50, 5000] {
                let heuristic = alpha_local_search(3, 3, seed, iterations).unwrap();
                assert!(heuristic.alpha <= exact, "seed {seed} iters {iterations}");
            }
        }
    }

    #[test]
    fn routes_agree_beyond_the_exhaustive_subset_budget() {
        // The ground sets of (2,6) and (3,4) are too large to enumerate, but
        // the annealer's subset witness bounds alpha from below while the
        // independent-set solver is exact, so matching values verify the
        // subset identity at these sizes. Both use multi-word bitsets.
        for (d, k, expect) in [(2u32, 6u32, 27u64), (3, 4, 30)] {
            let mis = alpha_mis_exact(d, k).unwrap();
            assert_eq!(mis.alpha, expect, "({d},{k})");
            let local = alpha_local_search(d, k, 1, 200_000).unwrap();
            assert_eq!(
                local.alpha, expect,
                "subset route must reach alpha at ({d},{k})"
            );
        }
    }

    #[test]
    fn budget_errors() {
        assert!(matches!(
            alpha_subset_exact(2, 6),
            Err(DicutError::BudgetExceeded(_))
        ));
        assert!(matches!(
            alpha_mis_exact(2, 16),
            Err(DicutError::BudgetExceeded(_))
        ));
        assert!(matches!(
            alpha_subset_exact(1, 3),
            Err(DicutError::InvalidParameters(_))
        ));
    }

    #[test]
    fn local_search_finds_small_optimum() {
        for seed in [1u64, 99, 5040] {
            let result = alpha_local_search(2, 3, seed, 100).unwrap();
            assert_eq!(result.alpha, 2, "seed {seed}");
            assert!(!result.exact);
        }
        // Zero iterations returns the greedy seed, which is feasible.
        let greedy = alpha_local_search(2, 3, 7, 0).unwrap();
        assert!(greedy.alpha >= 1);
        // Larger instance: feasibility only.
        let big = alpha_local_search(6, 3, 3, 20_000).unwrap();
        assert!(big.alpha > 0);
        assert!(!big.exact);
        // Ground sets beyond 64 elements take the reconstruction path.
        let wide = alpha_local_search(10, 3, 3, 2_000).unwrap();
        assert!(wide.alpha > 0);
        assert_eq!(wide.method, AlphaMethod::LocalSearch);
    }

    #[test]
    fn ratio_report_k3_increases_toward_third() {
        let report = alpha_ratio_report(2, 4, 3, 0).unwrap();
        assert_eq!(report.rows.len(), 3);
        for row in &report.rows {
            assert!(row.exact);
            assert_eq!(row.lambda_lo, rational(1, 3));
            assert_eq!(row.lambda_hi, rational(1, 3));
            assert!(row.ratio < 1.0 / 3.0);
        }
        assert!((report.rows[0].ratio - 0.25).abs() < 1e-12);
        assert!((report.rows[0].gap - (1.0 / 3.0 - 0.25)).abs() < 1e-12);
        assert!(report.rows[0].ratio < report.rows[1].ratio);
        assert!(report.rows[1].ratio < report.rows[2].ratio);
    }

    #[test]
    fn ratio_report_even_k_keeps_interval() {
        let report = alpha_ratio_report(2, 2, 2, 0).unwrap();
        assert_eq!(report.rows[0].lambda_lo, rational(0, 1));
        assert_eq!(report.rows[0].lambda_hi, rational(1, 2));
    }

    #[test]
    fn result_json_shape() {
        let result = alpha_subset_exact(2, 3).unwrap();
        let json = result.to_json();
        assert_eq!(json["d"], 2);
        assert_eq!(json["k"], 3);
        assert_eq!(json["alpha"], 2);
        assert_eq!(json["method"], "subset");
        assert!(json["witness"].is_array());
    }

    #[test]
    fn csv_shape() {
        let report = alpha_ratio_report(2, 3, 3, 0).unwrap();
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "d,k,alpha,exact,ratio,lambda_lo,lambda_hi,gap"
        );
        assert!(lines.next().unwrap().starts_with("2,3,2,true,0.25"));
    }
}
