//! Finite truncations of pattern graphs and shift graphs, de Bruijn graphs,
//! and the DAG utilities (topological order, longest path, heights) the
//! percolation experiments run on.
//!
//! Vertices of a truncated graph are the strictly increasing k-tuples over
//! `{0..n-1}` in lexicographic order; an ordered pair is an edge when its
//! merged-order pattern matches one of the spec's relations. Edges always
//! increase every coordinate, so the graphs are DAGs by construction.

use std::collections::BTreeSet;
use std::io::Write;

use thiserror::Error;

use crate::relations::{
    for_each_combination, pair_pattern_of, OrderRelation, PairPattern, PairRole, RelationSet,
};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum GraphError {
    #[error("tuple length {0} does not match relation length {1}")]
    ArityMismatch(usize, usize),
    #[error("vertex tuples must be strictly increasing")]
    InvalidVertex,
    #[error("truncation bound {n} is smaller than the tuple length {k}")]
    TooSmall { n: u32, k: usize },
    #[error("graph too large: {0}")]
    TooLarge(String),
    #[error("cycle detected: edge from position {0} to earlier position {1}")]
    CycleDetected(usize, usize),
}

/// Vertex budget for truncated graphs.
pub const MAX_TRUNCATION_VERTICES: u64 = 1 << 22;
/// Vertex budget for de Bruijn graphs.
pub const MAX_DEBRUIJN_VERTICES: u64 = 2_000_000;
/// Pattern-spec graphs up to this many vertices materialize their adjacency.
const MATERIALIZE_LIMIT: usize = 4096;

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial within u64")
}

/// Does the ordered pair `(tail, head)` satisfy the order relation?
///
/// True iff some strictly increasing relabeling carries (domain, sorted
/// images) onto (tail, head); equivalently the two pair patterns agree.
pub fn satisfies(tail: &[u32], head: &[u32], rel: &OrderRelation) -> Result<bool, GraphError> {
    if tail.len() != rel.len() || head.len() != rel.len() {
        return Err(GraphError::ArityMismatch(
            tail.len().max(head.len()),
            rel.len(),
        ));
    }
    if !tail.windows(2).all(|w| w[0] < w[1]) || !head.windows(2).all(|w| w[0] < w[1]) {
        return Err(GraphError::InvalidVertex);
    }
    let tail64: Vec<u64> = tail.iter().map(|&x| x as u64).collect();
    let head64: Vec<u64> = head.iter().map(|&x| x as u64).collect();
    Ok(pair_pattern_of(&tail64, &head64) == rel.pair_pattern())
}

#[derive(Debug, Clone)]
pub enum GraphSpec {
    Shift,
    Relations(RelationSet),
}

impl GraphSpec {
    pub fn tag(&self) -> &'static str {
        match self {
            GraphSpec::Shift => "shift",
            GraphSpec::Relations(_) => "relations",
        }
    }
}

/// A finite truncation of a pattern graph: increasing k-tuples over
/// `{0..n-1}` with pattern-matched edges. Immutable after construction.
#[derive(Debug, Clone)]
pub struct TruncatedGraph {
    k: usize,
    n: u32,
    spec: GraphSpec,
    patterns: Vec<PairPattern>,
    vertices: Vec<Vec<u32>>,
    /// Vertex indices sorted by ascending coordinate sum: a topological order.
    topo: Vec<u32>,
    /// Materialized successor lists (pattern specs within budget only).
    adjacency: Option<Vec<Vec<u32>>>,
}

impl TruncatedGraph {
    /// Truncation of the graph of a relation family.
    pub fn build(spec: RelationSet, n: u32) -> Result<Self, GraphError> {
        let k = spec.k();
        let mut patterns: Vec<PairPattern> =
            spec.members().iter().map(|r| r.pair_pattern()).collect();
        patterns.sort();
        patterns.dedup();
        Self::assemble(k, n, GraphSpec::Relations(spec), patterns)
    }

    /// Truncation of the shift graph on k-tuples.
    pub fn shift(k: usize, n: u32) -> Result<Self, GraphError> {
        let patterns = vec![OrderRelation::shift(k).pair_pattern()];
        Self::assemble(k, n, GraphSpec::Shift, patterns)
    }

    fn assemble(
        k: usize,
        n: u32,
        spec: GraphSpec,
        patterns: Vec<PairPattern>,
    ) -> Result<Self, GraphError> {
        if (n as usize) < k || k == 0 {
            return Err(GraphError::TooSmall { n, k });
        }
        let count = binomial(n as u64, k as u64);
        if count > MAX_TRUNCATION_VERTICES {
            return Err(GraphError::TooLarge(format!(
                "C({n},{k}) = {count} vertices exceeds {MAX_TRUNCATION_VERTICES}"
            )));
        }
        let mut vertices = Vec::with_capacity(count as usize);
        for_each_combination(n as usize, k, |tuple| {
            vertices.push(tuple.iter().map(|&x| x as u32).collect::<Vec<u32>>());
        });
        let mut topo: Vec<u32> = (0..vertices.len() as u32).collect();
        topo.sort_by_key(|&i| {
            (
                vertices[i as usize].iter().map(|&c| c as u64).sum::<u64>(),
                i,
            )
        });
        let mut graph = Self {
            k,
            n,
            spec,
            patterns,
            vertices,
            topo,
            adjacency: None,
        };
        if matches!(graph.spec, GraphSpec::Relations(_))
            && graph.vertices.len() <= MATERIALIZE_LIMIT
        {
            let lists = (0..graph.vertices.len() as u32)
                .map(|i| {
                    let mut out = Vec::new();
                    graph.scan_successors(i, |j| out.push(j));
                    out
                })
                .collect();
            graph.adjacency = Some(lists);
        }
        Ok(graph)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, index: u32) -> &[u32] {
        &self.vertices[index as usize]
    }

    pub fn vertices(&self) -> &[Vec<u32>] {
        &self.vertices
    }

    pub fn index_of(&self, tuple: &[u32]) -> Option<u32> {
        self.vertices
            .binary_search_by(|v| v.as_slice().cmp(tuple))
            .ok()
            .map(|i| i as u32)
    }

    fn matches_pattern(&self, tail: &[u32], head: &[u32]) -> bool {
        let tail64: Vec<u64> = tail.iter().map(|&x| x as u64).collect();
        let head64: Vec<u64> = head.iter().map(|&x| x as u64).collect();
        let p = pair_pattern_of(&tail64, &head64);
        self.patterns.binary_search(&p).is_ok()
    }

    fn scan_successors(&self, index: u32, mut f: impl FnMut(u32)) {
        let tail = &self.vertices[index as usize];
        for (j, head) in self.vertices.iter().enumerate() {
            if head.iter().zip(tail.iter()).all(|(h, t)| h > t) && self.matches_pattern(tail, head)
            {
                f(j as u32);
            }
        }
    }

    /// Visit the successor indices of a vertex.
    pub fn for_each_successor(&self, index: u32, mut f: impl FnMut(u32)) {
        match (&self.spec, &self.adjacency) {
            (GraphSpec::Shift, _) => {
                // Successors drop the first coordinate and append a larger
                // last one; they are contiguous in lexicographic order.
                let v = &self.vertices[index as usize];
                let last = v[self.k - 1];
                if last + 1 >= self.n {
                    return;
                }
                let mut first: Vec<u32> = v[1..].to_vec();
                first.push(last + 1);
                let base = self.index_of(&first).expect("successor in range");
                for offset in 0..(self.n - 1 - last) {
                    f(base + offset);
                }
            }
            (_, Some(lists)) => {
                for &j in &lists[index as usize] {
                    f(j);
                }
            }
            (_, None) => self.scan_successors(index, f),
        }
    }

    pub fn edge_count(&self) -> u64 {
        match self.spec {
            GraphSpec::Shift => binomial(self.n as u64, self.k as u64 + 1),
            GraphSpec::Relations(_) => {
                let mut count = 0u64;
                for i in 0..self.vertices.len() as u32 {
                    self.for_each_successor(i, |_| count += 1);
                }
                count
            }
        }
    }

    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for i in 0..self.vertices.len() as u32 {
            self.for_each_successor(i, |j| out.push((i, j)));
        }
        out
    }

    /// The cached topological order (ascending coordinate sum), without the
    /// defensive forward-edge verification of [`Self::topological_order`].
    pub fn topo_order(&self) -> &[u32] {
        &self.topo
    }

    /// A vertex ordering in which every edge goes forward.
    ///
    /// Construction guarantees acyclicity (edges raise the coordinate sum);
    /// the forward check is kept as a defense against spec violations.
    pub fn topological_order(&self) -> Result<Vec<u32>, GraphError> {
        let mut position = vec![0usize; self.vertices.len()];
        for (pos, &v) in self.topo.iter().enumerate() {
            position[v as usize] = pos;
        }
        for &v in &self.topo {
            let mut violation = None;
            self.for_each_successor(v, |s| {
                if position[s as usize] <= position[v as usize] {
                    violation = Some((position[v as usize], position[s as usize]));
                }
            });
            if let Some((from, to)) = violation {
                return Err(GraphError::CycleDetected(from, to));
            }
        }
        Ok(self.topo.clone())
    }

    /// Longest directed path through included vertices: number of edges and
    /// a witness vertex sequence (empty when nothing is included).
    pub fn longest_path(&self, included: &[bool]) -> (usize, Vec<u32>) {
        assert_eq!(included.len(), self.vertices.len());
        let heights = self.heights(included);
        let mut best: Option<u32> = None;
        for &v in &self.topo {
            if included[v as usize] {
                let better = match best {
                    None => true,
                    Some(b) => {
                        let (hb, hv) = (heights.value(b), heights.value(v));
                        hv > hb || (hv == hb && v < b)
                    }
                };
                if better {
                    best = Some(v);
                }
            }
        }
        let Some(start) = best else {
            return (0, Vec::new());
        };
        let mut witness = vec![start];
        let mut current = start;
        loop {
            let h = heights.value(current);
            if h == 1 {
                break;
            }
            let mut next: Option<u32> = None;
            self.for_each_successor(current, |s| {
                if included[s as usize] && heights.value(s) == h - 1 {
                    next = Some(match next {
                        None => s,
                        Some(prev) => prev.min(s),
                    });
                }
            });
            current = next.expect("height recursion yields a successor");
            witness.push(current);
        }
        (witness.len() - 1, witness)
    }

    /// Height of every vertex over an included subset: excluded vertices get
    /// 0, included ones 1 + the maximum height of their included successors.
    pub fn heights(&self, included: &[bool]) -> HeightField {
        assert_eq!(included.len(), self.vertices.len());
        let mut values = vec![0u32; self.vertices.len()];
        // Successors have strictly larger coordinate sums: walk the
        // topological order backwards so heights are ready when needed.
        for &v in self.topo.iter().rev() {
            if !included[v as usize] {
                continue;
            }
            let mut best = 0u32;
            self.for_each_successor(v, |s| {
                if included[s as usize] {
                    best = best.max(values[s as usize]);
                }
            });
            values[v as usize] = best + 1;
        }
        HeightField { values }
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.k,
            "n": self.n,
            "vertices": self.vertex_count(),
            "edges": self.edge_count(),
            "spec": self.spec.tag(),
        })
    }

    /// Dump edges as CSV rows `v;v2` with comma-separated tuple entries.
    pub fn write_edges_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        for (a, b) in self.edges() {
            let fmt = |t: &[u32]| {
                t.iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            writeln!(out, "{};{}", fmt(self.vertex(a)), fmt(self.vertex(b)))?;
        }
        Ok(())
    }
}

/// Per-vertex heights of an included subset of a truncated graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightField {
    values: Vec<u32>,
}

impl HeightField {
    pub fn value(&self, index: u32) -> u32 {
        self.values[index as usize]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn max_height(&self) -> u32 {
        self.values.iter().copied().max().unwrap_or(0)
    }
}

// ---------------------------------------------------------------------------
// Edge-to-vertex lifting
// ---------------------------------------------------------------------------

/// The relation family on merged edge tuples whose graph has one vertex per
/// edge of the input relation's graph and one edge per consecutive edge pair.
///
/// Two edges (v, v') and (v', v'') merge to tuples u1 = v ∪ v' and
/// u2 = v' ∪ v''; the returned family contains one relation per realizable
/// merged-order pattern of (u1, u2). For the shift relation of length k the
/// result is the singleton shift relation of length k+1.
pub fn lift_edges(rel: &OrderRelation) -> RelationSet {
    let pattern = rel.pattern();
    let merged = pattern.size();
    let roles = rel.pair_pattern();

    // Base configuration of (v, v'): one flag pair per merged point.
    const IN_TAIL: u8 = 1; // point of v
    const IN_MID: u8 = 2; // point of v'
    const IN_NEW: u8 = 4; // point of v''
    let base: Vec<u8> = roles
        .roles()
        .iter()
        .map(|r| match r {
            PairRole::Tail => IN_TAIL,
            PairRole::Shared => IN_TAIL | IN_MID,
            PairRole::Head => IN_MID,
        })
        .collect();

    // Positions of the v' points within the base, in increasing order.
    let mid_slots: Vec<usize> = (0..merged).filter(|&i| base[i] & IN_MID != 0).collect();

    // Classify the points of v'' relative to v', reading the same pattern a
    // second time with v' as the tail: shared points pin onto a v' point,
    // head-only points float in a v' gap. Gap index 0 is impossible because
    // sorted images dominate the domain pointwise.
    let mut pinned: Vec<usize> = Vec::new(); // v' indices carrying a v'' point
    let mut floating_per_gap = vec![0usize; rel.len() + 1];
    {
        let mut mid_seen = 0usize;
        for r in roles.roles() {
            match r {
                PairRole::Tail | PairRole::Shared => {
                    if matches!(r, PairRole::Shared) {
                        pinned.push(mid_seen);
                    }
                    mid_seen += 1;
                }
                PairRole::Head => {
                    debug_assert!(mid_seen >= 1);
                    floating_per_gap[mid_seen] += 1;
                }
            }
        }
    }

    // Tail-only base slots inside each v' gap (gap g spans strictly between
    // mid_slots[g-1] and mid_slots[g]; gap k is everything above the last).
    let tails_in_gap: Vec<Vec<usize>> = (1..=rel.len())
        .map(|g| {
            let lo = mid_slots[g - 1];
            let hi = if g < rel.len() {
                mid_slots[g]
            } else {
                usize::MAX
            };
            (0..merged)
                .filter(|&i| base[i] == IN_TAIL && i > lo && (g == rel.len() || i < hi))
                .collect()
        })
        .collect();

    // All interleavings (with optional coincidences) of the floating v''
    // points of one gap with that gap's tail-only points.
    #[derive(Clone, Copy)]
    enum Step {
        Tail,
        New,
        Both,
    }
    fn gap_arrangements(tails: usize, news: usize) -> Vec<Vec<Step>> {
        fn go(t: usize, f: usize, acc: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
            if t == 0 && f == 0 {
                out.push(acc.clone());
                return;
            }
            if t > 0 {
                acc.push(Step::Tail);
                go(t - 1, f, acc, out);
                acc.pop();
            }
            if f > 0 {
                acc.push(Step::New);
                go(t, f - 1, acc, out);
                acc.pop();
            }
            if t > 0 && f > 0 {
                acc.push(Step::Both);
                go(t - 1, f - 1, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        go(tails, news, &mut Vec::new(), &mut out);
        out
    }

    let per_gap: Vec<Vec<Vec<Step>>> = (1..=rel.len())
        .map(|g| gap_arrangements(tails_in_gap[g - 1].len(), floating_per_gap[g]))
        .collect();

    // Assemble every full configuration and collect distinct (u1, u2)
    // patterns with a canonical representative each.
    let mut found: BTreeSet<(PairPattern, Vec<u64>, Vec<u64>)> = BTreeSet::new();
    let mut choice = vec![0usize; per_gap.len()];
    loop {
        // Build the merged value-class sequence for this choice.
        let mut classes: Vec<u8> = Vec::with_capacity(2 * merged);
        let mut mid_index = 0usize;
        for &flags in &base {
            if flags & IN_MID != 0 {
                let mut f = flags;
                if pinned.contains(&mid_index) {
                    f |= IN_NEW;
                }
                classes.push(f);
                mid_index += 1;
                // Emit the arrangement of the gap that follows this v' point.
                if mid_index <= per_gap.len() {
                    let arrangement = &per_gap[mid_index - 1][choice[mid_index - 1]];
                    let mut tail_iter = tails_in_gap[mid_index - 1].iter();
                    for step in arrangement {
                        match step {
                            Step::Tail => {
                                tail_iter.next().expect("tail available");
                                classes.push(IN_TAIL);
                            }
                            Step::New => classes.push(IN_NEW),
                            Step::Both => {
                                tail_iter.next().expect("tail available");
                                classes.push(IN_TAIL | IN_NEW);
                            }
                        }
                    }
                }
            } else if flags == IN_TAIL {
                // Tail-only slots inside gaps are emitted by the arrangement;
                // slots before the first v' point are emitted here.
                if mid_index == 0 {
                    classes.push(IN_TAIL);
                }
            }
        }
        let first: Vec<u64> = classes
            .iter()
            .enumerate()
            .filter(|(_, &f)| f & (IN_TAIL | IN_MID) != 0)
            .map(|(i, _)| i as u64)
            .collect();
        let second: Vec<u64> = classes
            .iter()
            .enumerate()
            .filter(|(_, &f)| f & (IN_MID | IN_NEW) != 0)
            .map(|(i, _)| i as u64)
            .collect();
        debug_assert_eq!(first.len(), merged);
        debug_assert_eq!(second.len(), merged);
        found.insert((pair_pattern_of(&first, &second), first, second));

        // Advance the odometer over gap arrangements.
        let mut g = 0;
        loop {
            if g == per_gap.len() {
                let relations = found
                    .into_iter()
                    .map(|(_, first, second)| {
                        OrderRelation::new(first, second)
                            .expect("merged consecutive tuples form a valid relation")
                    })
                    .collect();
                return RelationSet::new(relations).expect("at least one configuration");
            }
            choice[g] += 1;
            if choice[g] < per_gap[g].len() {
                break;
            }
            choice[g] = 0;
            g += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// De Bruijn graphs
// ---------------------------------------------------------------------------

/// The de Bruijn graph B(d, k): all length-k strings over a d-letter
/// alphabet, with an edge x -> y when the last k-1 letters of x equal the
/// first k-1 letters of y. Every vertex has out-degree d; the d constant
/// strings carry self-loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeBruijnGraph {
    d: u32,
    k: u32,
    count: u64,
}

impl DeBruijnGraph {
    pub fn new(d: u32, k: u32) -> Result<Self, GraphError> {
        if d < 2 || k < 2 {
            return Err(GraphError::TooSmall { n: d.min(k), k: 2 });
        }
        if d > 36 {
            // Vertices serialize as base-36 strings.
            return Err(GraphError::TooLarge(format!(
                "alphabet size {d} exceeds 36"
            )));
        }
        let count = (d as u64)
            .checked_pow(k)
            .filter(|&c| c <= MAX_DEBRUIJN_VERTICES)
            .ok_or_else(|| {
                GraphError::TooLarge(format!("d^k = {d}^{k} exceeds {MAX_DEBRUIJN_VERTICES}"))
            })?;
        Ok(Self { d, k, count })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn vertex_count(&self) -> u64 {
        self.count
    }

    pub fn edge_count(&self) -> u64 {
        self.count * self.d as u64
    }

    /// Base-d digits of a vertex, most significant first.
    pub fn string_of(&self, index: u64) -> String {
        debug_assert!(index < self.count);
        let mut digits = vec![0u32; self.k as usize];
        let mut x = index;
        for slot in digits.iter_mut().rev() {
            *slot = (x % self.d as u64) as u32;
            x /= self.d as u64;
        }
        digits
            .iter()
            .map(|&d| char::from_digit(d, 36).expect("alphabet below 36"))
            .collect()
    }

    pub fn index_of(&self, s: &str) -> Option<u64> {
        if s.len() != self.k as usize {
            return None;
        }
        let mut acc = 0u64;
        for c in s.chars() {
            let digit = c.to_digit(36)? as u64;
            if digit >= self.d as u64 {
                return None;
            }
            acc = acc * self.d as u64 + digit;
        }
        Some(acc)
    }

    pub fn suffix(&self, index: u64) -> u64 {
        index % (self.count / self.d as u64)
    }

    pub fn prefix(&self, index: u64) -> u64 {
        index / self.d as u64
    }

    pub fn successors(&self, index: u64) -> impl Iterator<Item = u64> + '_ {
        let base = self.suffix(index) * self.d as u64;
        (0..self.d as u64).map(move |c| base + c)
    }

    pub fn has_edge(&self, a: u64, b: u64) -> bool {
        self.suffix(a) == self.prefix(b)
    }

    pub fn is_constant(&self, index: u64) -> bool {
        let digit = index % self.d as u64;
        let mut expect = 0u64;
        for _ in 0..self.k {
            expect = expect * self.d as u64 + digit;
        }
        expect == index
    }

    pub fn self_loop_count(&self) -> u64 {
        (0..self.count).filter(|&v| self.has_edge(v, v)).count() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::equivalent;
    use crate::rng::SplitMix64;

    #[test]
    fn satisfies_shift_pairs() {
        let shift = OrderRelation::shift(2);
        assert!(satisfies(&[3, 5], &[5, 9], &shift).unwrap());
        assert!(!satisfies(&[3, 5], &[4, 9], &shift).unwrap());
        assert!(matches!(
            satisfies(&[3, 5, 7], &[5, 9, 11], &shift),
            Err(GraphError::ArityMismatch(3, 2))
        ));
        assert!(matches!(
            satisfies(&[5, 3], &[5, 9], &shift),
            Err(GraphError::InvalidVertex)
        ));
    }

    #[test]
    fn satisfies_is_antisymmetric_on_random_pairs() {
        let shift = OrderRelation::shift(3);
        let mut gen = SplitMix64::new(77);
        let mut checked = 0;
        while checked < 10_000 {
            let mut a: Vec<u32> = (0..3).map(|_| gen.next_below(30) as u32).collect();
            let mut b: Vec<u32> = (0..3).map(|_| gen.next_below(30) as u32).collect();
            a.sort_unstable();
            b.sort_unstable();
            a.dedup();
            b.dedup();
            if a.len() != 3 || b.len() != 3 {
                continue;
            }
            checked += 1;
            let forward = satisfies(&a, &b, &shift).unwrap();
            let backward = satisfies(&b, &a, &shift).unwrap();
            assert!(!(forward && backward), "{a:?} {b:?}");
        }
    }

    #[test]
    fn shift_graph_shapes() {
        let g = TruncatedGraph::shift(2, 3).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(
            g.edges(),
            vec![(g.index_of(&[0, 1]).unwrap(), g.index_of(&[1, 2]).unwrap())]
        );

        let g = TruncatedGraph::shift(2, 4).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 4);

        let g = TruncatedGraph::shift(1, 3).unwrap();
        assert_eq!(g.edge_count(), 3); // complete order on {0,1,2}

        let g = TruncatedGraph::shift(3, 3).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);

        assert!(matches!(
            TruncatedGraph::shift(3, 2),
            Err(GraphError::TooSmall { .. })
        ));
    }

    #[test]
    fn shift_edge_count_formula() {
        for k in 1..=3usize {
            for n in k as u32..=9 {
                let g = TruncatedGraph::shift(k, n).unwrap();
                let listed = g.edges().len() as u64;
                assert_eq!(listed, binomial(n as u64, k as u64 + 1), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn build_from_relation_family_matches_pairwise_scan() {
        let family = RelationSet::enumerate_classes(2).unwrap();
        let g = TruncatedGraph::build(family.clone(), 4).unwrap();
        for (i, tail) in g.vertices().iter().enumerate() {
            for (j, head) in g.vertices().iter().enumerate() {
                let expected = family
                    .members()
                    .iter()
                    .any(|rel| satisfies(tail, head, rel).unwrap());
                let mut actual = false;
                g.for_each_successor(i as u32, |s| actual |= s == j as u32);
                assert_eq!(actual, expected, "{tail:?} -> {head:?}");
            }
        }
    }

    #[test]
    fn topological_order_goes_forward() {
        for g in [
            TruncatedGraph::shift(2, 6).unwrap(),
            TruncatedGraph::build(RelationSet::enumerate_classes(2).unwrap(), 5).unwrap(),
        ] {
            let order = g.topological_order().unwrap();
            assert_eq!(order.len(), g.vertex_count());
            let mut position = vec![0usize; g.vertex_count()];
            for (pos, &v) in order.iter().enumerate() {
                position[v as usize] = pos;
            }
            for &v in &order {
                g.for_each_successor(v, |s| {
                    assert!(position[s as usize] > position[v as usize]);
                });
            }
        }
        let single = TruncatedGraph::shift(3, 3).unwrap();
        assert_eq!(single.topological_order().unwrap(), vec![0]);
    }

    /// Exhaustive DFS over included paths; the independent oracle for the
    /// height-based dynamic program.
    fn brute_force_longest(g: &TruncatedGraph, included: &[bool]) -> usize {
        fn dfs(g: &TruncatedGraph, included: &[bool], v: u32) -> usize {
            let mut best = 0;
            g.for_each_successor(v, |s| {
                if included[s as usize] {
                    best = best.max(1 + dfs(g, included, s));
                }
            });
            best
        }
        (0..g.vertex_count() as u32)
            .filter(|&v| included[v as usize])
            .map(|v| dfs(g, included, v))
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn longest_path_full_and_empty() {
        let g = TruncatedGraph::shift(2, 4).unwrap();
        let all = vec![true; g.vertex_count()];
        let (len, witness) = g.longest_path(&all);
        assert_eq!(len, 2); // e.g. 01 -> 12 -> 23
        assert_eq!(witness.len(), 3);
        let none = vec![false; g.vertex_count()];
        assert_eq!(g.longest_path(&none), (0, vec![]));
    }

    #[test]
    fn longest_path_matches_brute_force_on_random_subsets() {
        let mut gen = SplitMix64::new(2024);
        for (k, n) in [(2usize, 7u32), (3, 7), (1, 6)] {
            let g = TruncatedGraph::shift(k, n).unwrap();
            for _ in 0..40 {
                let included: Vec<bool> = (0..g.vertex_count())
                    .map(|_| gen.next_f64() < 0.6)
                    .collect();
                let (len, witness) = g.longest_path(&included);
                assert_eq!(len, brute_force_longest(&g, &included));
                if !witness.is_empty() {
                    assert_eq!(witness.len(), len + 1);
                    for pair in witness.windows(2) {
                        let mut is_edge = false;
                        g.for_each_successor(pair[0], |s| is_edge |= s == pair[1]);
                        assert!(is_edge && included[pair[1] as usize]);
                    }
                    assert!(included[witness[0] as usize]);
                }
            }
        }
    }

    #[test]
    fn heights_are_consistent_with_longest_path() {
        let g = TruncatedGraph::shift(2, 4).unwrap();
        let all = vec![true; g.vertex_count()];
        let h = g.heights(&all);
        assert_eq!(h.max_height(), 3);
        let none = vec![false; g.vertex_count()];
        assert_eq!(g.heights(&none).max_height(), 0);

        let mut gen = SplitMix64::new(3);
        let g = TruncatedGraph::shift(3, 8).unwrap();
        for _ in 0..20 {
            let included: Vec<bool> = (0..g.vertex_count())
                .map(|_| gen.next_f64() < 0.5)
                .collect();
            let h = g.heights(&included);
            let (len, _) = g.longest_path(&included);
            if included.iter().any(|&b| b) {
                assert_eq!(h.max_height() as usize, len + 1);
            }
            // Heights strictly decrease along included edges.
            for v in 0..g.vertex_count() as u32 {
                if included[v as usize] {
                    g.for_each_successor(v, |s| {
                        if included[s as usize] {
                            assert!(h.value(v) > h.value(s));
                        }
                    });
                }
            }
        }
    }

    #[test]
    fn contractability_closure_under_increasing_maps() {
        let family = RelationSet::enumerate_classes(2).unwrap();
        let small = TruncatedGraph::build(family.clone(), 5).unwrap();
        let large = TruncatedGraph::build(family, 9).unwrap();
        let mut gen = SplitMix64::new(5);
        for _ in 0..50 {
            // Random strictly increasing map {0..4} -> {0..8}.
            let mut image: Vec<u32> = Vec::new();
            let mut pool: Vec<u32> = (0..9).collect();
            for _ in 0..5 {
                let i = gen.next_below(pool.len() as u64) as usize;
                image.push(pool[i]);
                pool.remove(i);
            }
            image.sort_unstable();
            for (a, b) in small.edges() {
                let ta: Vec<u32> = small.vertex(a).iter().map(|&c| image[c as usize]).collect();
                let tb: Vec<u32> = small.vertex(b).iter().map(|&c| image[c as usize]).collect();
                let ia = large.index_of(&ta).unwrap();
                let ib = large.index_of(&tb).unwrap();
                let mut is_edge = false;
                large.for_each_successor(ia, |s| is_edge |= s == ib);
                assert!(is_edge, "{ta:?} -> {tb:?} must remain an edge");
            }
        }
    }

    #[test]
    fn debruijn_shapes() {
        let g = DeBruijnGraph::new(2, 2).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 8);
        assert_eq!(g.self_loop_count(), 2);

        let g = DeBruijnGraph::new(2, 3).unwrap();
        assert_eq!(g.vertex_count(), 8);
        for v in 0..8 {
            assert_eq!(g.successors(v).count(), 2);
        }

        let g = DeBruijnGraph::new(3, 2).unwrap();
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.self_loop_count(), 3);

        assert!(DeBruijnGraph::new(1, 3).is_err());
        assert!(DeBruijnGraph::new(10, 12).is_err());
    }

    #[test]
    fn debruijn_strings_round_trip() {
        let g = DeBruijnGraph::new(3, 3).unwrap();
        for v in 0..g.vertex_count() {
            let s = g.string_of(v);
            assert_eq!(g.index_of(&s), Some(v));
        }
        assert_eq!(g.string_of(5), "012");
        assert_eq!(g.index_of("220"), Some(24));
        assert_eq!(g.index_of("3"), None);
        // Constant strings are exactly the self-loops.
        for v in 0..g.vertex_count() {
            assert_eq!(g.is_constant(v), g.has_edge(v, v));
        }
    }

    #[test]
    fn lift_of_shift_is_longer_shift() {
        for k in 1..=6usize {
            let lifted = lift_edges(&OrderRelation::shift(k));
            assert_eq!(lifted.len(), 1, "k={k}");
            assert!(
                equivalent(&lifted.members()[0], &OrderRelation::shift(k + 1)).unwrap(),
                "k={k}"
            );
        }
    }

    #[test]
    fn lift_of_interleaved_pair_class() {
        // domain (0,2) -> images (1,3): three realizable consecutive
        // interleavings (new point below, at, or above the middle tail point).
        let rel = OrderRelation::new(vec![0, 2], vec![1, 3]).unwrap();
        let lifted = lift_edges(&rel);
        assert_eq!(lifted.len(), 3);
    }

    /// Consecutive-edge pairs of the base graph, as merged tuple pairs.
    fn consecutive_pairs(g: &TruncatedGraph) -> BTreeSet<(Vec<u32>, Vec<u32>)> {
        let edges = g.edges();
        let merge = |a: &[u32], b: &[u32]| {
            let mut m: Vec<u32> = a.iter().chain(b).copied().collect();
            m.sort_unstable();
            m.dedup();
            m
        };
        let mut out = BTreeSet::new();
        for &(a, b) in &edges {
            for &(c, d) in &edges {
                if b == c {
                    out.insert((
                        merge(g.vertex(a), g.vertex(b)),
                        merge(g.vertex(c), g.vertex(d)),
                    ));
                }
            }
        }
        out
    }

    #[test]
    fn lift_bijection_on_truncations() {
        let mut cases: Vec<OrderRelation> = RelationSet::enumerate_classes(2)
            .unwrap()
            .members()
            .to_vec();
        cases.push(OrderRelation::shift(1));
        cases.push(OrderRelation::shift(3));
        // One length-3 class per merged size (5 and 6; 4 is the shift).
        for size in [5, 6] {
            let rel = RelationSet::enumerate_classes(3)
                .unwrap()
                .members()
                .iter()
                .find(|r| r.pattern().size() == size)
                .expect("class of that merged size")
                .clone();
            cases.push(rel);
        }
        for rel in cases {
            let lifted = lift_edges(&rel);
            let n = 8;
            let base =
                TruncatedGraph::build(RelationSet::new(vec![rel.clone()]).unwrap(), n).unwrap();
            let lifted_graph = TruncatedGraph::build(lifted, n).unwrap();
            let expected = consecutive_pairs(&base);
            let actual: BTreeSet<(Vec<u32>, Vec<u32>)> = lifted_graph
                .edges()
                .into_iter()
                .map(|(a, b)| {
                    (
                        lifted_graph.vertex(a).to_vec(),
                        lifted_graph.vertex(b).to_vec(),
                    )
                })
                .collect();
            assert_eq!(expected, actual, "rel = {rel:?}");
        }
    }

    #[test]
    fn summary_and_csv_formats() {
        let g = TruncatedGraph::shift(2, 10).unwrap();
        assert_eq!(
            g.summary_json(),
            serde_json::json!({"k":2,"n":10,"vertices":45,"edges":120,"spec":"shift"})
        );
        let small = TruncatedGraph::shift(2, 3).unwrap();
        let mut buffer = Vec::new();
        small.write_edges_csv(&mut buffer).unwrap();
        assert_eq!(String::from_utf8(buffer).unwrap(), "0,1;1,2\n");
    }
}
