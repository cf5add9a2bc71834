//! Monte Carlo vertex percolation on truncated graphs.
//!
//! Vertices are included by thresholding one per-vertex uniform at lambda,
//! so the included sets at two lambdas under the same seed are nested; the
//! extremal sampler instead colors level-1 uniforms so that colors strictly
//! decrease along every included edge, which caps path lengths structurally.
//! Replica seeds derive from the master seed by counter-based splitting,
//! making every report independent of execution order and thread count.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{to_f64, Rational};
use crate::graphs::{GraphSpec, TruncatedGraph};
use crate::relations::{infinite_path_probability_bound, vertex_threshold};
use crate::rng;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum PercolationError {
    #[error("the extremal sampler needs a shift graph with k >= 2")]
    NotShiftGraph,
    #[error("no crossing of the target frequency in the sweep grid")]
    NoCrossing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    Iid,
    Extremal,
    Custom,
}

/// One realization of a random subgraph: an inclusion bit per vertex.
/// Bit-exactly reproducible from (graph, sampler, seed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphSample {
    pub included: Vec<bool>,
    pub sampler: SamplerKind,
    pub seed: u64,
}

impl SubgraphSample {
    pub fn included_count(&self) -> usize {
        self.included.iter().filter(|&&b| b).count()
    }
}

/// Include each vertex independently with probability lambda, by
/// thresholding the vertex uniform. Same seed and larger lambda gives a
/// superset: the exact coupling behind monotone sweeps.
pub fn sample_iid(graph: &TruncatedGraph, lambda: f64, seed: u64) -> SubgraphSample {
    assert!((0.0..=1.0).contains(&lambda));
    let included = (0..graph.vertex_count() as u64)
        .map(|v| rng::uniform(seed, &[rng::STREAM_VERTEX, v]) < lambda)
        .collect();
    SubgraphSample {
        included,
        sampler: SamplerKind::Iid,
        seed,
    }
}

/// The extremal correlated sampler on a shift graph: draw one uniform per
/// integer level and include a vertex when the argmax-mod-p color of its
/// first k-1 coordinates strictly exceeds that of its last k-1 coordinates.
///
/// Along any edge the second window of the tail is the first window of the
/// head, so colors strictly decrease along included paths: no included path
/// has p edges, for any seed.
pub fn sample_extremal(
    graph: &TruncatedGraph,
    p: u8,
    seed: u64,
) -> Result<SubgraphSample, PercolationError> {
    if !matches!(graph.spec(), GraphSpec::Shift) || graph.k() < 2 {
        return Err(PercolationError::NotShiftGraph);
    }
    assert!(p >= 1);
    let levels: Vec<f64> = (0..graph.n() as u64)
        .map(|i| rng::level1_uniform(seed, i))
        .collect();
    let k = graph.k();
    // Ties between the 53-bit level uniforms have measure ~2^-53 and are
    // broken toward the earlier position, like the exact permutation model.
    let window_color = |window: &[u32]| -> u8 {
        let mut best = 0usize;
        for i in 1..window.len() {
            if levels[window[i] as usize] > levels[window[best] as usize] {
                best = i;
            }
        }
        (best % p as usize) as u8
    };
    let included = graph
        .vertices()
        .iter()
        .map(|v| window_color(&v[..k - 1]) > window_color(&v[1..]))
        .collect();
    Ok(SubgraphSample {
        included,
        sampler: SamplerKind::Extremal,
        seed,
    })
}

/// Path statistics of one sample at a queried length p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathStats {
    /// Longest included path, in edges.
    pub longest: usize,
    /// Number of included paths with at least p edges.
    pub count_at_least_p: u128,
    pub max_height: u32,
    pub witness: Vec<u32>,
}

/// Longest path, height, and the number of paths of length >= p within the
/// included set. Consistent with the graph module's primitives.
pub fn path_stats(graph: &TruncatedGraph, sample: &SubgraphSample, p: usize) -> PathStats {
    let included = &sample.included;
    let heights = graph.heights(included);
    let max_height = heights.max_height();
    let longest = max_height.saturating_sub(1) as usize;

    // Witness: start at a vertex of maximal height (smallest index on ties)
    // and descend through included successors one height level at a time.
    let mut witness = Vec::new();
    if max_height > 0 {
        let start = (0..graph.vertex_count() as u32)
            .find(|&v| included[v as usize] && heights.value(v) == max_height)
            .expect("a vertex realizes the maximum height");
        witness.push(start);
        let mut current = start;
        while heights.value(current) > 1 {
            let target = heights.value(current) - 1;
            let mut next: Option<u32> = None;
            graph.for_each_successor(current, |s| {
                if included[s as usize] && heights.value(s) == target {
                    next = Some(match next {
                        None => s,
                        Some(prev) => prev.min(s),
                    });
                }
            });
            current = next.expect("height recursion yields a successor");
            witness.push(current);
        }
    }

    // paths_with_at_least[v][j]: included paths from v with >= j edges.
    // Row 0 counts every path from v including the trivial one.
    let vertex_count = graph.vertex_count();
    let mut table = vec![0u128; vertex_count * (p + 1)];
    let mut row = vec![0u128; p + 1];
    for &v in graph.topo_order().iter().rev() {
        if !included[v as usize] {
            continue;
        }
        row.fill(0);
        row[0] = 1;
        graph.for_each_successor(v, |s| {
            if included[s as usize] {
                let sbase = s as usize * (p + 1);
                for (j, slot) in row.iter_mut().enumerate() {
                    let from = j.saturating_sub(1);
                    *slot += table[sbase + from];
                }
            }
        });
        table[v as usize * (p + 1)..v as usize * (p + 1) + p + 1].copy_from_slice(&row);
    }
    let count_at_least_p: u128 = (0..vertex_count).map(|v| table[v * (p + 1) + p]).sum();
    PathStats {
        longest,
        count_at_least_p,
        max_height,
        witness,
    }
}

/// One row of a lambda sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(with = "crate::exact::rational_serde")]
    pub lambda: Rational,
    pub replicas: u32,
    pub freq_path_ge_p: f64,
    pub ci_halfwidth: f64,
    pub mean_inclusion: f64,
    /// Reference lower bound (lambda - lambda_G)/(1 - lambda_G) for the
    /// graph's threshold; a large-scale reference, not a finite-n claim.
    #[serde(with = "crate::exact::rational_serde")]
    pub corollary_bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub p: usize,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// Exact columns (lambda, the reference bound) print as fractions; the
    /// Monte Carlo columns are decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "lambda,replicas,freq_path_ge_p,ci_halfwidth,mean_inclusion,corollary_bound\n",
        );
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{:.6},{:.6},{:.6},{}\n",
                crate::exact::format_rational(row.lambda),
                row.replicas,
                row.freq_path_ge_p,
                row.ci_halfwidth,
                row.mean_inclusion,
                crate::exact::format_rational(row.corollary_bound),
            ));
        }
        out
    }
}

const Z_99: f64 = 2.5758293035489004;

/// Vertex threshold of the truncated graph's ambient spec, used for the
/// reference bound column of sweep reports.
pub fn spec_threshold(graph: &TruncatedGraph) -> Rational {
    match graph.spec() {
        GraphSpec::Shift => {
            let k = graph.k() as i64;
            Rational::new(k - 1, k)
        }
        GraphSpec::Relations(set) => set
            .members()
            .iter()
            .map(|rel| vertex_threshold(rel).exact().expect("exact"))
            .min()
            .expect("nonempty spec"),
    }
}

/// Sweep a lambda grid: per lambda, the frequency of "longest included path
/// has at least p edges" over coupled replicas, with 99% CIs.
///
/// Replica r uses per-vertex uniforms derived from (seed, r, vertex), shared
/// across every lambda: inclusion sets are nested along the grid, so
/// frequencies are non-decreasing pointwise, not just on average.
pub fn sweep(
    graph: &TruncatedGraph,
    lambdas: &[Rational],
    p: usize,
    replicas: u32,
    seed: u64,
) -> SweepReport {
    assert!(replicas >= 1);
    let mut lambdas: Vec<Rational> = lambdas.to_vec();
    lambdas.sort();
    let threshold = spec_threshold(graph);
    let vertex_count = graph.vertex_count();

    // Per replica, per lambda: does a path of length >= p survive, and how
    // many vertices are included. Deterministic fold in replica order.
    let per_replica: Vec<(Vec<bool>, Vec<usize>)> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let replica_seed = rng::derive(seed, &[rng::STREAM_REPLICA, r as u64]);
            let uniforms: Vec<f64> = (0..vertex_count as u64)
                .map(|v| rng::uniform(replica_seed, &[rng::STREAM_VERTEX, v]))
                .collect();
            let mut hit = Vec::with_capacity(lambdas.len());
            let mut counts = Vec::with_capacity(lambdas.len());
            for lambda in &lambdas {
                let l = to_f64(*lambda);
                let included: Vec<bool> = uniforms.iter().map(|&u| u < l).collect();
                let heights = graph.heights(&included);
                hit.push(heights.max_height() as usize > p);
                counts.push(included.iter().filter(|&&b| b).count());
            }
            (hit, counts)
        })
        .collect();

    let rows = lambdas
        .iter()
        .enumerate()
        .map(|(i, &lambda)| {
            let hits = per_replica.iter().filter(|(hit, _)| hit[i]).count();
            let freq = hits as f64 / replicas as f64;
            let mean_inclusion = per_replica
                .iter()
                .map(|(_, counts)| counts[i] as f64 / vertex_count as f64)
                .sum::<f64>()
                / replicas as f64;
            SweepRow {
                lambda,
                replicas,
                freq_path_ge_p: freq,
                ci_halfwidth: Z_99 * (freq * (1.0 - freq) / replicas as f64).sqrt(),
                mean_inclusion,
                corollary_bound: infinite_path_probability_bound(lambda, threshold)
                    .unwrap_or_else(|_| Rational::new(0, 1)),
            }
        })
        .collect();
    SweepReport { p, seed, rows }
}

/// Linear-interpolated crossing of the frequency curve at a target value.
pub fn empirical_threshold(report: &SweepReport, target: f64) -> Result<f64, PercolationError> {
    if report.rows.len() < 3 {
        return Err(PercolationError::NoCrossing);
    }
    for pair in report.rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let (fa, fb) = (a.freq_path_ge_p, b.freq_path_ge_p);
        if fa <= target && target <= fb {
            let (la, lb) = (to_f64(a.lambda), to_f64(b.lambda));
            if fb == fa {
                return Ok(la);
            }
            return Ok(la + (target - fa) * (lb - la) / (fb - fa));
        }
    }
    Err(PercolationError::NoCrossing)
}
