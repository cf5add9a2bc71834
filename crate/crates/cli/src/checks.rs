//! The reproduction table: one programmatic check per shipped claim, shared
//! by the `reproduce` subcommand and the acceptance test suite.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use serde::Serialize;

use shiftperc::debruijn::{alpha_mis_exact, alpha_ratio_report, alpha_subset_exact};
use shiftperc::exact::{format_rational, rational};
use shiftperc::graphs::{lift_edges, TruncatedGraph};
use shiftperc::pattern_oracle::{
    argmax_mod_descent_measure, best_pattern_coloring, descent_measure_exact, factorial,
    ColoringSpec,
};
use shiftperc::percolation::{path_stats, sample_extremal, sample_iid};
use shiftperc::relations::{
    edge_threshold, finite_path_bounds, vertex_threshold, OrderRelation, RelationSet,
};
use shiftperc::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: u32,
    pub name: &'static str,
    pub status: CheckStatus,
    pub millis: u128,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    Full,
    Tiny,
}

impl Budget {
    pub fn parse(s: &str) -> Option<Budget> {
        match s {
            "full" => Some(Budget::Full),
            "tiny" => Some(Budget::Tiny),
            _ => None,
        }
    }
}

fn run_check(
    id: u32,
    name: &'static str,
    body: impl FnOnce() -> Result<String, String> + std::panic::UnwindSafe,
) -> Check {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let millis = start.elapsed().as_millis();
    match outcome {
        Ok(Ok(detail)) => Check {
            id,
            name,
            status: CheckStatus::Pass,
            millis,
            detail,
        },
        Ok(Err(detail)) => Check {
            id,
            name,
            status: CheckStatus::Fail,
            millis,
            detail,
        },
        Err(panic) => {
            let detail = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Check {
                id,
                name,
                status: CheckStatus::Fail,
                millis,
                detail,
            }
        }
    }
}

fn skipped(id: u32, name: &'static str) -> Check {
    Check {
        id,
        name,
        status: CheckStatus::Skip,
        millis: 0,
        detail: "skipped (tiny budget)".into(),
    }
}

fn ensure(condition: bool, message: impl Fn() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

pub fn criterion_1_shift_thresholds() -> Check {
    run_check(1, "shift vertex/edge thresholds for k = 1..10", || {
        for k in 1..=10usize {
            let shift = OrderRelation::shift(k);
            let vertex = vertex_threshold(&shift).exact().expect("exact");
            let edge = edge_threshold(&shift).exact().expect("exact");
            ensure(vertex == rational(k as i64 - 1, k as i64), || {
                format!("vertex threshold at k={k}: got {vertex}")
            })?;
            ensure(edge == rational(k as i64, k as i64 + 1), || {
                format!("edge threshold at k={k}: got {edge}")
            })?;
        }
        ensure(
            vertex_threshold(&OrderRelation::shift(2)).exact() == Some(rational(1, 2)),
            || "k=2 vertex threshold must be 1/2".into(),
        )?;
        Ok("vertex (k-1)/k and edge k/(k+1) for k = 1..10".into())
    })
}

pub fn criterion_2_finite_path_bounds() -> Check {
    run_check(
        2,
        "finite-path bounds: pinned values and divisibility",
        || {
            let bounds = |p, k| finite_path_bounds(p, k).unwrap().bounds();
            ensure(bounds(2, 5) == (rational(2, 5), rational(2, 5)), || {
                format!("(2,5) gave {:?}", bounds(2, 5))
            })?;
            ensure(bounds(2, 3) == (rational(1, 3), rational(1, 3)), || {
                format!("(2,3) gave {:?}", bounds(2, 3))
            })?;
            let (lo, hi) = bounds(2, 6);
            ensure((lo, hi) == (rational(1, 3), rational(1, 2)), || {
                format!("(2,6) gave [{lo},{hi}]")
            })?;
            let reference = rational(5, 12);
            ensure(lo <= reference && reference < hi, || {
                format!("5/12 must sit inside [{lo},{hi})")
            })?;
            for p in 1..=9u64 {
                for k in 2..=9u64 {
                    let (lo, hi) = bounds(p, k);
                    if (k - 1) % p == 0 {
                        let expect = (rational(1, 1) - rational(1, p as i64))
                            * (rational(1, 1) - rational(1, k as i64));
                        ensure(lo == hi && lo == expect, || {
                            format!("divisible case (p,k)=({p},{k}): [{lo},{hi}] != {expect}")
                        })?;
                    } else {
                        ensure(lo < hi, || format!("({p},{k}) should be a strict interval"))?;
                    }
                }
            }
            Ok("pinned values (2,5), (2,3), (2,6) and every equality case p | k-1 up to 9".into())
        },
    )
}

pub fn criterion_3_oracle_attainment() -> Check {
    run_check(3, "lex-max attainment and upper-bound law", || {
        for w in 2..=7u64 {
            let shift = OrderRelation::shift(w as usize - 1);
            let measure = descent_measure_exact(&shift, &ColoringSpec::LexMax).unwrap();
            ensure(measure.ratio() == rational(w as i64 - 1, w as i64), || {
                format!("orbit width {w}: measure {:?}", measure)
            })?;
        }
        // Exhaustive explicit tables at arity <= 3 with p <= 3 against all
        // classes of that length: never above 1 - 1/w.
        for k in 2..=3usize {
            let classes = RelationSet::enumerate_classes(k).unwrap();
            let patterns = factorial(k);
            for p in 1..=3u64 {
                let total = p.pow(patterns as u32);
                for t in 0..total {
                    let mut colors = vec![0u8; patterns];
                    let mut x = t;
                    for c in colors.iter_mut() {
                        *c = (x % p) as u8;
                        x /= p;
                    }
                    let spec = ColoringSpec::table_from_colors(k, &colors);
                    for rel in classes.members() {
                        let measure = descent_measure_exact(rel, &spec).unwrap();
                        let w = rel.width() as i64;
                        ensure(measure.ratio() <= rational(w - 1, w), || {
                            format!("k={k} p={p} table {t} beats 1-1/w on {rel:?}")
                        })?;
                    }
                }
            }
        }
        Ok("lex-max hits 1 - 1/w for w = 2..7; all small tables obey the bound".into())
    })
}

pub fn criterion_4_construction_measures() -> Check {
    run_check(4, "window-chain construction measures", || {
        let measure = |p, k| argmax_mod_descent_measure(p, k).unwrap().ratio();
        for (p, k, expect) in [
            (2u8, 3usize, rational(1, 3)),
            (2, 5, rational(2, 5)),
            (2, 7, rational(3, 7)),
            (3, 7, rational(4, 7)),
        ] {
            let got = measure(p, k);
            ensure(got == expect, || {
                format!("({p},{k}): got {got}, want {expect}")
            })?;
            let lo = finite_path_bounds(p as u64, k as u64).unwrap().bounds().0;
            ensure(got == lo, || {
                format!("({p},{k}): measure {got} != lower bound {lo}")
            })?;
        }
        for k in [3i64, 5, 7, 9] {
            let got = measure(2, k as usize);
            ensure(got == rational(k - 1, 2 * k), || {
                format!("(2,{k}): got {got}, want {}", rational(k - 1, 2 * k))
            })?;
        }
        Ok("(2,3)=1/3, (2,5)=2/5, (2,7)=3/7, (3,7)=4/7 and (2,k)=(k-1)/2k for odd k".into())
    })
}

pub fn criterion_5_pattern_search() -> Check {
    run_check(5, "exhaustive pattern-coloring searches", || {
        let best32 = best_pattern_coloring(3, 2).unwrap();
        ensure(best32.exhaustive, || {
            "search (3,2) must be exhaustive".into()
        })?;
        ensure(best32.value.ratio() == rational(1, 3), || {
            format!("(3,2) best {:?}", best32.value)
        })?;
        let best42 = best_pattern_coloring(4, 2).unwrap();
        ensure(best42.exhaustive, || {
            "search (4,2) must be exhaustive".into()
        })?;
        let v = best42.value.ratio();
        ensure(v >= rational(1, 4) && v <= rational(1, 2), || {
            format!("(4,2) best {v} outside [1/4, 1/2]")
        })?;
        Ok(format!(
            "(3,2) max over 4 tables = 1/3; (4,2) max over 64 tables = {} in [1/4, 1/2]",
            format_rational(v)
        ))
    })
}

pub fn criterion_6_structural_percolation(seed: u64, budget: Budget) -> Check {
    if budget == Budget::Tiny {
        return skipped(6, "extremal percolation: no long paths, rate near 1/3");
    }
    run_check(
        6,
        "extremal percolation: no long paths, rate near 1/3",
        || {
            use rayon::prelude::*;
            let graph = TruncatedGraph::shift(3, 30).unwrap();
            let replicas = 10_000u64;
            let expected = argmax_mod_descent_measure(2, 3).unwrap().as_f64();
            let outcomes: Vec<(usize, f64)> = (0..replicas)
                .into_par_iter()
                .map(|r| {
                    let replica_seed = rng::derive(seed, &[rng::STREAM_REPLICA, r]);
                    let sample = sample_extremal(&graph, 2, replica_seed).unwrap();
                    let stats = path_stats(&graph, &sample, 2);
                    (
                        stats.longest,
                        sample.included_count() as f64 / graph.vertex_count() as f64,
                    )
                })
                .collect();
            for (r, (longest, _)) in outcomes.iter().enumerate() {
                ensure(*longest < 2, || {
                    format!("replica {r}: extremal sample contains a path of length 2")
                })?;
            }
            let rates: Vec<f64> = outcomes.iter().map(|&(_, rate)| rate).collect();
            let mean = rates.iter().sum::<f64>() / rates.len() as f64;
            let var =
                rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (rates.len() - 1) as f64;
            let se = (var / rates.len() as f64).sqrt();
            ensure((mean - expected).abs() < 3.0 * se, || {
                format!("inclusion mean {mean} not within 3 SE ({se}) of {expected}")
            })?;
            Ok(format!(
                "10^4 samples, zero paths of length 2; inclusion {mean:.5} vs 1/3 (SE {se:.6})"
            ))
        },
    )
}

pub fn criterion_7_coupled_monotonicity(seed: u64, budget: Budget) -> Check {
    if budget == Budget::Tiny {
        return skipped(7, "coupled lambda nesting of included sets");
    }
    run_check(7, "coupled lambda nesting of included sets", || {
        let graph = TruncatedGraph::shift(2, 100).unwrap();
        let grid = [0.1, 0.25, 0.4, 0.55, 0.7, 0.85];
        for r in 0..1000u64 {
            let replica_seed = rng::derive(seed, &[rng::STREAM_REPLICA, r]);
            let mut previous: Option<Vec<bool>> = None;
            for &lambda in &grid {
                let sample = sample_iid(&graph, lambda, replica_seed);
                if let Some(smaller) = &previous {
                    for (lo, hi) in smaller.iter().zip(&sample.included) {
                        ensure(!lo | hi, || {
                            format!("replica {r}: inclusion not nested at lambda {lambda}")
                        })?;
                    }
                }
                previous = Some(sample.included);
            }
        }
        Ok("10^3 replicas, 6-point grid, exact subset nesting".into())
    })
}

pub fn criterion_8_debruijn(seed: u64, budget: Budget) -> Check {
    if budget == Budget::Tiny {
        return skipped(8, "de Bruijn dual-method agreement and ratio trend");
    }
    run_check(8, "de Bruijn dual-method agreement and ratio trend", || {
        for (d, k) in [(2u32, 2u32), (2, 3), (2, 4), (2, 5), (3, 3)] {
            let subset = alpha_subset_exact(d, k).map_err(|e| e.to_string())?;
            let mis = alpha_mis_exact(d, k).map_err(|e| e.to_string())?;
            ensure(subset.alpha == mis.alpha, || {
                format!(
                    "({d},{k}): subset {} vs independent-set {}",
                    subset.alpha, mis.alpha
                )
            })?;
        }
        ensure(alpha_subset_exact(2, 2).unwrap().alpha == 1, || {
            "alpha(2,2) != 1".into()
        })?;
        ensure(alpha_subset_exact(2, 3).unwrap().alpha == 2, || {
            "alpha(2,3) != 2".into()
        })?;
        let report = alpha_ratio_report(2, 4, 3, seed).map_err(|e| e.to_string())?;
        let ratios: Vec<f64> = report.rows.iter().map(|r| r.ratio).collect();
        ensure(ratios.windows(2).all(|w| w[0] < w[1]), || {
            format!("ratios not increasing: {ratios:?}")
        })?;
        ensure(ratios.iter().all(|&r| r < 1.0 / 3.0), || {
            format!("ratios must stay below 1/3: {ratios:?}")
        })?;
        Ok(format!(
            "methods agree on five instances; k=3 ratios {ratios:?} rise toward 1/3"
        ))
    })
}

pub fn criterion_9_equivalence_classes(seed: u64) -> Check {
    run_check(9, "equivalence classes: counts and completeness", || {
        let e1 = RelationSet::enumerate_classes(1).unwrap();
        ensure(e1.len() == 1, || format!("|E_1| = {}", e1.len()))?;
        let e2 = RelationSet::enumerate_classes(2).unwrap();
        ensure(e2.len() == 4, || format!("|E_2| = {}", e2.len()))?;
        let shift = OrderRelation::shift(2).pattern();
        ensure(e2.members().iter().any(|r| r.pattern() == shift), || {
            "shift pattern missing from E_2".into()
        })?;
        let mut gen = rng::SplitMix64::new(rng::derive(seed, &[9]));
        for trial in 0..200 {
            let k = 1 + (trial % 3);
            let rel = random_valid_relation(k, 18, &mut gen);
            let classes = RelationSet::enumerate_classes(k).unwrap();
            let matches = classes
                .members()
                .iter()
                .filter(|c| c.pattern() == rel.pattern())
                .count();
            ensure(matches == 1, || {
                format!("relation {rel:?} matched {matches} classes of length {k}")
            })?;
        }
        Ok("|E_1| = 1, |E_2| = 4 with shift present; 200 random relations each match once".into())
    })
}

pub fn criterion_10_lifting() -> Check {
    run_check(10, "edge-to-vertex lifting identity", || {
        for k in 1..=8usize {
            let shift = OrderRelation::shift(k);
            let lifted = lift_edges(&shift);
            ensure(lifted.len() == 1, || {
                format!("lift of shift {k} has {} members", lifted.len())
            })?;
            let lifted_vertex = vertex_threshold(&lifted.members()[0]).exact();
            let edge = edge_threshold(&shift).exact();
            ensure(lifted_vertex == edge, || {
                format!("k={k}: lifted vertex {lifted_vertex:?} != edge {edge:?}")
            })?;
        }
        Ok("vertex(lift(shift k)) = edge(shift k) = k/(k+1) for k = 1..8".into())
    })
}

fn random_valid_relation(k: usize, bound: u64, gen: &mut rng::SplitMix64) -> OrderRelation {
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

/// Run the whole table.
pub fn run_all(seed: u64, budget: Budget) -> Vec<Check> {
    vec![
        criterion_1_shift_thresholds(),
        criterion_2_finite_path_bounds(),
        criterion_3_oracle_attainment(),
        criterion_4_construction_measures(),
        criterion_5_pattern_search(),
        criterion_6_structural_percolation(seed, budget),
        criterion_7_coupled_monotonicity(seed, budget),
        criterion_8_debruijn(seed, budget),
        criterion_9_equivalence_classes(seed),
        criterion_10_lifting(),
    ]
}
